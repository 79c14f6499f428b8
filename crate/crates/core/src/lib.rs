//! Face classification of polar orbitopes from restricted root data.
//!
//! The exact side ([`rootsys`], [`weyl`], [`polytope`], [`facelab`]) works
//! over the rationals; [`matmodel`] corroborates the combinatorics in
//! floating point on concrete matrix models.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod facelab;
pub mod matmodel;
pub mod polytope;
pub mod rational;
pub mod rootsys;
pub mod weyl;
