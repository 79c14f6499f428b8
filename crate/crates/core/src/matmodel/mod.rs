//! Floating-point matrix models of two polar representations:
//!
//! * `SYM(n)`: traceless symmetric matrices under conjugation by `SO(n)`;
//!   the Cartan subspace is the diagonal, restricted roots `A_{n-1}`.
//! * `SKEW(n)`: skew-symmetric matrices under conjugation by `SO(n)`; the
//!   Cartan subspace is the 2×2 block-rotation form, restricted roots
//!   `D_{n/2}` (even `n`) or `B_{(n-1)/2}` (odd `n`), every multiplicity 2.
//!
//! Exact data enters as rationals and is converted to `f64` here. All
//! tolerances are relative to `‖x‖` (and `‖β‖` where a height function is
//! involved).

mod calculus;
mod hull_distance;

use std::fmt;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polytope::RationalPolytope;
use crate::rational::{to_f64_vec, Rat};
use crate::rootsys::{RootSystem, RootSystemError};
use crate::weyl::{WeylError, WeylGroup};

pub use calculus::{
    ascend_height, ext_face_dim_check, hessian_check, hessian_closed_form, local_max_test,
    second_derivative_fd, HessianReport, LocalMaxVerdict,
};
pub use hull_distance::distance_to_hull;

/// Facet slack and spectrum tolerance, relative to `‖x‖`.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Matching tolerance for maximizers and coverage, relative to `‖x‖`.
pub const MATCH_TOL: f64 = 1e-6;
/// Singular-value threshold for numeric ranks, relative to `‖x‖`.
pub const RANK_TOL: f64 = 1e-8;
/// Centered-difference step.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("unsupported model {kind}({n})")]
    Unsupported { kind: ModelKind, n: usize },
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("expected {expected} Cartan coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("descriptor does not belong to this model: {0}")]
    DescriptorMismatch(String),
    #[error("unknown model {0:?}; expected e.g. sym3 or skew4")]
    UnknownModel(String),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModelKind {
    #[serde(rename = "SYM")]
    Sym,
    #[serde(rename = "SKEW")]
    Skew,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Sym => "SYM",
            ModelKind::Skew => "SKEW",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MatrixModel {
    kind: ModelKind,
    n: usize,
    root_system: RootSystem,
}

impl MatrixModel {
    pub fn new(kind: ModelKind, n: usize) -> Result<Self, ModelError> {
        let unsupported = || ModelError::Unsupported { kind, n };
        let root_system = match kind {
            ModelKind::Sym if n >= 2 => RootSystem::from_label(&format!("A{}", n - 1))?,
            ModelKind::Skew if n >= 3 => {
                let m = n / 2;
                let label = if n.is_multiple_of(2) {
                    format!("D{m}")
                } else {
                    format!("B{m}")
                };
                RootSystem::from_label(&label)
                    .map_err(|_| unsupported())?
                    .with_uniform_multiplicity(2)
                    .with_centralizer_dim(m)
            }
            _ => return Err(unsupported()),
        };
        Ok(MatrixModel {
            kind,
            n,
            root_system,
        })
    }

    /// `"sym3"`, `"skew4"`, ...
    pub fn parse(name: &str) -> Result<Self, ModelError> {
        let lower = name.trim().to_ascii_lowercase();
        let (kind, rest) = if let Some(r) = lower.strip_prefix("sym") {
            (ModelKind::Sym, r)
        } else if let Some(r) = lower.strip_prefix("skew") {
            (ModelKind::Skew, r)
        } else {
            return Err(ModelError::UnknownModel(name.to_string()));
        };
        let n: usize = rest
            .parse()
            .map_err(|_| ModelError::UnknownModel(name.to_string()))?;
        Self::new(kind, n)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.kind.to_string().to_ascii_lowercase(), self.n)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn cartan_dim(&self) -> usize {
        self.root_system.ambient_dim()
    }

    /// Scale making the Cartan embedding an isometry: `⟨X, Y⟩ = c·tr(XᵀY)`.
    pub fn form_scale(&self) -> f64 {
        match self.kind {
            ModelKind::Sym => 1.0,
            ModelKind::Skew => 0.5,
        }
    }

    pub fn inner(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        self.form_scale() * a.dot(b)
    }

    pub fn cartan_embed(&self, coords: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        match self.kind {
            ModelKind::Sym => {
                for (i, c) in coords.iter().enumerate() {
                    m[(i, i)] = *c;
                }
            }
            ModelKind::Skew => {
                for (k, c) in coords.iter().enumerate() {
                    m[(2 * k, 2 * k + 1)] = *c;
                    m[(2 * k + 1, 2 * k)] = -*c;
                }
            }
        }
        m
    }

    /// Orthogonal projection onto the Cartan subspace, in Cartan coordinates.
    pub fn project(&self, y: &DMatrix<f64>) -> Vec<f64> {
        match self.kind {
            ModelKind::Sym => (0..self.n).map(|i| y[(i, i)]).collect(),
            ModelKind::Skew => (0..self.n / 2).map(|k| y[(2 * k, 2 * k + 1)]).collect(),
        }
    }

    /// Conjugation invariants: sorted eigenvalues (SYM) or sorted singular
    /// values (SKEW).
    pub fn invariants(&self, y: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = match self.kind {
            ModelKind::Sym => y.clone().symmetric_eigenvalues().iter().copied().collect(),
            ModelKind::Skew => y.clone().singular_values().iter().copied().collect(),
        };
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Basis `E_ab − E_ba` (`a < b`) of the rotation algebra.
    pub fn rotation_basis(&self) -> Vec<DMatrix<f64>> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut m = DMatrix::zeros(n, n);
                m[(a, b)] = 1.0;
                m[(b, a)] = -1.0;
                out.push(m);
            }
        }
        out
    }

    pub fn check_cartan(&self, coords: &[Rat]) -> Result<Vec<f64>, ModelError> {
        if coords.len() != self.cartan_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.cartan_dim(),
                found: coords.len(),
            });
        }
        Ok(to_f64_vec(coords))
    }

    pub fn weyl_group(&self) -> Result<WeylGroup, ModelError> {
        Ok(WeylGroup::generate(&self.root_system)?)
    }
}

pub fn make_model(kind: ModelKind, n: usize) -> Result<MatrixModel, ModelError> {
    MatrixModel::new(kind, n)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Haar-distributed element of `SO(n)`: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal moved into `Q`, then one column flipped if the
/// determinant is negative.
pub fn haar_rotation<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Points `g·x·gᵀ` on one orbit, with their Cartan projections.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub kind: ModelKind,
    pub n: usize,
    pub form_scale: f64,
    pub x_cartan: Vec<f64>,
    pub base_point: DMatrix<f64>,
    pub points: Vec<DMatrix<f64>>,
    pub projections: Vec<Vec<f64>>,
    pub seed: u64,
}

impl OrbitSample {
    /// Sample from explicitly given group elements.
    pub fn from_group_elements(
        model: &MatrixModel,
        x_cartan: &[Rat],
        elements: &[DMatrix<f64>],
    ) -> Result<Self, ModelError> {
        let x = model.check_cartan(x_cartan)?;
        let base = model.cartan_embed(&x);
        let points: Vec<DMatrix<f64>> =
            elements.iter().map(|g| g * &base * g.transpose()).collect();
        Ok(Self::assemble(model, x, base, points, 0))
    }

    fn assemble(
        model: &MatrixModel,
        x_cartan: Vec<f64>,
        base_point: DMatrix<f64>,
        points: Vec<DMatrix<f64>>,
        seed: u64,
    ) -> Self {
        let projections = points.iter().map(|p| model.project(p)).collect();
        OrbitSample {
            kind: model.kind,
            n: model.n,
            form_scale: model.form_scale(),
            x_cartan,
            base_point,
            points,
            projections,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn x_norm(&self) -> f64 {
        norm(&self.x_cartan)
    }
}

/// `n_samples` Haar-random points of the orbit through `x_cartan`. Point `i`
/// uses its own ChaCha stream `i` under `seed`, so the result does not
/// depend on thread scheduling.
pub fn sample_orbit(
    model: &MatrixModel,
    x_cartan: &[Rat],
    n_samples: usize,
    seed: u64,
) -> Result<OrbitSample, ModelError> {
    if n_samples == 0 {
        return Err(ModelError::EmptySample);
    }
    let x = model.check_cartan(x_cartan)?;
    let base = model.cartan_embed(&x);
    let n = model.n;
    let points: Vec<DMatrix<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let g = haar_rotation(n, &mut rng);
            &g * &base * g.transpose()
        })
        .collect();
    Ok(OrbitSample::assemble(model, x, base, points, seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct KostantReport {
    /// Worst signed distance outside `P` over all projections, relative to
    /// nothing (absolute units); `≤ 0` means inside.
    pub max_violation: f64,
    /// Fraction of vertices of `P` within `coverage_tol·‖x‖` of a projection.
    pub coverage: f64,
    pub coverage_tol: f64,
    /// Largest over vertices of the closest-projection distance, over `‖x‖`.
    pub worst_vertex_gap: f64,
    /// Largest deviation of a sampled point's invariants from those of `x`.
    pub max_invariant_error: f64,
    pub samples: usize,
}

/// Facet violation and vertex coverage of the projected sample against the
/// exact polytope `conv(W·x)`.
pub fn kostant_check(
    sample: &OrbitSample,
    p: &RationalPolytope,
) -> Result<KostantReport, ModelError> {
    kostant_check_with(sample, p, MATCH_TOL)
}

pub fn kostant_check_with(
    sample: &OrbitSample,
    p: &RationalPolytope,
    coverage_tol: f64,
) -> Result<KostantReport, ModelError> {
    if p.ambient_dim() != sample.x_cartan.len() {
        return Err(ModelError::DimensionMismatch {
            expected: sample.x_cartan.len(),
            found: p.ambient_dim(),
        });
    }
    let facets: Vec<(Vec<f64>, f64)> = p
        .facets()
        .iter()
        .map(|f| {
            let nrm = to_f64_vec(&f.normal);
            let len = norm(&nrm);
            (
                nrm.iter().map(|c| c / len).collect(),
                crate::rational::to_f64(&f.offset) / len,
            )
        })
        .collect();
    let hull_basis = affine_basis(p);
    let origin = to_f64_vec(&p.vertices()[0]);
    let vertices: Vec<Vec<f64>> = p.vertices().iter().map(|v| to_f64_vec(v)).collect();
    let mut max_violation = f64::NEG_INFINITY;
    let mut closest = vec![f64::INFINITY; vertices.len()];
    for q in &sample.projections {
        let mut worst = affine_residual(&hull_basis, &origin, q);
        for (nrm, off) in &facets {
            let v: f64 = nrm.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() - off;
            worst = worst.max(v);
        }
        max_violation = max_violation.max(worst);
        for (c, v) in closest.iter_mut().zip(&vertices) {
            let d = norm(&v.iter().zip(q).map(|(a, b)| a - b).collect::<Vec<_>>());
            *c = c.min(d);
        }
    }
    let xn = sample.x_norm();
    let reference = invariants_of(sample, &sample.base_point);
    let max_invariant_error = sample
        .points
        .iter()
        .map(|y| {
            invariants_of(sample, y)
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let covered = closest.iter().filter(|&&d| d <= coverage_tol * xn).count();
    let worst_gap = closest.iter().copied().fold(0.0, f64::max);
    Ok(KostantReport {
        max_violation,
        coverage: covered as f64 / vertices.len() as f64,
        coverage_tol,
        worst_vertex_gap: if xn > 0.0 { worst_gap / xn } else { worst_gap },
        max_invariant_error,
        samples: sample.len(),
    })
}

fn invariants_of(sample: &OrbitSample, y: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = match sample.kind {
        ModelKind::Sym => y.clone().symmetric_eigenvalues().iter().copied().collect(),
        ModelKind::Skew => y.clone().singular_values().iter().copied().collect(),
    };
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Orthonormal basis (f64) of the direction space of `P`'s affine hull.
fn affine_basis(p: &RationalPolytope) -> Vec<Vec<f64>> {
    let v0 = to_f64_vec(&p.vertices()[0]);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in p.vertices() {
        let mut d: Vec<f64> = to_f64_vec(v).iter().zip(&v0).map(|(a, b)| a - b).collect();
        for b in &basis {
            let c: f64 = d.iter().zip(b).map(|(x, y)| x * y).sum();
            d.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let len = norm(&d);
        if len > 1e-12 * (1.0 + norm(&v0)) && basis.len() < p.dim() {
            basis.push(d.iter().map(|x| x / len).collect());
        }
    }
    basis
}

fn affine_residual(basis: &[Vec<f64>], origin: &[f64], q: &[f64]) -> f64 {
    let mut d: Vec<f64> = q.iter().zip(origin).map(|(a, b)| a - b).collect();
    for b in basis {
        let c: f64 = d.iter().zip(b).map(|(x, y)| x * y).sum();
        d.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    norm(&d)
}

/// Height `⟨y, β⟩` of every sample point; returns the best value and the
/// indices of all points within `MATCH_TOL·‖x‖·‖β‖` of it.
pub fn argmax_height(
    sample: &OrbitSample,
    beta_cartan: &[Rat],
) -> Result<(f64, Vec<usize>), ModelError> {
    if sample.is_empty() {
        return Err(ModelError::EmptySample);
    }
    if beta_cartan.len() != sample.x_cartan.len() {
        return Err(ModelError::DimensionMismatch {
            expected: sample.x_cartan.len(),
            found: beta_cartan.len(),
        });
    }
    let beta = to_f64_vec(beta_cartan);
    // ⟨y, embed β⟩ = ⟨π(y), β⟩ since the embedding is an isometry
    let heights: Vec<f64> = sample
        .projections
        .iter()
        .map(|q| q.iter().zip(&beta).map(|(a, b)| a * b).sum())
        .collect();
    let best = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = MATCH_TOL * sample.x_norm() * norm(&beta);
    let top = (0..heights.len())
        .filter(|&i| heights[i] >= best - tol)
        .collect();
    Ok((best, top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    #[test]
    fn model_root_systems() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        assert_eq!(m.root_system().label(), "A2");
        let m = make_model(ModelKind::Skew, 4).unwrap();
        assert_eq!(m.root_system().roots().len(), 4);
        assert_eq!(m.root_system().rank(), 2);
        assert!(m.root_system().multiplicities().iter().all(|&k| k == 2));
        // so(4,C) as a real algebra
        assert_eq!(m.root_system().dim_g(), 12);
        assert_eq!(
            make_model(ModelKind::Skew, 5)
                .unwrap()
                .root_system()
                .dim_g(),
            20
        );
        assert_eq!(
            make_model(ModelKind::Sym, 2).unwrap().root_system().label(),
            "A1"
        );
        assert!(make_model(ModelKind::Sym, 1).is_err());
        assert!(make_model(ModelKind::Skew, 2).is_err());
        assert_eq!(MatrixModel::parse("skew5").unwrap().cartan_dim(), 2);
        assert!(MatrixModel::parse("herm3").is_err());
    }

    #[test]
    fn cartan_embedding_is_isometric() {
        for (kind, n, c) in [
            (ModelKind::Sym, 3, vec![2.0, 0.0, -2.0]),
            (ModelKind::Skew, 4, vec![3.0, -1.0]),
            (ModelKind::Skew, 5, vec![1.5, 0.5]),
        ] {
            let m = make_model(kind, n).unwrap();
            let e = m.cartan_embed(&c);
            assert!((m.inner(&e, &e) - norm(&c).powi(2)).abs() < 1e-12);
            assert_eq!(m.project(&e), c);
        }
    }

    #[test]
    fn haar_elements_are_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..6 {
            let g = haar_rotation(n, &mut rng);
            let err = (&g * g.transpose() - DMatrix::identity(n, n)).abs().max();
            assert!(err < 1e-12);
            assert!((g.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_sample_keeps_spectrum() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let s = sample_orbit(&m, &qvec(&[2, 0, -2]), 1, 11).unwrap();
        let ev = m.invariants(&s.points[0]);
        for (a, b) in ev.iter().zip([2.0, 0.0, -2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(
            sample_orbit(&m, &qvec(&[2, 0, -2]), 0, 1).unwrap_err(),
            ModelError::EmptySample
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = make_model(ModelKind::Skew, 4).unwrap();
        let a = sample_orbit(&m, &qvec(&[2, 1]), 50, 3).unwrap();
        let b = sample_orbit(&m, &qvec(&[2, 1]), 50, 3).unwrap();
        assert_eq!(a.points, b.points);
        let c = sample_orbit(&m, &qvec(&[2, 1]), 50, 4).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn identity_element_reproduces_x() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let x = qvec(&[2, 0, -2]);
        let s = OrbitSample::from_group_elements(&m, &x, &[DMatrix::identity(3, 3)]).unwrap();
        assert_eq!(s.projections[0], vec![2.0, 0.0, -2.0]);
        let w = m.weyl_group().unwrap();
        let p = RationalPolytope::hull(&w.orbit(&x).unwrap()).unwrap();
        let r = kostant_check(&s, &p).unwrap();
        assert!(r.max_violation <= 0.0);
    }

    #[test]
    fn zero_point_is_trivial() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let x = qvec(&[0, 0, 0]);
        let s = sample_orbit(&m, &x, 20, 5).unwrap();
        let w = m.weyl_group().unwrap();
        let p = RationalPolytope::hull(&w.orbit(&x).unwrap()).unwrap();
        let r = kostant_check(&s, &p).unwrap();
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn skew_model_projections_stay_inside() {
        for n in [4, 5] {
            let m = make_model(ModelKind::Skew, n).unwrap();
            let x = qvec(&[3, 1]);
            let s = sample_orbit(&m, &x, 500, 9).unwrap();
            let w = m.weyl_group().unwrap();
            let p = RationalPolytope::hull(&w.orbit(&x).unwrap()).unwrap();
            let r = kostant_check(&s, &p).unwrap();
            assert!(
                r.max_violation <= VIOLATION_TOL * norm(&s.x_cartan),
                "{n}: {r:?}"
            );
            assert!(r.max_invariant_error <= VIOLATION_TOL * norm(&s.x_cartan));
        }
    }

    #[test]
    fn argmax_edge_cases() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let s = sample_orbit(&m, &qvec(&[2, 0, -2]), 100, 1).unwrap();
        let (best, top) = argmax_height(&s, &qvec(&[0, 0, 0])).unwrap();
        assert_eq!(best, 0.0);
        assert_eq!(top.len(), 100);
        assert!(argmax_height(&s, &qvec(&[1, 0])).is_err());
        let (best, _) = argmax_height(&s, &qvec(&[1, 0, -1])).unwrap();
        assert!(best <= 4.0 + 1e-9);
    }
}
