//! Weyl group orders, orbits and stabilizers: `cargo run --example weyl_orbits`

use orbitope_lab::rational::{fmt_qvector, qvec};
use orbitope_lab::rootsys::RootSystem;
use orbitope_lab::weyl::WeylGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for label in ["A1", "A2", "A3", "B2", "B3", "C3", "BC2", "D3", "G2", "F4"] {
        let rs = RootSystem::from_label(label)?;
        let w = WeylGroup::generate(&rs)?;
        println!("{label:>4}: |W| = {}", w.order());
    }

    let rs = RootSystem::from_label("A2")?;
    let w = WeylGroup::generate(&rs)?;
    for x in [qvec(&[2, 0, -2]), qvec(&[1, 1, -2]), qvec(&[-1, 3, -2])] {
        let (dominant, element) = w.to_dominant(&x)?;
        let orbit = w.orbit(&x)?;
        let stab = w.stabilizer(&dominant)?;
        println!(
            "\nx = {}  x+ = {} (element {element}, word {:?})",
            fmt_qvector(&x),
            fmt_qvector(&dominant),
            w.word(element)
        );
        println!(
            "walls {}  |orbit| = {}  |stabilizer| = {}",
            rs.wall_set(&dominant)?,
            orbit.len(),
            stab.len()
        );
        for v in orbit {
            println!("  {}", fmt_qvector(&v));
        }
    }
    Ok(())
}
