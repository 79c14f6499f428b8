//! Checks the face classification against the brute-force face lattice for
//! every wall type of several systems: `cargo run --release --example verify_bijection`

use orbitope_lab::facelab::{dominant_with_walls, verify_bijection};
use orbitope_lab::rational::fmt_qvector;
use orbitope_lab::rootsys::{RootSystem, SimpleSet};
use orbitope_lab::weyl::WeylGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let labels: Vec<String> = std::env::args().skip(1).collect();
    let labels = if labels.is_empty() {
        ["A1", "A2", "A3", "B2", "B3", "C3", "BC2", "D3", "G2"]
            .map(String::from)
            .to_vec()
    } else {
        labels
    };
    let mut failures = 0;
    for label in &labels {
        let rs = RootSystem::from_label(label)?;
        let w = WeylGroup::generate(&rs)?;
        let full = SimpleSet::full(rs.rank());
        for walls in SimpleSet::all_subsets(rs.rank()).filter(|s| *s != full) {
            let x = dominant_with_walls(&rs, walls)?;
            let r = verify_bijection(&rs, &w, &x)?;
            println!(
                "{label:>4} walls {:<14} x = {:<24} {} face orbits, {} descriptors: {}",
                walls.to_string(),
                fmt_qvector(&x),
                r.face_orbits,
                r.descriptors,
                if r.passed() { "ok" } else { "MISMATCH" }
            );
            if let Some(c) = r.first_counterexample() {
                failures += 1;
                println!("      {c}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
    Ok(())
}
