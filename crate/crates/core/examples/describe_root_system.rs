//! Prints the root data of a system: `cargo run --example describe_root_system -- BC2`

use orbitope_lab::rational::fmt_qvector;
use orbitope_lab::rootsys::{build_root_system, RootSystemError};

fn main() -> Result<(), RootSystemError> {
    let source = std::env::args().nth(1).unwrap_or_else(|| "BC2".to_string());
    let rs = build_root_system(&source)?;
    println!("{}", rs.realization());
    println!(
        "rank {}, {} roots, dim g = {}",
        rs.rank(),
        rs.roots().len(),
        rs.dim_g()
    );
    println!("non-reduced: {}", rs.is_non_reduced());
    for (k, a) in rs.simple_roots().iter().enumerate() {
        println!("  a{} = {}", k + 1, fmt_qvector(a));
    }
    println!("positive roots (multiplicity):");
    for (k, r) in rs.positive_roots().iter().enumerate() {
        println!("  {}  ({})", fmt_qvector(r), rs.multiplicity(k));
    }
    println!("Cartan matrix:");
    for row in rs.cartan_matrix() {
        println!("  {}", fmt_qvector(&row));
    }
    println!("fundamental coweights:");
    for w in rs.fundamental_coweights() {
        println!("  {}", fmt_qvector(&w));
    }
    println!("\nfile form:\n{}", rs.to_text());
    Ok(())
}
