//! Exact hull and face lattice of `conv(W·x)`:
//! `cargo run --example orbit_polytope -- B3 2,1,0`

use orbitope_lab::polytope::RationalPolytope;
use orbitope_lab::rational::{fmt_qvector, fmt_rational, parse_qvector};
use orbitope_lab::rootsys::RootSystem;
use orbitope_lab::weyl::WeylGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let label = args.next().unwrap_or_else(|| "A3".to_string());
    let x = args.next().unwrap_or_else(|| "3,1,-1,-3".to_string());
    let rs = RootSystem::from_label(&label)?;
    let w = WeylGroup::generate(&rs)?;
    let x = parse_qvector(&x)?;
    let p = RationalPolytope::hull(&w.orbit(&x)?)?;

    println!(
        "conv(W·{}) in {label}: dim {}, {} vertices",
        fmt_qvector(&x),
        p.dim(),
        p.vertices().len()
    );
    println!("f-vector {:?}", p.f_vector()?);
    println!("facets:");
    for f in p.facets() {
        println!(
            "  {} · y <= {}  ({} vertices)",
            fmt_qvector(&f.normal),
            fmt_rational(&f.offset),
            f.vertices.len()
        );
    }
    println!("faces up to W:");
    for o in p.faces_up_to_group(&w)? {
        let rep: Vec<String> = o
            .representative
            .vertex_indices
            .iter()
            .map(|&i| fmt_qvector(&p.vertices()[i]))
            .collect();
        println!(
            "  dim {}  x{:<3} {}",
            o.representative.dim,
            o.orbit_size,
            rep.join(" ")
        );
    }
    Ok(())
}
