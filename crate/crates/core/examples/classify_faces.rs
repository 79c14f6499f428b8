//! Face classes of the orbitope from root data alone:
//! `cargo run --example classify_faces -- C3 1,1,0`

use orbitope_lab::facelab::{classify_faces, x_connected_subsets};
use orbitope_lab::rational::{fmt_qvector, parse_qvector};
use orbitope_lab::rootsys::RootSystem;
use orbitope_lab::weyl::WeylGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let label = args.next().unwrap_or_else(|| "B3".to_string());
    let x = args.next().unwrap_or_else(|| "2,1,0".to_string());
    let rs = RootSystem::from_label(&label)?;
    let w = WeylGroup::generate(&rs)?;
    let (x, _) = w.to_dominant(&parse_qvector(&x)?)?;

    println!(
        "{label}, x+ = {}, walls {}",
        fmt_qvector(&x),
        rs.wall_set(&x)?
    );
    let subsets: Vec<String> = x_connected_subsets(&rs, &x)?
        .iter()
        .map(|s| s.to_string())
        .collect();
    println!("x-connected subsets: {}", subsets.join(" "));
    println!(
        "{:<12} {:<12} {:>4} {:>8} {:>5} {:>5} {:>5}  beta",
        "I", "J", "dim", "vertices", "extF", "q_J", "n_J"
    );
    for d in classify_faces(&rs, &w, &x)? {
        println!(
            "{:<12} {:<12} {:>4} {:>8} {:>5} {:>5} {:>5}  {}",
            d.i.to_string(),
            d.j.to_string(),
            d.dim_sigma,
            d.sigma_vertices.len(),
            d.dim_ext_f,
            d.dim_q_j,
            d.dim_n_j,
            fmt_qvector(&d.beta)
        );
    }
    Ok(())
}
