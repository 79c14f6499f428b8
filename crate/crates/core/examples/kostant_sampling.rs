//! Haar samples of an orbit in a matrix model, projected to the Cartan
//! subspace and compared with `conv(W·x)`:
//! `cargo run --release --example kostant_sampling -- sym4 3,1,-1,-3 20000`

use orbitope_lab::matmodel::{argmax_height, kostant_check_with, sample_orbit, MatrixModel};
use orbitope_lab::polytope::RationalPolytope;
use orbitope_lab::rational::{fmt_rational, parse_qvector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let model = MatrixModel::parse(&args.next().unwrap_or_else(|| "sym3".to_string()))?;
    let x = parse_qvector(&args.next().unwrap_or_else(|| "2,0,-2".to_string()))?;
    let n: usize = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10_000);

    let w = model.weyl_group()?;
    let p = RationalPolytope::hull(&w.orbit(&x)?)?;
    let sample = sample_orbit(&model, &x, n, 42)?;
    println!(
        "{} with {} ({} samples)",
        model.name(),
        model.root_system().label(),
        sample.len()
    );
    for tol in [1e-1, 1e-2, 1e-3, 1e-6] {
        let r = kostant_check_with(&sample, &p, tol)?;
        println!(
            "coverage at {tol:e}·|x|: {:.3}   max violation {:.2e}   invariant error {:.2e}",
            r.coverage, r.max_violation, r.max_invariant_error
        );
    }
    for f in p.facets() {
        let (best, top) = argmax_height(&sample, &f.normal)?;
        let (support, _) = p.support(&f.normal)?;
        println!(
            "facet normal {:?}: best sampled height {best:.6}, support {}, {} maximizers",
            f.normal.iter().map(fmt_rational).collect::<Vec<_>>(),
            fmt_rational(&support),
            top.len()
        );
    }
    Ok(())
}
