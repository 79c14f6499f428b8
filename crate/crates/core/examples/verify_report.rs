//! Builds the full verification report that `orbitope-lab verify` prints:
//! `cargo run --release --example verify_report -- A2 2,0,-2 sym3`

use orbitope_lab::cli::{cmd_verify, to_json, RunConfig};
use orbitope_lab::rational::parse_qvector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let system = args.next().unwrap_or_else(|| "A2".to_string());
    let x = parse_qvector(&args.next().unwrap_or_else(|| "2,0,-2".to_string()))?;
    let mut config = RunConfig::new(&system, x)?;
    if let Some(model) = args.next() {
        config = config.with_model(&model)?;
    }
    config.n_samples = 5_000;
    let report = cmd_verify(&config)?;
    print!("{}", to_json(&report)?);
    eprintln!("overall: {}", if report.passed() { "pass" } else { "fail" });
    Ok(())
}
