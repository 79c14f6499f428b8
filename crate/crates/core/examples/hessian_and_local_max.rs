//! Second-order behaviour of the height function on an orbit, and the
//! extreme-orbit dimensions of each face class:
//! `cargo run --example hessian_and_local_max`

use orbitope_lab::facelab::classify_faces;
use orbitope_lab::matmodel::{ext_face_dim_check, hessian_check, local_max_test, MatrixModel};
use orbitope_lab::rational::{fmt_qvector, qvec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = MatrixModel::parse("sym3")?;
    let x = qvec(&[2, 0, -2]);
    for beta in [
        qvec(&[1, 1, -2]),
        qvec(&[-2, 0, 2]),
        qvec(&[0, 1, -1]),
        qvec(&[0, 0, 0]),
    ] {
        let v = local_max_test(&model, &x, &beta, 1)?;
        println!(
            "beta = {:<14} common chamber {:<5}  numeric {:<5}  top eigenvalue {:+.3e}",
            fmt_qvector(&beta),
            v.chamber,
            v.numeric,
            v.max_hessian_eigenvalue
        );
    }

    for name in ["sym3", "skew4", "skew5"] {
        let model = MatrixModel::parse(name)?;
        let x = if model.cartan_dim() == 3 {
            qvec(&[2, 0, -2])
        } else {
            qvec(&[3, 1])
        };
        let beta = x.clone();
        let r = hessian_check(&model, &x, &beta, 100, 7)?;
        println!(
            "{name}: closed form vs finite differences, max error {:.2e} (scale {:.2})",
            r.max_abs_error, r.scale
        );

        let w = model.weyl_group()?;
        for d in classify_faces(model.root_system(), &w, &x)? {
            let (numeric, predicted) = ext_face_dim_check(&model, &x, &d)?;
            println!(
                "  I = {:<10} dim ext F: numeric {numeric}, predicted {predicted}",
                d.i.to_string()
            );
        }
    }
    Ok(())
}
