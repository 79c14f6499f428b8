//! Second-order analysis of the height function `t ↦ ⟨Ad(e^{tξ})x, β⟩` and
//! numeric tangent dimensions of extreme orbits.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{norm, MatrixModel, ModelError, ModelKind, FD_STEP, MATCH_TOL, RANK_TOL};
use crate::facelab::FaceDescriptor;
use crate::rational::{to_f64_vec, Rat};

/// Number of random directions tried by [`local_max_test`].
pub const LOCAL_MAX_DIRECTIONS: usize = 100;

fn conjugate(xi: &DMatrix<f64>, t: f64, y: &DMatrix<f64>) -> DMatrix<f64> {
    let g = (xi * t).exp();
    &g * y * g.transpose()
}

/// Height of `Ad(e^{tξ})x` against `β`.
fn height(
    model: &MatrixModel,
    x: &DMatrix<f64>,
    beta: &DMatrix<f64>,
    xi: &DMatrix<f64>,
    t: f64,
) -> f64 {
    model.inner(&conjugate(xi, t, x), beta)
}

/// Centered second difference of the height along `ξ` at `t = 0`.
pub fn second_derivative_fd(
    model: &MatrixModel,
    x: &DMatrix<f64>,
    beta: &DMatrix<f64>,
    xi: &DMatrix<f64>,
    h: f64,
) -> f64 {
    let f0 = model.inner(x, beta);
    (height(model, x, beta, xi, h) - 2.0 * f0 + height(model, x, beta, xi, -h)) / (h * h)
}

/// `−Σ λ(x)λ(β)|ξ_λ|²` over positive restricted roots, with `ξ_λ` the
/// component of `ξ` in the corresponding root space of the rotation algebra.
pub fn hessian_closed_form(model: &MatrixModel, x: &[f64], beta: &[f64], xi: &DMatrix<f64>) -> f64 {
    let mut total = 0.0;
    match model.kind() {
        ModelKind::Sym => {
            let n = model.n();
            for i in 0..n {
                for j in i + 1..n {
                    let lx = x[i] - x[j];
                    let lb = beta[i] - beta[j];
                    total -= lx * lb * 2.0 * xi[(i, j)] * xi[(i, j)];
                }
            }
        }
        ModelKind::Skew => {
            let m = x.len();
            for j in 0..m {
                for k in j + 1..m {
                    let b = xi.view((2 * j, 2 * k), (2, 2));
                    let c = (b[(0, 0)] + b[(1, 1)]) / 2.0;
                    let s = (b[(0, 1)] - b[(1, 0)]) / 2.0;
                    let rot = 2.0 * (c * c + s * s);
                    let refl = b.norm_squared() - rot;
                    total -= (x[j] - x[k]) * (beta[j] - beta[k]) * rot;
                    total -= (x[j] + x[k]) * (beta[j] + beta[k]) * refl;
                }
            }
            if model.n() % 2 == 1 {
                let last = model.n() - 1;
                for j in 0..m {
                    let v = xi.view((2 * j, last), (2, 1)).norm_squared();
                    total -= x[j] * beta[j] * v;
                }
            }
        }
    }
    total
}

fn random_direction(model: &MatrixModel, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let basis = model.rotation_basis();
    let mut xi = DMatrix::zeros(model.n(), model.n());
    for b in &basis {
        let c: f64 = StandardNormal.sample(rng);
        xi += b * c;
    }
    let len = model.inner(&xi, &xi).sqrt();
    if len > 0.0 {
        xi /= len;
    }
    xi
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianReport {
    pub trials: usize,
    pub max_abs_error: f64,
    /// `‖x‖·‖β‖`
    pub scale: f64,
}

/// Compares finite-difference second derivatives with the closed form along
/// `trials` random unit directions.
pub fn hessian_check(
    model: &MatrixModel,
    x_cartan: &[Rat],
    beta_cartan: &[Rat],
    trials: usize,
    seed: u64,
) -> Result<HessianReport, ModelError> {
    let x = model.check_cartan(x_cartan)?;
    let beta = model.check_cartan(beta_cartan)?;
    let xm = model.cartan_embed(&x);
    let bm = model.cartan_embed(&beta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs_error: f64 = 0.0;
    for _ in 0..trials {
        let xi = random_direction(model, &mut rng);
        let fd = second_derivative_fd(model, &xm, &bm, &xi, FD_STEP);
        let exact = hessian_closed_form(model, &x, &beta, &xi);
        max_abs_error = max_abs_error.max((fd - exact).abs());
    }
    Ok(HessianReport {
        trials,
        max_abs_error,
        scale: norm(&x) * norm(&beta),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMaxVerdict {
    /// `x` and `β` lie in a common closed Weyl chamber.
    pub chamber: bool,
    /// No tested direction has a positive second derivative.
    pub numeric: bool,
    /// Largest second difference over the random directions.
    pub max_random_second_derivative: f64,
    /// Largest eigenvalue of the finite-difference Hessian matrix.
    pub max_hessian_eigenvalue: f64,
    pub tolerance: f64,
}

impl LocalMaxVerdict {
    pub fn agree(&self) -> bool {
        self.chamber == self.numeric
    }
}

/// Chamber verdict and finite-difference verdict on whether `x` is a local
/// maximum of `⟨·, β⟩` on its orbit.
pub fn local_max_test(
    model: &MatrixModel,
    x_cartan: &[Rat],
    beta_cartan: &[Rat],
    seed: u64,
) -> Result<LocalMaxVerdict, ModelError> {
    let x = model.check_cartan(x_cartan)?;
    let beta = model.check_cartan(beta_cartan)?;
    let chamber = model
        .root_system()
        .share_closed_chamber(x_cartan, beta_cartan)?;
    let xm = model.cartan_embed(&x);
    let bm = model.cartan_embed(&beta);
    let tolerance = MATCH_TOL * norm(&x) * norm(&beta);
    let q = |xi: &DMatrix<f64>| second_derivative_fd(model, &xm, &bm, xi, FD_STEP);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_random = f64::NEG_INFINITY;
    for _ in 0..LOCAL_MAX_DIRECTIONS {
        let xi = random_direction(model, &mut rng);
        max_random = max_random.max(q(&xi));
    }

    // polarized quadratic form over the orthonormal rotation basis
    let scale = model.form_scale().sqrt();
    let basis: Vec<DMatrix<f64>> = model
        .rotation_basis()
        .into_iter()
        .map(|b| b / scale)
        .collect();
    let d = basis.len();
    let mut hess = DMatrix::zeros(d, d);
    for a in 0..d {
        hess[(a, a)] = q(&basis[a]);
        for b in a + 1..d {
            let plus = q(&(&basis[a] + &basis[b]));
            let minus = q(&(&basis[a] - &basis[b]));
            let v = (plus - minus) / 4.0;
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    let max_eig = hess
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LocalMaxVerdict {
        chamber,
        numeric: max_random <= tolerance && max_eig <= tolerance,
        max_random_second_derivative: max_random,
        max_hessian_eigenvalue: max_eig,
        tolerance,
    })
}

/// Numeric rank of a list of matrices viewed as vectors.
fn numeric_rank(vectors: &[DMatrix<f64>], threshold: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let len = vectors[0].len();
    let a = DMatrix::from_fn(len, vectors.len(), |r, c| vectors[c][r]);
    a.singular_values()
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

/// Orthonormal basis (Frobenius) of `{ξ ∈ so(n) : [ξ, β] = 0}`.
fn centralizer_basis(model: &MatrixModel, bm: &DMatrix<f64>, threshold: f64) -> Vec<DMatrix<f64>> {
    let basis = model.rotation_basis();
    let d = basis.len();
    let n = model.n();
    let images: Vec<DMatrix<f64>> = basis.iter().map(|b| b * bm - bm * b).collect();
    let a = DMatrix::from_fn(n * n, d, |r, c| images[c][r]);
    // right singular vectors with small singular values span the kernel
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut out = Vec::new();
    for (k, sv) in svd.singular_values.iter().enumerate() {
        if *sv <= threshold {
            let mut xi = DMatrix::zeros(n, n);
            for (c, b) in v_t.row(k).iter().zip(&basis) {
                xi += b * *c;
            }
            out.push(xi);
        }
    }
    out
}

/// `(numeric, predicted)` dimension of the extreme orbit `K^β·x`: the rank of
/// `ξ ↦ [ξ, x]` on the centralizer of the descriptor's `β`, against the
/// descriptor's `dim_extF`. `x_cartan` is the dominant point the descriptor
/// was built for.
pub fn ext_face_dim_check(
    model: &MatrixModel,
    x_cartan: &[Rat],
    descriptor: &FaceDescriptor,
) -> Result<(usize, usize), ModelError> {
    let rank = model.root_system().rank();
    if descriptor.beta.len() != model.cartan_dim() {
        return Err(ModelError::DescriptorMismatch(format!(
            "β has {} coordinates, model has {}",
            descriptor.beta.len(),
            model.cartan_dim()
        )));
    }
    if !descriptor
        .j
        .is_subset(crate::rootsys::SimpleSet::full(rank))
    {
        return Err(ModelError::DescriptorMismatch(format!(
            "subset {} exceeds rank {rank}",
            descriptor.j
        )));
    }
    let x = model.check_cartan(x_cartan)?;
    let beta = to_f64_vec(&descriptor.beta);
    let xm = model.cartan_embed(&x);
    let bm = model.cartan_embed(&beta);
    let kernel = centralizer_basis(model, &bm, RANK_TOL * norm(&beta).max(1.0));
    let images: Vec<DMatrix<f64>> = kernel.iter().map(|k| k * &xm - &xm * k).collect();
    let numeric = numeric_rank(&images, RANK_TOL * norm(&x).max(f64::MIN_POSITIVE));
    Ok((numeric, descriptor.dim_ext_f))
}

/// Gradient ascent of `⟨·, β⟩` along the orbit, starting from `y`. Stops
/// once the gradient norm falls below `1e-13·‖x‖·‖β‖` or after `max_iter`
/// steps.
pub fn ascend_height(
    model: &MatrixModel,
    y: &DMatrix<f64>,
    beta_cartan: &[f64],
    max_iter: usize,
) -> DMatrix<f64> {
    let bm = model.cartan_embed(beta_cartan);
    let x_norm = model.inner(y, y).sqrt();
    let b_norm = norm(beta_cartan);
    let scale = x_norm * b_norm;
    if scale == 0.0 {
        return y.clone();
    }
    let longest = model
        .root_system()
        .positive_roots()
        .iter()
        .map(|r| crate::rational::to_f64(&model.root_system().inner(r, r)))
        .fold(0.0, f64::max);
    let step = 0.25 / (scale * longest.max(1.0));
    let mut cur = y.clone();
    for _ in 0..max_iter {
        let grad = match model.kind() {
            ModelKind::Sym => &bm * &cur - &cur * &bm,
            ModelKind::Skew => &cur * &bm - &bm * &cur,
        };
        if model.inner(&grad, &grad).sqrt() <= 1e-13 * scale {
            break;
        }
        cur = conjugate(&grad, step, &cur);
        // keep the iterate exactly symmetric or skew
        cur = match model.kind() {
            ModelKind::Sym => (&cur + cur.transpose()) * 0.5,
            ModelKind::Skew => (&cur - cur.transpose()) * 0.5,
        };
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facelab::classify_faces;
    use crate::matmodel::make_model;
    use crate::rational::qvec;

    #[test]
    fn sym2_rotation_generator_gives_minus_eight() {
        let m = make_model(ModelKind::Sym, 2).unwrap();
        let x = m.cartan_embed(&[1.0, -1.0]);
        let xi = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let fd = second_derivative_fd(&m, &x, &x, &xi, FD_STEP);
        assert!((fd + 8.0).abs() < 1e-6, "{fd}");
        let cf = hessian_closed_form(&m, &[1.0, -1.0], &[1.0, -1.0], &xi);
        assert!((cf + 8.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_in_every_model() {
        for (kind, n, x, b) in [
            (ModelKind::Sym, 3, vec![2, 0, -2], vec![3, 0, -3]),
            (ModelKind::Sym, 4, vec![3, 1, -1, -3], vec![1, -2, 4, -3]),
            (ModelKind::Skew, 4, vec![3, 1], vec![2, -1]),
            (ModelKind::Skew, 5, vec![3, 1], vec![-1, 2]),
            (ModelKind::Skew, 6, vec![3, 2, -1], vec![1, 1, 2]),
        ] {
            let m = make_model(kind, n).unwrap();
            let r = hessian_check(&m, &qvec(&x), &qvec(&b), 50, 1).unwrap();
            assert!(r.max_abs_error <= 1e-5 * r.scale, "{kind}({n}): {r:?}");
        }
    }

    #[test]
    fn zero_beta_has_zero_hessian() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let r = hessian_check(&m, &qvec(&[2, 0, -2]), &qvec(&[0, 0, 0]), 10, 1).unwrap();
        assert_eq!(r.max_abs_error, 0.0);
    }

    #[test]
    fn local_max_examples() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let x = qvec(&[2, 0, -2]);
        let v = local_max_test(&m, &x, &qvec(&[1, 1, -2]), 3).unwrap();
        assert!(v.chamber && v.numeric);
        let v = local_max_test(&m, &x, &qvec(&[-2, 0, 2]), 3).unwrap();
        assert!(!v.chamber && !v.numeric);
        let v = local_max_test(&m, &x, &qvec(&[0, 0, 0]), 3).unwrap();
        assert!(v.chamber && v.numeric);
        // one misaligned root is enough
        let v = local_max_test(&m, &x, &qvec(&[0, 1, -1]), 3).unwrap();
        assert!(!v.chamber && !v.numeric && v.agree());
    }

    #[test]
    fn ext_dims_match_descriptors() {
        for (kind, n, x) in [
            (ModelKind::Sym, 3, vec![2, 0, -2]),
            (ModelKind::Sym, 3, vec![1, 1, -2]),
            (ModelKind::Sym, 2, vec![1, -1]),
            (ModelKind::Sym, 4, vec![3, 1, -1, -3]),
            (ModelKind::Skew, 4, vec![3, 1]),
            (ModelKind::Skew, 5, vec![2, 1]),
            (ModelKind::Skew, 5, vec![1, 0]),
        ] {
            let m = make_model(kind, n).unwrap();
            let x = qvec(&x);
            let w = m.weyl_group().unwrap();
            for d in classify_faces(m.root_system(), &w, &x).unwrap() {
                let (num, pred) = ext_face_dim_check(&m, &x, &d).unwrap();
                assert_eq!(num, pred, "{kind}({n}) I={} {:?}", d.i, d);
            }
        }
    }

    #[test]
    fn ext_dim_single_root() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let x = qvec(&[2, 0, -2]);
        let w = m.weyl_group().unwrap();
        let descs = classify_faces(m.root_system(), &w, &x).unwrap();
        let d = descs
            .iter()
            .find(|d| d.i.len() == 1 && d.i.contains(0))
            .unwrap();
        assert_eq!(ext_face_dim_check(&m, &x, d).unwrap(), (1, 1));
        let v = descs.iter().find(|d| d.i.is_empty()).unwrap();
        assert_eq!(ext_face_dim_check(&m, &x, v).unwrap(), (0, 0));
    }

    #[test]
    fn ascent_reaches_the_maximum() {
        let m = make_model(ModelKind::Sym, 3).unwrap();
        let s = crate::matmodel::sample_orbit(&m, &qvec(&[2, 0, -2]), 5, 2).unwrap();
        for p in &s.points {
            let y = ascend_height(&m, p, &[1.0, 0.0, -1.0], 20000);
            let h = m.inner(&y, &m.cartan_embed(&[1.0, 0.0, -1.0]));
            assert!((h - 4.0).abs() < 1e-9, "{h}");
        }
    }
}
