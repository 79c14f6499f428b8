//! Euclidean distance from a point to the convex hull of finitely many
//! points, by Wolfe's minimum-norm-point iteration.

use nalgebra::{DMatrix, DVector};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Affine combination of `pts` with minimal norm: weights summing to one.
fn affine_min_norm(pts: &[&Vec<f64>]) -> Vec<f64> {
    let k = pts.len();
    let mut a = DMatrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            a[(i, j)] = dot(pts[i], pts[j]);
        }
        a[(i, k)] = 1.0;
        a[(k, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = a
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| {
            a.svd(true, true)
                .solve(&rhs, 1e-14)
                .expect("svd solve with both factors")
        });
    sol.iter().take(k).copied().collect()
}

/// Distance from `q` to `conv(points)`. Returns `f64::INFINITY` for an empty
/// point set.
pub fn distance_to_hull(q: &[f64], points: &[Vec<f64>]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    let p: Vec<Vec<f64>> = points
        .iter()
        .map(|v| v.iter().zip(q).map(|(a, b)| a - b).collect())
        .collect();
    let big = p
        .iter()
        .map(|v| dot(v, v))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = 1e-15 * big;
    let start = (0..p.len())
        .min_by(|&a, &b| dot(&p[a], &p[a]).total_cmp(&dot(&p[b], &p[b])))
        .expect("nonempty");
    let mut support = vec![start];
    let mut weights = vec![1.0];
    let combine = |s: &[usize], w: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; q.len()];
        for (&i, &c) in s.iter().zip(w) {
            out.iter_mut().zip(&p[i]).for_each(|(o, v)| *o += c * v);
        }
        out
    };
    for _ in 0..10 * (p.len() + q.len() + 1) {
        let x = combine(&support, &weights);
        let xx = dot(&x, &x);
        let j = (0..p.len())
            .min_by(|&a, &b| dot(&x, &p[a]).total_cmp(&dot(&x, &p[b])))
            .expect("nonempty");
        if xx - dot(&x, &p[j]) <= eps || support.contains(&j) {
            return xx.sqrt();
        }
        support.push(j);
        weights.push(0.0);
        loop {
            let pts: Vec<&Vec<f64>> = support.iter().map(|&i| &p[i]).collect();
            let mu = affine_min_norm(&pts);
            if mu.iter().all(|&m| m > 1e-14) {
                weights = mu;
                break;
            }
            let mut theta: f64 = 1.0;
            for (l, m) in weights.iter().zip(&mu) {
                if *m <= 1e-14 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in weights.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let keep: Vec<bool> = weights.iter().map(|&l| l > 1e-14).collect();
            let mut k = 0;
            support.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            weights.retain(|&l| l > 1e-14);
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|l| *l /= total);
        }
    }
    let x = combine(&support, &weights);
    dot(&x, &x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_inside_a_triangle() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(distance_to_hull(&[0.2, 0.2], &tri) < 1e-12);
        assert!((distance_to_hull(&[1.0, 1.0], &tri) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((distance_to_hull(&[-1.0, 0.5], &tri) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn segment_and_vertex() {
        let seg = vec![vec![2.0, 0.0, -2.0], vec![0.0, 2.0, -2.0]];
        assert!(distance_to_hull(&[1.0, 1.0, -2.0], &seg) < 1e-12);
        let d = distance_to_hull(&[1.0, 1.0, -1.0], &seg);
        assert!((d - 1.0).abs() < 1e-12);
        assert!((distance_to_hull(&[0.0, 0.0], &[vec![3.0, 4.0]]) - 5.0).abs() < 1e-12);
        assert_eq!(distance_to_hull(&[0.0], &[]), f64::INFINITY);
    }

    #[test]
    fn hexagon_in_a_plane() {
        let hex: Vec<Vec<f64>> = [
            [2.0, 0.0, -2.0],
            [2.0, -2.0, 0.0],
            [0.0, 2.0, -2.0],
            [0.0, -2.0, 2.0],
            [-2.0, 2.0, 0.0],
            [-2.0, 0.0, 2.0],
        ]
        .iter()
        .map(|v| v.to_vec())
        .collect();
        assert!(distance_to_hull(&[0.5, 0.5, -1.0], &hex) < 1e-12);
        let off = distance_to_hull(&[1.0, 1.0, 1.0], &hex);
        assert!((off - 3f64.sqrt()).abs() < 1e-12);
    }
}
