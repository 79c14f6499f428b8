//! Exact rational vectors and the small amount of linear algebra the
//! combinatorial modules need (elimination, rank, solves, inverses).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;
pub type QVector = Vec<Rat>;
/// Row-major exact matrix.
pub type QMatrix = Vec<Vec<Rat>>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(coords: &[i64]) -> QVector {
    coords.iter().map(|&c| rat(c)).collect()
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(input: &str) -> Result<Rat, ParseRationalError> {
    let err = || ParseRationalError {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut n: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(Rat::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

/// Comma separated list of rationals, e.g. `"2,0,-2"` or `"1/2, -1/2"`.
pub fn parse_qvector(input: &str) -> Result<QVector, ParseRationalError> {
    input
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(parse_rational)
        .collect()
}

/// Always `p/q`, with `q = 1` for integers.
pub fn fmt_rational(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn fmt_qvector(v: &[Rat]) -> String {
    let mut out = String::from("(");
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        if c.is_integer() {
            let _ = write!(out, "{}", c.numer());
        } else {
            let _ = write!(out, "{}", c);
        }
    }
    out.push(')');
    out
}

pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn to_f64_vec(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rat, v: &[Rat]) -> QVector {
    v.iter().map(|x| c * x).collect()
}

pub fn neg(v: &[Rat]) -> QVector {
    v.iter().map(|x| -x).collect()
}

pub fn zeros(n: usize) -> QVector {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &QMatrix, v: &[Rat]) -> QVector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rat::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &QMatrix) -> QMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVector]) -> (QMatrix, Vec<usize>) {
    let mut m: QMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVector]) -> usize {
    rref(rows).1.len()
}

/// Affine dimension of a finite point set (`-1` is never returned; an empty
/// set reports 0).
pub fn affine_dim(points: &[QVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<QVector> = rest.iter().map(|p| sub(p, p0)).collect();
            rank(&diffs)
        }
    }
}

/// Solves `A x = b` for square invertible `A`.
pub fn solve_square(a: &QMatrix, b: &[Rat]) -> Option<QVector> {
    let n = a.len();
    let aug: Vec<QVector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let aug: Vec<QVector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coefficients `c` with `v = sum c_i basis_i`, if `v` lies in the span.
/// The basis must be linearly independent.
pub fn coordinates_in(basis: &[QVector], v: &[Rat]) -> Option<QVector> {
    let k = basis.len();
    let dim = v.len();
    // columns are basis vectors; augmented with v
    let aug: Vec<QVector> = (0..dim)
        .map(|i| {
            let mut r: QVector = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.contains(&k) || pivots.len() != k {
        return None;
    }
    let mut out = zeros(k);
    for (row, &p) in m.iter().zip(&pivots) {
        out[p] = row[k].clone();
    }
    Some(out)
}

/// Basis of `{y : rows · y = 0}`.
pub fn nullspace(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let (m, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(ncols);
            v[f] = Rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Positive multiple of `v` with coprime integer entries. Zero stays zero.
pub fn primitive(v: &[Rat]) -> QVector {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g))
        .collect()
}

/// Integer vectors for a list of rational points after a common rescaling.
/// Returns `None` if some entry does not fit into `i128`.
pub fn common_integer_scaling(points: &[QVector]) -> Option<Vec<Vec<i128>>> {
    let lcm = points
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|q| (q.numer() * (&lcm / q.denom())).to_i128())
                .collect()
        })
        .collect()
}

pub fn abs(q: &Rat) -> Rat {
    q.abs()
}

/// Serde helpers rendering exact values as `"p/q"` strings.
pub mod ser {
    use serde::ser::{SerializeSeq, Serializer};

    use super::{fmt_rational, QVector, Rat};

    pub fn rat<S: Serializer>(q: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn qvec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&fmt_rational(q))?;
        }
        seq.end()
    }

    pub fn qvecs<S: Serializer>(vs: &[QVector], s: S) -> Result<S::Ok, S::Error> {
        let rendered: Vec<Vec<String>> = vs
            .iter()
            .map(|v| v.iter().map(fmt_rational).collect())
            .collect();
        s.collect_seq(rendered)
    }
}
