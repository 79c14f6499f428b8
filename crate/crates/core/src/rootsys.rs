//! Restricted root systems (reduced or of type BC) with an exact invariant
//! inner product, and the chamber predicates built on top of them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{
    self, coordinates_in, dot, fmt_qvector, frac, inverse, mat_vec, parse_qvector, parse_rational,
    rank, rat, sub, zeros, QMatrix, QVector, Rat,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("unknown root system label {0:?}")]
    UnknownLabel(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("simple roots are not linearly independent")]
    DependentSimpleRoots,
    #[error("invalid root data: {0}")]
    Invalid(String),
    #[error("multiplicity table is inconsistent under negation for root {0}")]
    InconsistentMultiplicity(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {0} is not dominant")]
    NotDominant(String),
    #[error("subset refers to simple root index {index} but the rank is {rank}")]
    InvalidSubset { index: usize, rank: usize },
}

/// A subset of the simple roots, stored as a bitmask over their indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleSet(u64);

impl SimpleSet {
    pub const fn empty() -> Self {
        SimpleSet(0)
    }

    pub fn full(rank: usize) -> Self {
        assert!(rank < 64);
        SimpleSet((1u64 << rank) - 1)
    }

    pub fn from_bits(bits: u64) -> Self {
        SimpleSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = SimpleSet(0);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < 64);
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        SimpleSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SimpleSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        SimpleSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// All subsets of `{0, .., rank-1}` in increasing bitmask order.
    pub fn all_subsets(rank: usize) -> impl Iterator<Item = SimpleSet> {
        assert!(rank < 32);
        (0u64..(1 << rank)).map(SimpleSet)
    }
}

impl fmt::Debug for SimpleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SimpleSet {
    /// 1-based labels, `{a1, a3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "a{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for SimpleSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let labels: Vec<usize> = self.iter().map(|i| i + 1).collect();
        labels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimpleSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        if labels.iter().any(|&l| l == 0 || l > 64) {
            return Err(serde::de::Error::custom(
                "simple root labels are 1-based, at most 64",
            ));
        }
        Ok(SimpleSet::from_indices(labels.into_iter().map(|l| l - 1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn of(q: &Rat) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A point of the Cartan subspace together with the signs of all positive
/// roots on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberPoint {
    pub coords: QVector,
    /// Indexed like [`RootSystem::positive_roots`].
    pub sign_vector: Vec<Sign>,
}

impl ChamberPoint {
    pub fn is_dominant(&self) -> bool {
        self.sign_vector.iter().all(|s| *s != Sign::Negative)
    }

    pub fn is_regular(&self) -> bool {
        self.sign_vector.iter().all(|s| *s != Sign::Zero)
    }
}

/// Restricted root system realized in a rational coordinate space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    label: String,
    ambient_dim: usize,
    /// Gram matrix of the invariant inner product; `None` is the dot product.
    gram: Option<QMatrix>,
    simple_roots: Vec<QVector>,
    /// All roots; the positive ones come first, then their negatives in the
    /// same order.
    roots: Vec<QVector>,
    /// Coefficients of each root over the simple roots.
    coefficients: Vec<Vec<i64>>,
    multiplicities: Vec<u32>,
    /// dim of the centralizer of the Cartan subspace in the compact part.
    centralizer_dim: usize,
}

impl RootSystem {
    /// Builds a system from a label such as `"A2"`, `"BC2"`, `"G2"` or a
    /// product `"A1xA1"`.
    pub fn from_label(label: &str) -> Result<Self, RootSystemError> {
        let parts: Vec<&str> = label
            .split(['x', '×', '*'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if parts.is_empty() {
            return Err(RootSystemError::UnknownLabel(label.to_string()));
        }
        let mut factors = Vec::new();
        for p in &parts {
            factors.push(irreducible(p)?);
        }
        let mut rs = factors
            .into_iter()
            .reduce(|a, b| a.direct_sum(&b))
            .expect("nonempty");
        rs.label = parts.join("x");
        Ok(rs)
    }

    /// Builds a system from simple roots and (optionally) the full root list.
    /// Without an explicit root list the roots are generated by reflecting the
    /// simple roots, which yields a reduced system.
    pub fn from_parts(
        label: impl Into<String>,
        ambient_dim: usize,
        gram: Option<QMatrix>,
        simple_roots: Vec<QVector>,
        roots: Option<Vec<QVector>>,
    ) -> Result<Self, RootSystemError> {
        if let Some(g) = &gram {
            check_gram(g, ambient_dim)?;
        }
        for s in &simple_roots {
            check_dim(ambient_dim, s)?;
        }
        if rank(&simple_roots) != simple_roots.len() {
            return Err(RootSystemError::DependentSimpleRoots);
        }
        if simple_roots.len() >= 32 {
            return Err(RootSystemError::Invalid("rank must be below 32".into()));
        }
        let inner = |u: &[Rat], v: &[Rat]| match &gram {
            None => dot(u, v),
            Some(g) => dot(u, &mat_vec(g, v)),
        };
        let all = match roots {
            Some(r) => {
                for v in &r {
                    check_dim(ambient_dim, v)?;
                }
                r
            }
            None => reflection_closure(&simple_roots, &inner),
        };

        let mut seen = HashSet::new();
        let mut positive: Vec<(Vec<i64>, QVector)> = Vec::new();
        for r in &all {
            if rational::is_zero_vec(r) {
                return Err(RootSystemError::Invalid(
                    "zero vector listed as a root".into(),
                ));
            }
            if !seen.insert(r.clone()) {
                return Err(RootSystemError::Invalid(format!(
                    "duplicate root {}",
                    fmt_qvector(r)
                )));
            }
            let coeffs = coordinates_in(&simple_roots, r).ok_or_else(|| {
                RootSystemError::Invalid(format!(
                    "root {} is not in the span of the simple roots",
                    fmt_qvector(r)
                ))
            })?;
            let mut ints = Vec::with_capacity(coeffs.len());
            for c in &coeffs {
                if !c.is_integer() {
                    return Err(RootSystemError::Invalid(format!(
                        "root {} is not an integral combination of simple roots",
                        fmt_qvector(r)
                    )));
                }
                ints.push(i64::try_from(c.numer()).map_err(|_| {
                    RootSystemError::Invalid("root coefficient out of range".into())
                })?);
            }
            let nonneg = ints.iter().all(|&c| c >= 0);
            let nonpos = ints.iter().all(|&c| c <= 0);
            if !nonneg && !nonpos {
                return Err(RootSystemError::Invalid(format!(
                    "root {} has mixed-sign simple coefficients",
                    fmt_qvector(r)
                )));
            }
            if nonneg {
                positive.push((ints, r.clone()));
            }
        }
        for r in &all {
            if !seen.contains(&rational::neg(r)) {
                return Err(RootSystemError::Invalid(format!(
                    "root set not closed under negation at {}",
                    fmt_qvector(r)
                )));
            }
        }
        for s in &simple_roots {
            if !seen.contains(s) {
                return Err(RootSystemError::Invalid(format!(
                    "simple root {} missing from root list",
                    fmt_qvector(s)
                )));
            }
        }
        // reflections permute the roots
        for a in &simple_roots {
            let aa = inner(a, a);
            for r in &all {
                let c = rat(2) * inner(a, r) / &aa;
                let image = sub(r, &rational::scale(&c, a));
                if !seen.contains(&image) {
                    return Err(RootSystemError::Invalid(format!(
                        "root set not stable under the reflection in {}",
                        fmt_qvector(a)
                    )));
                }
            }
        }

        // height, then lexicographic on coefficients
        positive.sort_by(|(ca, _), (cb, _)| {
            let ha: i64 = ca.iter().sum();
            let hb: i64 = cb.iter().sum();
            ha.cmp(&hb).then_with(|| cb.cmp(ca))
        });
        let mut roots: Vec<QVector> = positive.iter().map(|(_, r)| r.clone()).collect();
        let mut coefficients: Vec<Vec<i64>> = positive.iter().map(|(c, _)| c.clone()).collect();
        for (c, r) in &positive {
            roots.push(rational::neg(r));
            coefficients.push(c.iter().map(|x| -x).collect());
        }
        let multiplicities = vec![1; roots.len()];
        Ok(RootSystem {
            label: label.into(),
            ambient_dim,
            gram,
            simple_roots,
            roots,
            coefficients,
            multiplicities,
            centralizer_dim: 0,
        })
    }

    /// Parses the text format written by [`RootSystem::to_text`].
    ///
    /// ```text
    /// # comment
    /// label A2
    /// ambient 3
    /// gram 1,0,0; 0,1,0; 0,0,1      (optional)
    /// simple 1,-1,0
    /// simple 0,1,-1
    /// root 1,-1,0                    (optional, repeatable)
    /// multiplicity 1,-1,0 = 2        (optional, repeatable)
    /// centralizer 0                  (optional)
    /// ```
    pub fn parse_text(text: &str) -> Result<Self, RootSystemError> {
        let mut label = String::from("custom");
        let mut ambient: Option<usize> = None;
        let mut gram: Option<QMatrix> = None;
        let mut simple = Vec::new();
        let mut roots: Vec<QVector> = Vec::new();
        let mut mults: Vec<(usize, QVector, u32)> = Vec::new();
        let mut centralizer = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let perr = |message: String| RootSystemError::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(char::is_whitespace)
                .map(|(k, r)| (k, r.trim()))
                .unwrap_or((line, ""));
            let vector = |s: &str| parse_qvector(s).map_err(|e| perr(e.to_string()));
            match key {
                "label" => label = rest.to_string(),
                "ambient" => {
                    ambient = Some(
                        rest.parse()
                            .map_err(|_| perr(format!("bad dimension {rest:?}")))?,
                    )
                }
                "gram" => {
                    let rows: Result<QMatrix, _> = rest.split(';').map(vector).collect();
                    gram = Some(rows?);
                }
                "simple" => simple.push(vector(rest)?),
                "root" => roots.push(vector(rest)?),
                "multiplicity" => {
                    let (v, m) = rest
                        .split_once('=')
                        .ok_or_else(|| perr("expected `multiplicity <root> = <m>`".into()))?;
                    let m: u32 = m
                        .trim()
                        .parse()
                        .map_err(|_| perr(format!("bad multiplicity {:?}", m.trim())))?;
                    if m == 0 {
                        return Err(perr("multiplicities must be positive".into()));
                    }
                    mults.push((line_no, vector(v)?, m));
                }
                "centralizer" => {
                    centralizer = rest
                        .parse()
                        .map_err(|_| perr(format!("bad centralizer dimension {rest:?}")))?
                }
                other => return Err(perr(format!("unknown key {other:?}"))),
            }
            if let Some(dim) = ambient {
                let check = |v: &QVector| {
                    if v.len() != dim {
                        Err(perr(format!(
                            "expected {dim} coordinates, found {}",
                            v.len()
                        )))
                    } else {
                        Ok(())
                    }
                };
                if let Some(v) = simple.last().filter(|_| key == "simple") {
                    check(v)?;
                }
                if let Some(v) = roots.last().filter(|_| key == "root") {
                    check(v)?;
                }
                if let Some((_, v, _)) = mults.last().filter(|_| key == "multiplicity") {
                    check(v)?;
                }
            }
        }
        let ambient = ambient.ok_or(RootSystemError::Parse {
            line: 0,
            message: "missing `ambient` line".into(),
        })?;
        if simple.is_empty() {
            return Err(RootSystemError::Parse {
                line: 0,
                message: "no simple roots given".into(),
            });
        }
        let roots = if roots.is_empty() { None } else { Some(roots) };
        let mut rs = RootSystem::from_parts(label, ambient, gram, simple, roots)?;
        let mut table: HashMap<QVector, (usize, u32)> = HashMap::new();
        for (line, v, m) in mults {
            if rs.root_index(&v).is_none() {
                return Err(RootSystemError::Parse {
                    line,
                    message: format!("{} is not a root", fmt_qvector(&v)),
                });
            }
            let negv = rational::neg(&v);
            for key in [v.clone(), negv] {
                if let Some(&(_, prev)) = table.get(&key) {
                    if prev != m {
                        return Err(RootSystemError::InconsistentMultiplicity(fmt_qvector(&v)));
                    }
                }
            }
            table.insert(v, (line, m));
        }
        for (v, (_, m)) in table {
            rs = rs.with_multiplicity(&v, m)?;
        }
        rs.centralizer_dim = centralizer;
        Ok(rs)
    }

    /// Serializes to the text format accepted by [`RootSystem::parse_text`];
    /// the round trip is lossless.
    pub fn to_text(&self) -> String {
        let vec = |v: &QVector| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        out.push_str(&format!("label {}\n", self.label));
        out.push_str(&format!("ambient {}\n", self.ambient_dim));
        if let Some(g) = &self.gram {
            let rows: Vec<String> = g.iter().map(vec).collect();
            out.push_str(&format!("gram {}\n", rows.join("; ")));
        }
        for s in &self.simple_roots {
            out.push_str(&format!("simple {}\n", vec(s)));
        }
        for r in &self.roots {
            out.push_str(&format!("root {}\n", vec(r)));
        }
        for (i, r) in self.positive_roots().iter().enumerate() {
            let m = self.multiplicities[i];
            if m != 1 {
                out.push_str(&format!("multiplicity {} = {}\n", vec(r), m));
            }
        }
        if self.centralizer_dim != 0 {
            out.push_str(&format!("centralizer {}\n", self.centralizer_dim));
        }
        out
    }

    /// Orthogonal direct sum, realized on concatenated coordinates.
    pub fn direct_sum(&self, other: &RootSystem) -> RootSystem {
        let n1 = self.ambient_dim;
        let n2 = other.ambient_dim;
        let pad_left = |v: &QVector| {
            let mut w = v.clone();
            w.extend(zeros(n2));
            w
        };
        let pad_right = |v: &QVector| {
            let mut w = zeros(n1);
            w.extend(v.iter().cloned());
            w
        };
        let gram = match (&self.gram, &other.gram) {
            (None, None) => None,
            _ => {
                let g1 = self.gram_matrix();
                let g2 = other.gram_matrix();
                let mut g = vec![zeros(n1 + n2); n1 + n2];
                for i in 0..n1 {
                    for j in 0..n1 {
                        g[i][j] = g1[i][j].clone();
                    }
                }
                for i in 0..n2 {
                    for j in 0..n2 {
                        g[n1 + i][n1 + j] = g2[i][j].clone();
                    }
                }
                Some(g)
            }
        };
        let simple: Vec<QVector> = self
            .simple_roots
            .iter()
            .map(pad_left)
            .chain(other.simple_roots.iter().map(pad_right))
            .collect();
        let roots: Vec<QVector> = self
            .roots
            .iter()
            .map(pad_left)
            .chain(other.roots.iter().map(pad_right))
            .collect();
        let mut rs = RootSystem::from_parts(
            format!("{}x{}", self.label, other.label),
            n1 + n2,
            gram,
            simple,
            Some(roots),
        )
        .expect("direct sum of valid systems is valid");
        for (i, r) in self.positive_roots().iter().enumerate() {
            rs = rs
                .with_multiplicity(&pad_left(r), self.multiplicities[i])
                .expect("root exists");
        }
        for (i, r) in other.positive_roots().iter().enumerate() {
            rs = rs
                .with_multiplicity(&pad_right(r), other.multiplicities[i])
                .expect("root exists");
        }
        rs.centralizer_dim = self.centralizer_dim + other.centralizer_dim;
        rs
    }

    /// Sets `m_λ = m_{-λ} = m`.
    pub fn with_multiplicity(mut self, root: &[Rat], m: u32) -> Result<Self, RootSystemError> {
        if m == 0 {
            return Err(RootSystemError::Invalid(
                "multiplicities must be positive".into(),
            ));
        }
        let i = self.root_index(root).ok_or_else(|| {
            RootSystemError::Invalid(format!("{} is not a root", fmt_qvector(root)))
        })?;
        let j = self.negative_index(i);
        self.multiplicities[i] = m;
        self.multiplicities[j] = m;
        Ok(self)
    }

    /// Sets every multiplicity to `m`.
    pub fn with_uniform_multiplicity(mut self, m: u32) -> Self {
        assert!(m > 0);
        self.multiplicities.iter_mut().for_each(|x| *x = m);
        self
    }

    pub fn with_centralizer_dim(mut self, dim: usize) -> Self {
        self.centralizer_dim = dim;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Restricted roots of `su(p, q)` for `p > q >= 1`: type BC_q with
    /// multiplicities 2 on `±e_i±e_j`, `2(p-q)` on `±e_i`, 1 on `±2e_i`.
    pub fn su_pq(p: usize, q: usize) -> Result<Self, RootSystemError> {
        if q == 0 || p <= q {
            return Err(RootSystemError::Invalid(format!(
                "su({p},{q}) needs p > q >= 1"
            )));
        }
        let mut rs = Self::from_label(&format!("BC{q}"))?;
        let roots = rs.positive_roots().to_vec();
        for r in roots {
            let nonzero = r.iter().filter(|c| !c.is_zero()).count();
            let m = if nonzero == 2 {
                2
            } else if r.iter().any(|c| c.abs() == rat(2)) {
                1
            } else {
                (2 * (p - q)) as u32
            };
            rs = rs.with_multiplicity(&r, m)?;
        }
        let dim_m = (p - q) * (p - q) + q - 1;
        Ok(rs
            .with_centralizer_dim(dim_m)
            .with_label(format!("su({p},{q})")))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[QVector] {
        &self.simple_roots
    }

    pub fn roots(&self) -> &[QVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[QVector] {
        &self.roots[..self.roots.len() / 2]
    }

    /// Coefficients of the i-th root over the simple roots.
    pub fn simple_coefficients(&self, i: usize) -> &[i64] {
        &self.coefficients[i]
    }

    pub fn multiplicity(&self, i: usize) -> u32 {
        self.multiplicities[i]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn centralizer_dim(&self) -> usize {
        self.centralizer_dim
    }

    pub fn gram(&self) -> Option<&QMatrix> {
        self.gram.as_ref()
    }

    pub fn gram_matrix(&self) -> QMatrix {
        self.gram
            .clone()
            .unwrap_or_else(|| rational::identity(self.ambient_dim))
    }

    pub fn root_index(&self, v: &[Rat]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == v)
    }

    fn negative_index(&self, i: usize) -> usize {
        let half = self.roots.len() / 2;
        if i < half {
            i + half
        } else {
            i - half
        }
    }

    /// True when some root is twice another (type BC components).
    pub fn is_non_reduced(&self) -> bool {
        let set: HashSet<&QVector> = self.roots.iter().collect();
        self.roots
            .iter()
            .any(|r| set.contains(&rational::scale(&rat(2), r)))
    }

    /// The invariant inner product.
    pub fn inner(&self, u: &[Rat], v: &[Rat]) -> Rat {
        match &self.gram {
            None => dot(u, v),
            Some(g) => dot(u, &mat_vec(g, v)),
        }
    }

    /// `G v`, so that `inner(u, v) = dot(u, lower(v))`.
    pub fn lower(&self, v: &[Rat]) -> QVector {
        match &self.gram {
            None => v.to_vec(),
            Some(g) => mat_vec(g, v),
        }
    }

    pub fn check_vector(&self, v: &[Rat]) -> Result<(), RootSystemError> {
        check_dim(self.ambient_dim, v)
    }

    /// `λ(v)`, realized as `⟨λ, v⟩`.
    pub fn pairing(&self, lambda: &[Rat], v: &[Rat]) -> Result<Rat, RootSystemError> {
        self.check_vector(lambda)?;
        self.check_vector(v)?;
        Ok(self.inner(lambda, v))
    }

    pub fn chamber_point(&self, x: &[Rat]) -> Result<ChamberPoint, RootSystemError> {
        self.check_vector(x)?;
        let sign_vector = self
            .positive_roots()
            .iter()
            .map(|r| Sign::of(&self.inner(r, x)))
            .collect();
        Ok(ChamberPoint {
            coords: x.to_vec(),
            sign_vector,
        })
    }

    pub fn is_dominant(&self, x: &[Rat]) -> bool {
        self.simple_roots
            .iter()
            .all(|a| !self.inner(a, x).is_negative())
    }

    /// `λ(x) λ(y) ≥ 0` for every root; equivalently `x` and `y` lie in a
    /// common closed Weyl chamber.
    pub fn share_closed_chamber(&self, x: &[Rat], y: &[Rat]) -> Result<bool, RootSystemError> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self
            .positive_roots()
            .iter()
            .all(|r| !(self.inner(r, x) * self.inner(r, y)).is_negative()))
    }

    /// Simple roots vanishing on a dominant `x`.
    pub fn wall_set(&self, x: &[Rat]) -> Result<SimpleSet, RootSystemError> {
        self.check_vector(x)?;
        if !self.is_dominant(x) {
            return Err(RootSystemError::NotDominant(fmt_qvector(x)));
        }
        Ok(SimpleSet::from_indices(
            self.simple_roots
                .iter()
                .enumerate()
                .filter(|(_, a)| self.inner(a, x).is_zero())
                .map(|(i, _)| i),
        ))
    }

    pub fn check_subset(&self, s: SimpleSet) -> Result<(), RootSystemError> {
        match s.iter().find(|&i| i >= self.rank()) {
            Some(index) => Err(RootSystemError::InvalidSubset {
                index,
                rank: self.rank(),
            }),
            None => Ok(()),
        }
    }

    /// Cartan matrix entry `2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩`.
    pub fn cartan_matrix(&self) -> Vec<Vec<Rat>> {
        let s = &self.simple_roots;
        s.iter()
            .map(|ai| {
                s.iter()
                    .map(|aj| rat(2) * self.inner(ai, aj) / self.inner(aj, aj))
                    .collect()
            })
            .collect()
    }

    /// Basis `ϖ_i` of the span of the simple roots with `α_j(ϖ_i) = δ_ij`.
    pub fn fundamental_coweights(&self) -> Vec<QVector> {
        self.dual_basis(|_| Rat::one())
    }

    /// Basis `ω_i` of the span of the simple roots with
    /// `⟨ω_i, α_j^∨⟩ = δ_ij`, where `α^∨ = 2α/⟨α,α⟩`.
    pub fn fundamental_weights(&self) -> Vec<QVector> {
        self.dual_basis(|a| self.inner(a, a) / rat(2))
    }

    // ϖ_i = Σ_k c_ik α_k with ⟨ϖ_i, α_j⟩ = δ_ij · scale(α_j)
    fn dual_basis(&self, scale: impl Fn(&QVector) -> Rat) -> Vec<QVector> {
        let s = &self.simple_roots;
        let gram: QMatrix = s
            .iter()
            .map(|a| s.iter().map(|b| self.inner(a, b)).collect())
            .collect();
        let inv = inverse(&gram).expect("simple roots are independent");
        (0..s.len())
            .map(|i| {
                let mut v = zeros(self.ambient_dim);
                for (k, a) in s.iter().enumerate() {
                    // (A^{-1})_{ik} scaled by the target on column k
                    let c = &inv[k][i] * scale(&s[i]);
                    for (vj, aj) in v.iter_mut().zip(a) {
                        *vj += &c * aj;
                    }
                }
                v
            })
            .collect()
    }

    /// Simple roots `α_j` that are connected to `α_i` (non-orthogonal).
    pub fn linked(&self, i: usize, j: usize) -> bool {
        !self
            .inner(&self.simple_roots[i], &self.simple_roots[j])
            .is_zero()
    }

    /// Index set of roots (into [`RootSystem::roots`]) lying in the span of
    /// the simple roots indexed by `s`.
    pub fn roots_in_span(&self, s: SimpleSet) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| {
                self.coefficients[i]
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| c == 0 || s.contains(k))
            })
            .collect()
    }

    /// `dim g = dim m + rank + Σ_λ m_λ`.
    pub fn dim_g(&self) -> usize {
        self.centralizer_dim
            + self.rank()
            + self
                .multiplicities
                .iter()
                .map(|&m| m as usize)
                .sum::<usize>()
    }

    /// Converts fundamental-weight coordinates (Dynkin labels) to ambient ones.
    pub fn from_weight_coordinates(&self, labels: &[Rat]) -> Result<QVector, RootSystemError> {
        if labels.len() != self.rank() {
            return Err(RootSystemError::DimensionMismatch {
                expected: self.rank(),
                found: labels.len(),
            });
        }
        let mut x = zeros(self.ambient_dim);
        for (c, w) in labels.iter().zip(self.fundamental_weights()) {
            for (xi, wi) in x.iter_mut().zip(&w) {
                *xi += c * wi;
            }
        }
        Ok(x)
    }

    /// Short description of the realization, for report metadata.
    pub fn realization(&self) -> String {
        let form = if self.gram.is_some() {
            "custom Gram matrix"
        } else {
            "standard dot product"
        };
        format!(
            "{} in {}-dimensional coordinates, {}",
            self.label, self.ambient_dim, form
        )
    }
}

fn check_dim(expected: usize, v: &[Rat]) -> Result<(), RootSystemError> {
    if v.len() != expected {
        Err(RootSystemError::DimensionMismatch {
            expected,
            found: v.len(),
        })
    } else {
        Ok(())
    }
}

fn check_gram(g: &QMatrix, n: usize) -> Result<(), RootSystemError> {
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(RootSystemError::Invalid(format!(
            "Gram matrix must be {n}x{n}"
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if g[i][j] != g[j][i] {
                return Err(RootSystemError::Invalid(
                    "Gram matrix is not symmetric".into(),
                ));
            }
        }
    }
    // Sylvester: all leading principal minors positive
    for k in 1..=n {
        let minor: QMatrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        if !determinant(&minor).is_positive() {
            return Err(RootSystemError::Invalid(
                "Gram matrix is not positive definite".into(),
            ));
        }
    }
    Ok(())
}

fn determinant(m: &QMatrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

fn reflection_closure(simple: &[QVector], inner: &dyn Fn(&[Rat], &[Rat]) -> Rat) -> Vec<QVector> {
    let mut seen: HashSet<QVector> = HashSet::new();
    let mut order = Vec::new();
    let mut queue: Vec<QVector> = simple.to_vec();
    while let Some(r) = queue.pop() {
        if !seen.insert(r.clone()) {
            continue;
        }
        order.push(r.clone());
        for a in simple {
            let c = rat(2) * inner(a, &r) / inner(a, a);
            queue.push(sub(&r, &rational::scale(&c, a)));
        }
        // bounded by any finite crystallographic system
        if seen.len() > 100_000 {
            break;
        }
    }
    order
}

fn unit(n: usize, i: usize) -> QVector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

fn e_diff(n: usize, i: usize, j: usize) -> QVector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v[j] = -Rat::one();
    v
}

fn e_sum(n: usize, i: usize, j: usize) -> QVector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v[j] = Rat::one();
    v
}

/// `±e_i ± e_j` for `i < j`.
fn long_pairs(n: usize) -> Vec<QVector> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = e_diff(n, i, j);
            let s = e_sum(n, i, j);
            out.push(rational::neg(&d));
            out.push(d);
            out.push(rational::neg(&s));
            out.push(s);
        }
    }
    out
}

fn irreducible(label: &str) -> Result<RootSystem, RootSystemError> {
    let unknown = || RootSystemError::UnknownLabel(label.to_string());
    let split = label
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(unknown)?;
    let (kind, num) = label.split_at(split);
    let n: usize = num.parse().map_err(|_| unknown())?;
    if n == 0 {
        return Err(unknown());
    }
    let kind = kind.to_ascii_uppercase();
    let (ambient, simple, roots): (usize, Vec<QVector>, Vec<QVector>) = match kind.as_str() {
        "A" => {
            let d = n + 1;
            let simple = (0..n).map(|i| e_diff(d, i, i + 1)).collect();
            let mut roots = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        roots.push(e_diff(d, i, j));
                    }
                }
            }
            (d, simple, roots)
        }
        "B" | "C" | "BC" => {
            let mut simple: Vec<QVector> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
            let mut roots = long_pairs(n);
            let short: Vec<QVector> = (0..n).map(|i| unit(n, i)).collect();
            let double: Vec<QVector> = short.iter().map(|v| rational::scale(&rat(2), v)).collect();
            if kind != "C" {
                for v in &short {
                    roots.push(v.clone());
                    roots.push(rational::neg(v));
                }
            }
            if kind != "B" {
                for v in &double {
                    roots.push(v.clone());
                    roots.push(rational::neg(v));
                }
            }
            let last = if kind == "C" {
                double[n - 1].clone()
            } else {
                short[n - 1].clone()
            };
            simple.push(last);
            (n, simple, roots)
        }
        "D" => {
            if n < 2 {
                return Err(unknown());
            }
            let mut simple: Vec<QVector> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
            simple.push(e_sum(n, n - 2, n - 1));
            (n, simple, long_pairs(n))
        }
        "G" if n == 2 => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(e_diff(3, i, j));
                    }
                }
                let mut long = vec![rat(-1); 3];
                long[i] = rat(2);
                roots.push(rational::neg(&long));
                roots.push(long);
            }
            let simple = vec![qv(&[1, -1, 0]), qv(&[-2, 1, 1])];
            (3, simple, roots)
        }
        "F" if n == 4 => {
            let mut roots = long_pairs(4);
            for i in 0..4 {
                roots.push(unit(4, i));
                roots.push(rational::neg(&unit(4, i)));
            }
            for signs in 0..16u32 {
                roots.push(
                    (0..4)
                        .map(|k| {
                            if signs & (1 << k) != 0 {
                                frac(-1, 2)
                            } else {
                                frac(1, 2)
                            }
                        })
                        .collect(),
                );
            }
            let simple = vec![
                qv(&[0, 1, -1, 0]),
                qv(&[0, 0, 1, -1]),
                qv(&[0, 0, 0, 1]),
                vec![frac(1, 2), frac(-1, 2), frac(-1, 2), frac(-1, 2)],
            ];
            (4, simple, roots)
        }
        _ => return Err(unknown()),
    };
    RootSystem::from_parts(
        label.to_ascii_uppercase(),
        ambient,
        None,
        simple,
        Some(roots),
    )
}

fn qv(c: &[i64]) -> QVector {
    rational::qvec(c)
}

/// Multiplicity table keyed by root, for reports.
pub fn multiplicity_table(rs: &RootSystem) -> BTreeMap<String, u32> {
    rs.positive_roots()
        .iter()
        .enumerate()
        .map(|(i, r)| (fmt_qvector(r), rs.multiplicity(i)))
        .collect()
}

/// Parses a built-in label, or reads a root system file when `source` names an
/// existing path.
pub fn build_root_system(source: &str) -> Result<RootSystem, RootSystemError> {
    let path = std::path::Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| RootSystemError::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        RootSystem::parse_text(&text)
    } else {
        RootSystem::from_label(source)
    }
}

/// Parses a rational number, mapping errors into the crate's error type.
pub fn parse_coordinate(s: &str) -> Result<Rat, RootSystemError> {
    parse_rational(s).map_err(|e| RootSystemError::Parse {
        line: 0,
        message: e.to_string(),
    })
}
