//! Classification of the faces of a polar orbitope up to conjugacy from root
//! data alone.
//!
//! For a nonzero dominant `x`, the proper faces correspond to the subsets
//! `I` of simple roots that are *x-connected* (every connected component of
//! `I` contains a root not vanishing on `x`) and whose *x-saturation*
//! `J = I ∪ {α ∈ Π : α ⟂ x, α ⟂ I}` is a proper subset of `Π`. The face is
//! exposed by any `β` in the cone `{μ(β) = 0 for μ ∈ J, λ(β) > 0 for λ ∈ Π∖J}`,
//! and its intersection with the Cartan subspace is `conv(W_J · x)`.
//!
//! [`verify_bijection`] checks this correspondence against the brute-force
//! face lattice of `conv(W · x)`.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::polytope::{FaceOrbit, PolytopeError, RationalPolytope, DEFAULT_FACE_BUDGET};
use crate::rational::{self, affine_dim, fmt_qvector, ser, QVector, Rat};
use crate::rootsys::{RootSystem, RootSystemError, SimpleSet};
use crate::weyl::{WeylError, WeylGroup};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FaceLabError {
    #[error("x must be nonzero")]
    ZeroVector,
    #[error("subset {0} is not x-connected")]
    NotXConnected(SimpleSet),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// One conjugacy class of proper faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDescriptor {
    /// x-connected subset of the simple roots.
    #[serde(rename = "I")]
    pub i: SimpleSet,
    /// Its x-saturation.
    #[serde(rename = "J")]
    pub j: SimpleSet,
    /// Witness normal: vanishes on `J`, positive on `Π∖J`.
    #[serde(serialize_with = "ser::qvec")]
    pub beta: QVector,
    /// `W_J · x`, the vertices of the face of the momentum polytope.
    #[serde(serialize_with = "ser::qvecs")]
    pub sigma_vertices: Vec<QVector>,
    pub dim_sigma: usize,
    /// Dimension of the extreme-point orbit `K^β · x`.
    #[serde(rename = "dim_extF")]
    pub dim_ext_f: usize,
    #[serde(rename = "dim_q_J")]
    pub dim_q_j: usize,
    #[serde(rename = "dim_n_J")]
    pub dim_n_j: usize,
}

/// `{β : μ(β) = 0 (μ ∈ J), λ(β) > 0 (λ ∈ Π∖J)}` as inequality data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCone {
    #[serde(serialize_with = "ser::qvecs")]
    pub equalities: Vec<QVector>,
    #[serde(serialize_with = "ser::qvecs")]
    pub strict: Vec<QVector>,
}

impl WitnessCone {
    pub fn new(rs: &RootSystem, j: SimpleSet) -> Self {
        let (eq, strict): (Vec<_>, Vec<_>) = rs
            .simple_roots()
            .iter()
            .enumerate()
            .partition(|(k, _)| j.contains(*k));
        WitnessCone {
            equalities: eq.into_iter().map(|(_, a)| a.clone()).collect(),
            strict: strict.into_iter().map(|(_, a)| a.clone()).collect(),
        }
    }

    pub fn contains(&self, rs: &RootSystem, beta: &[Rat]) -> bool {
        self.equalities.iter().all(|a| rs.inner(a, beta).is_zero())
            && self.strict.iter().all(|a| rs.inner(a, beta).is_positive())
    }
}

/// Connected components of `s` under "non-orthogonal".
pub fn connected_components(rs: &RootSystem, s: SimpleSet) -> Vec<SimpleSet> {
    let mut remaining = s;
    let mut out = Vec::new();
    while let Some(start) = remaining.iter().next() {
        let mut comp = SimpleSet::from_indices([start]);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in remaining.iter() {
                if !comp.contains(b) && rs.linked(a, b) {
                    comp.insert(b);
                    stack.push(b);
                }
            }
        }
        remaining = remaining.minus(comp);
        out.push(comp);
    }
    out
}

fn component_touches_x(rs: &RootSystem, comp: SimpleSet, x: &[Rat]) -> bool {
    comp.iter()
        .any(|k| !rs.inner(&rs.simple_roots()[k], x).is_zero())
}

fn check_dominant(rs: &RootSystem, x: &[Rat]) -> Result<(), FaceLabError> {
    rs.check_vector(x)?;
    if !rs.is_dominant(x) {
        return Err(RootSystemError::NotDominant(fmt_qvector(x)).into());
    }
    Ok(())
}

pub fn is_x_connected(rs: &RootSystem, i: SimpleSet, x: &[Rat]) -> Result<bool, FaceLabError> {
    rs.check_subset(i)?;
    check_dominant(rs, x)?;
    Ok(connected_components(rs, i)
        .into_iter()
        .all(|c| component_touches_x(rs, c, x)))
}

/// Union of the components of `j` that meet `x`.
pub fn largest_x_connected_subset(rs: &RootSystem, j: SimpleSet, x: &[Rat]) -> SimpleSet {
    connected_components(rs, j)
        .into_iter()
        .filter(|&c| component_touches_x(rs, c, x))
        .fold(SimpleSet::empty(), SimpleSet::union)
}

pub fn saturation(rs: &RootSystem, i: SimpleSet, x: &[Rat]) -> Result<SimpleSet, FaceLabError> {
    if !is_x_connected(rs, i, x)? {
        return Err(FaceLabError::NotXConnected(i));
    }
    let simple = rs.simple_roots();
    let orthogonal = SimpleSet::from_indices((0..rs.rank()).filter(|&k| {
        !i.contains(k) && rs.inner(&simple[k], x).is_zero() && i.iter().all(|g| !rs.linked(k, g))
    }));
    Ok(i.union(orthogonal))
}

/// `Σ_{λ ∈ Π∖J} ϖ_λ` over the fundamental coweights.
pub fn canonical_beta(rs: &RootSystem, j: SimpleSet) -> Result<QVector, FaceLabError> {
    rs.check_subset(j)?;
    let coweights = rs.fundamental_coweights();
    let mut beta = rational::zeros(rs.ambient_dim());
    for (k, w) in coweights.iter().enumerate() {
        if !j.contains(k) {
            beta = rational::add(&beta, w);
        }
    }
    debug_assert!(WitnessCone::new(rs, j).contains(rs, &beta));
    Ok(beta)
}

/// `(dim q_J, dim n_J)` with `q_J = g_0 ⊕ ⊕_{Σ_J ∪ Σ_+} g_λ` and
/// `n_J = ⊕_{Σ_+ ∖ Σ_J} g_λ`.
pub fn parabolic_dims(rs: &RootSystem, j: SimpleSet) -> (usize, usize) {
    let in_j: BTreeSet<usize> = rs.roots_in_span(j).into_iter().collect();
    let half = rs.roots().len() / 2;
    let mut q = rs.centralizer_dim() + rs.rank();
    let mut n = 0;
    for idx in 0..rs.roots().len() {
        let m = rs.multiplicity(idx) as usize;
        let positive = idx < half;
        if positive || in_j.contains(&idx) {
            q += m;
        }
        if positive && !in_j.contains(&idx) {
            n += m;
        }
    }
    (q, n)
}

/// `Σ m_λ` over positive roots in the span of `J` not vanishing on `x`.
pub fn ext_face_dim(rs: &RootSystem, j: SimpleSet, x: &[Rat]) -> usize {
    let half = rs.roots().len() / 2;
    rs.roots_in_span(j)
        .into_iter()
        .filter(|&idx| idx < half && !rs.inner(&rs.roots()[idx], x).is_zero())
        .map(|idx| rs.multiplicity(idx) as usize)
        .sum()
}

/// All x-connected subsets, including `Π` and `∅`.
pub fn x_connected_subsets(rs: &RootSystem, x: &[Rat]) -> Result<Vec<SimpleSet>, FaceLabError> {
    check_dominant(rs, x)?;
    let mut out = Vec::new();
    for s in SimpleSet::all_subsets(rs.rank()) {
        if is_x_connected(rs, s, x)? {
            out.push(s);
        }
    }
    out.sort_by_key(|s| (s.len(), s.bits()));
    Ok(out)
}

pub fn describe_face(
    rs: &RootSystem,
    w: &WeylGroup,
    i: SimpleSet,
    x: &[Rat],
) -> Result<FaceDescriptor, FaceLabError> {
    let j = saturation(rs, i, x)?;
    let beta = canonical_beta(rs, j)?;
    let sigma_vertices = w.orbit_of_subgroup(&w.parabolic_subgroup(j), x);
    let (dim_q_j, dim_n_j) = parabolic_dims(rs, j);
    Ok(FaceDescriptor {
        i,
        j,
        beta,
        dim_sigma: affine_dim(&sigma_vertices),
        sigma_vertices,
        dim_ext_f: ext_face_dim(rs, j, x),
        dim_q_j,
        dim_n_j,
    })
}

/// One descriptor per class of proper faces, ordered by `|I|` and then by
/// the indices in `I`.
pub fn classify_faces(
    rs: &RootSystem,
    w: &WeylGroup,
    x: &[Rat],
) -> Result<Vec<FaceDescriptor>, FaceLabError> {
    check_dominant(rs, x)?;
    if rational::is_zero_vec(x) {
        return Err(FaceLabError::ZeroVector);
    }
    let full = SimpleSet::full(rs.rank());
    let mut out = Vec::new();
    for i in x_connected_subsets(rs, x)? {
        if saturation(rs, i, x)? == full {
            continue;
        }
        out.push(describe_face(rs, w, i, x)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessCheck {
    pub descriptor: usize,
    #[serde(rename = "I")]
    pub i: SimpleSet,
    #[serde(rename = "J")]
    pub j: SimpleSet,
    #[serde(serialize_with = "ser::qvec")]
    pub beta: QVector,
    #[serde(serialize_with = "ser::qvecs")]
    pub predicted_vertices: Vec<QVector>,
    #[serde(serialize_with = "ser::qvecs")]
    pub exposed_vertices: Vec<QVector>,
    pub predicted_dim: usize,
    pub exposed_dim: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitHit {
    pub orbit: usize,
    pub dim: usize,
    pub orbit_size: usize,
    pub descriptors: Vec<usize>,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub system: String,
    #[serde(serialize_with = "ser::qvec")]
    pub x: QVector,
    pub polytope_vertices: usize,
    pub polytope_dim: usize,
    pub face_orbits: usize,
    pub descriptors: usize,
    pub count_status: Status,
    pub witness_checks: Vec<WitnessCheck>,
    pub orbit_hits: Vec<OrbitHit>,
    pub status: Status,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    /// First failing witness or orbit check, if any.
    pub fn first_counterexample(&self) -> Option<serde_json::Value> {
        if let Some(c) = self.witness_checks.iter().find(|c| !c.status.is_pass()) {
            return serde_json::to_value(c).ok();
        }
        if let Some(h) = self.orbit_hits.iter().find(|h| !h.status.is_pass()) {
            return serde_json::to_value(h).ok();
        }
        if !self.count_status.is_pass() {
            return Some(serde_json::json!({
                "face_orbits": self.face_orbits,
                "descriptors": self.descriptors,
            }));
        }
        None
    }
}

/// Builds `P = conv(W·x)` and checks the descriptors of `x` against its
/// face orbits.
pub fn verify_bijection(
    rs: &RootSystem,
    w: &WeylGroup,
    x: &[Rat],
) -> Result<BijectionReport, FaceLabError> {
    verify_bijection_with_budget(rs, w, x, DEFAULT_FACE_BUDGET)
}

pub fn verify_bijection_with_budget(
    rs: &RootSystem,
    w: &WeylGroup,
    x: &[Rat],
    budget: usize,
) -> Result<BijectionReport, FaceLabError> {
    let descriptors = classify_faces(rs, w, x)?;
    let polytope = RationalPolytope::hull(&w.orbit(x)?)?;
    let orbits = polytope.faces_up_to_group_with_budget(w, budget)?;
    Ok(check_descriptors(rs, x, &polytope, &orbits, &descriptors))
}

/// The comparison step of [`verify_bijection`], exposed so that altered
/// descriptor lists can be checked too.
pub fn check_descriptors(
    rs: &RootSystem,
    x: &[Rat],
    polytope: &RationalPolytope,
    orbits: &[FaceOrbit],
    descriptors: &[FaceDescriptor],
) -> BijectionReport {
    let orbit_of: HashMap<&Vec<usize>, usize> = orbits
        .iter()
        .enumerate()
        .flat_map(|(k, o)| o.members.iter().map(move |m| (m, k)))
        .collect();
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); orbits.len()];
    let mut witness_checks = Vec::new();
    for (d, desc) in descriptors.iter().enumerate() {
        let exposed = polytope
            .exposed_face(&rs.lower(&desc.beta))
            .unwrap_or_else(|_| polytope.improper_face());
        let exposed_vertices: Vec<QVector> = exposed
            .vertex_indices
            .iter()
            .map(|&k| polytope.vertices()[k].clone())
            .collect();
        let predicted: BTreeSet<&QVector> = desc.sigma_vertices.iter().collect();
        let got: BTreeSet<&QVector> = exposed_vertices.iter().collect();
        let ok = predicted == got && exposed.dim == desc.dim_sigma;
        if let Some(&k) = orbit_of.get(&exposed.vertex_indices) {
            hits[k].push(d);
        }
        witness_checks.push(WitnessCheck {
            descriptor: d,
            i: desc.i,
            j: desc.j,
            beta: desc.beta.clone(),
            predicted_vertices: desc.sigma_vertices.clone(),
            exposed_vertices,
            predicted_dim: desc.dim_sigma,
            exposed_dim: exposed.dim,
            status: Status::from_bool(ok),
        });
    }
    let orbit_hits: Vec<OrbitHit> = orbits
        .iter()
        .zip(hits)
        .enumerate()
        .map(|(k, (o, h))| OrbitHit {
            orbit: k,
            dim: o.representative.dim,
            orbit_size: o.orbit_size,
            status: Status::from_bool(h.len() == 1),
            descriptors: h,
        })
        .collect();
    let count_status = Status::from_bool(orbits.len() == descriptors.len());
    let all = count_status.is_pass()
        && witness_checks.iter().all(|c| c.status.is_pass())
        && orbit_hits.iter().all(|h| h.status.is_pass());
    BijectionReport {
        system: rs.label().to_string(),
        x: x.to_vec(),
        polytope_vertices: polytope.vertices().len(),
        polytope_dim: polytope.dim(),
        face_orbits: orbits.len(),
        descriptors: descriptors.len(),
        count_status,
        witness_checks,
        orbit_hits,
        status: Status::from_bool(all),
    }
}

/// A dominant point whose wall set is exactly `walls`: the sum of the
/// fundamental coweights outside `walls`.
pub fn dominant_with_walls(rs: &RootSystem, walls: SimpleSet) -> Result<QVector, FaceLabError> {
    canonical_beta(rs, walls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn setup(label: &str) -> (RootSystem, WeylGroup) {
        let rs = RootSystem::from_label(label).unwrap();
        let w = WeylGroup::generate(&rs).unwrap();
        (rs, w)
    }

    fn s(ix: &[usize]) -> SimpleSet {
        SimpleSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn x_connected_examples() {
        let (a2, _) = setup("A2");
        let reg = qvec(&[2, 0, -2]);
        for sub in SimpleSet::all_subsets(2) {
            assert!(is_x_connected(&a2, sub, &reg).unwrap());
        }
        let sing = qvec(&[1, 1, -2]);
        assert!(!is_x_connected(&a2, s(&[0]), &sing).unwrap());
        assert!(is_x_connected(&a2, s(&[]), &sing).unwrap());
        assert!(matches!(
            is_x_connected(&a2, s(&[5]), &sing),
            Err(FaceLabError::RootSystem(
                RootSystemError::InvalidSubset { .. }
            ))
        ));
    }

    #[test]
    fn saturation_examples() {
        let (a2, _) = setup("A2");
        assert_eq!(
            saturation(&a2, s(&[]), &qvec(&[1, 1, -2])).unwrap(),
            s(&[0])
        );
        assert_eq!(
            saturation(&a2, s(&[0]), &qvec(&[2, 0, -2])).unwrap(),
            s(&[0])
        );
        assert_eq!(
            saturation(&a2, s(&[0]), &qvec(&[1, 1, -2])).unwrap_err(),
            FaceLabError::NotXConnected(s(&[0]))
        );
        let (b2, _) = setup("B2");
        assert_eq!(saturation(&b2, s(&[]), &qvec(&[1, 1])).unwrap(), s(&[0]));
    }

    #[test]
    fn canonical_beta_examples() {
        let (a2, _) = setup("A2");
        let beta = canonical_beta(&a2, s(&[0])).unwrap();
        assert_eq!(rational::primitive(&beta), qvec(&[1, 1, -2]));
        let beta = canonical_beta(&a2, s(&[])).unwrap();
        assert!(a2.chamber_point(&beta).unwrap().is_regular());
        assert!(a2.is_dominant(&beta));
        assert!(rational::is_zero_vec(
            &canonical_beta(&a2, s(&[0, 1])).unwrap()
        ));
    }

    #[test]
    fn classify_a2() {
        let (a2, w) = setup("A2");
        let d = classify_faces(&a2, &w, &qvec(&[2, 0, -2])).unwrap();
        let is: Vec<SimpleSet> = d.iter().map(|f| f.i).collect();
        assert_eq!(is, vec![s(&[]), s(&[0]), s(&[1])]);
        assert_eq!(d[0].dim_sigma, 0);
        assert_eq!(d[1].dim_sigma, 1);
        assert_eq!(d[1].dim_ext_f, 1);

        let d = classify_faces(&a2, &w, &qvec(&[1, 1, -2])).unwrap();
        let pairs: Vec<(SimpleSet, SimpleSet)> = d.iter().map(|f| (f.i, f.j)).collect();
        assert_eq!(pairs, vec![(s(&[]), s(&[0])), (s(&[1]), s(&[1]))]);
        assert_eq!(d[0].sigma_vertices, vec![qvec(&[1, 1, -2])]);

        assert_eq!(
            classify_faces(&a2, &w, &qvec(&[0, 0, 0])).unwrap_err(),
            FaceLabError::ZeroVector
        );
        assert!(classify_faces(&a2, &w, &qvec(&[-2, 0, 2])).is_err());
    }

    #[test]
    fn classify_a1() {
        let (a1, w) = setup("A1");
        let d = classify_faces(&a1, &w, &qvec(&[1, -1])).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].i, SimpleSet::empty());
        assert_eq!(d[0].dim_ext_f, 0);
    }

    #[test]
    fn bijection_small_cases() {
        for (label, x) in [
            ("A2", qvec(&[2, 0, -2])),
            ("A2", qvec(&[1, 1, -2])),
            ("B2", qvec(&[2, 1])),
            ("B2", qvec(&[1, 1])),
        ] {
            let (rs, w) = setup(label);
            let report = verify_bijection(&rs, &w, &x).unwrap();
            assert!(report.passed(), "{label} {x:?}: {report:#?}");
            assert!(report.first_counterexample().is_none());
        }
        let (g2, w) = setup("G2");
        let x = dominant_with_walls(&g2, SimpleSet::empty()).unwrap();
        let report = verify_bijection(&g2, &w, &x).unwrap();
        assert!(report.passed());
        assert_eq!((report.face_orbits, report.descriptors), (3, 3));
    }

    #[test]
    fn corrupted_descriptor_fails() {
        let (a2, w) = setup("A2");
        let x = qvec(&[2, 0, -2]);
        let mut d = classify_faces(&a2, &w, &x).unwrap();
        d[1].beta = rational::neg(&d[1].beta);
        let p = RationalPolytope::hull(&w.orbit(&x).unwrap()).unwrap();
        let orbits = p.faces_up_to_group(&w).unwrap();
        let report = check_descriptors(&a2, &x, &p, &orbits, &d);
        assert!(!report.passed());
        assert!(report.first_counterexample().is_some());
    }

    #[test]
    fn parabolic_dims_sum_to_dim_g() {
        for label in ["A3", "B3", "BC2", "G2"] {
            let (rs, _) = setup(label);
            for j in SimpleSet::all_subsets(rs.rank()) {
                let (q, n) = parabolic_dims(&rs, j);
                assert_eq!(q + n, rs.dim_g());
            }
            // minimal parabolic of a split form: q_∅ = a ⊕ n
            let (q, _) = parabolic_dims(&rs, SimpleSet::empty());
            assert_eq!(q, rs.rank() + rs.roots().len() / 2);
        }
    }

    #[test]
    fn witness_cone_membership() {
        let (b2, _) = setup("B2");
        let cone = WitnessCone::new(&b2, s(&[0]));
        assert!(cone.contains(&b2, &qvec(&[3, 3])));
        assert!(!cone.contains(&b2, &qvec(&[2, 1])));
        assert!(!cone.contains(&b2, &qvec(&[-1, -1])));
    }
}
