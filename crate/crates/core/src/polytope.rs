//! Exact rational polytopes given by a finite point set: irredundant
//! vertices, facet inequalities, the face lattice and its quotient by a
//! finite matrix group.
//!
//! Hulls are computed in reduced coordinates of the affine hull, scaled to
//! integers, by testing every affinely independent hyperplane through
//! `dim` points. That is quadratic-ish in the number of points for the
//! ranks this crate targets and is exact throughout.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{
    self, affine_dim, common_integer_scaling, dot, inverse, mat_vec, primitive, rref, sub,
    transpose, QMatrix, QVector, Rat,
};
use crate::weyl::WeylGroup;

pub const DEFAULT_FACE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("cannot build the hull of an empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("integer overflow in exact hull computation")]
    Overflow,
    #[error("face lattice exceeds the budget of {budget} faces")]
    FaceBudgetExceeded { budget: usize },
    #[error("group element {element} does not map the vertex set to itself")]
    NotInvariant { element: usize },
}

/// `⟨normal, x⟩ ≤ offset`, tight exactly on `vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: QVector,
    pub offset: Rat,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolytopeFace {
    pub vertex_indices: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceOrbit {
    /// Lexicographically least member.
    pub representative: PolytopeFace,
    pub orbit_size: usize,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct RationalPolytope {
    vertices: Vec<QVector>,
    facets: Vec<Facet>,
    dim: usize,
    ambient_dim: usize,
    /// Row-reduced basis of the direction space of the affine hull.
    directions: Vec<QVector>,
}

impl RationalPolytope {
    pub fn hull(points: &[QVector]) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::Empty)?;
        let ambient_dim = first.len();
        let mut seen = HashSet::new();
        let mut pts: Vec<QVector> = Vec::new();
        for p in points {
            if p.len() != ambient_dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: ambient_dim,
                    found: p.len(),
                });
            }
            if seen.insert(p.clone()) {
                pts.push(p.clone());
            }
        }
        let p0 = pts[0].clone();
        let diffs: Vec<QVector> = pts.iter().map(|p| sub(p, &p0)).collect();
        let (directions, pivots) = rref(&diffs);
        let dim = pivots.len();
        if dim == 0 {
            return Ok(RationalPolytope {
                vertices: vec![p0],
                facets: Vec::new(),
                dim: 0,
                ambient_dim,
                directions,
            });
        }

        let reduced: Vec<QVector> = diffs
            .iter()
            .map(|d| pivots.iter().map(|&c| d[c].clone()).collect())
            .collect();
        let ints = common_integer_scaling(&reduced).ok_or(PolytopeError::Overflow)?;
        let raw_facets = integer_facets(&ints, dim)?;

        // a point is a vertex iff the facets through it meet only in it
        let n = pts.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (f, (_, members)) in raw_facets.iter().enumerate() {
            for &i in members {
                incident[i].push(f);
            }
        }
        let is_vertex: Vec<bool> = (0..n)
            .map(|i| {
                let mut common: Option<BTreeSet<usize>> = None;
                for &f in &incident[i] {
                    let set: BTreeSet<usize> = raw_facets[f].1.iter().copied().collect();
                    common = Some(match common {
                        None => set,
                        Some(c) => c.intersection(&set).copied().collect(),
                    });
                }
                matches!(common, Some(c) if c.len() == 1)
            })
            .collect();
        let mut new_index = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for i in 0..n {
            if is_vertex[i] {
                new_index[i] = vertices.len();
                vertices.push(pts[i].clone());
            }
        }

        // ambient normals: lift to pivot coordinates, then project onto the
        // direction space so the normal is canonical up to scale
        let projector = direction_projector(&directions);
        let mut facets: Vec<Facet> = raw_facets
            .into_iter()
            .map(|(normal_red, members)| {
                let mut lifted = rational::zeros(ambient_dim);
                for (k, &c) in pivots.iter().enumerate() {
                    lifted[c] = Rat::from_integer(normal_red[k].into());
                }
                let normal = primitive(&mat_vec(&projector, &lifted));
                let verts: Vec<usize> = members
                    .into_iter()
                    .filter(|&i| is_vertex[i])
                    .map(|i| new_index[i])
                    .collect();
                let offset = dot(&normal, &vertices[verts[0]]);
                Facet {
                    normal,
                    offset,
                    vertices: verts,
                }
            })
            .collect();
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));

        Ok(RationalPolytope {
            vertices,
            facets,
            dim,
            ambient_dim,
            directions,
        })
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertex_index(&self, v: &[Rat]) -> Option<usize> {
        self.vertices.iter().position(|w| w.as_slice() == v)
    }

    /// `h_P(β) = max ⟨v, β⟩` over the vertices, with the maximizing vertices.
    pub fn support(&self, beta: &[Rat]) -> Result<(Rat, Vec<usize>), PolytopeError> {
        self.check(beta)?;
        let values: Vec<Rat> = self.vertices.iter().map(|v| dot(v, beta)).collect();
        let best = values.iter().max().expect("nonempty").clone();
        let argmax = (0..values.len()).filter(|&i| values[i] == best).collect();
        Ok((best, argmax))
    }

    /// `F_β(P) = P ∩ {⟨·, β⟩ = h_P(β)}`; `β = 0` gives `P`.
    pub fn exposed_face(&self, beta: &[Rat]) -> Result<PolytopeFace, PolytopeError> {
        let (_, argmax) = self.support(beta)?;
        Ok(self.face_from_indices(argmax))
    }

    pub fn face_from_indices(&self, vertex_indices: Vec<usize>) -> PolytopeFace {
        let pts: Vec<QVector> = vertex_indices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        PolytopeFace {
            dim: affine_dim(&pts),
            vertex_indices,
        }
    }

    pub fn improper_face(&self) -> PolytopeFace {
        PolytopeFace {
            vertex_indices: (0..self.vertices.len()).collect(),
            dim: self.dim,
        }
    }

    /// All nonempty faces including `P`, ordered by dimension then by
    /// vertex indices.
    pub fn face_lattice(&self) -> Result<Vec<PolytopeFace>, PolytopeError> {
        self.face_lattice_with_budget(DEFAULT_FACE_BUDGET)
    }

    pub fn face_lattice_with_budget(
        &self,
        budget: usize,
    ) -> Result<Vec<PolytopeFace>, PolytopeError> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut work: Vec<Vec<usize>> = Vec::new();
        let improper = self.improper_face().vertex_indices;
        seen.insert(improper.clone());
        for f in &self.facets {
            if seen.insert(f.vertices.clone()) {
                work.push(f.vertices.clone());
            }
        }
        if seen.len() > budget {
            return Err(PolytopeError::FaceBudgetExceeded { budget });
        }
        let facet_sets: Vec<HashSet<usize>> = self
            .facets
            .iter()
            .map(|f| f.vertices.iter().copied().collect())
            .collect();
        while let Some(face) = work.pop() {
            for fs in &facet_sets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| fs.contains(i)).collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    if seen.len() > budget {
                        return Err(PolytopeError::FaceBudgetExceeded { budget });
                    }
                    work.push(meet);
                }
            }
        }
        let mut faces: Vec<PolytopeFace> = seen
            .into_iter()
            .map(|ix| self.face_from_indices(ix))
            .collect();
        faces.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then_with(|| a.vertex_indices.cmp(&b.vertex_indices))
        });
        Ok(faces)
    }

    /// Vertex permutation induced by each group element.
    pub fn vertex_permutations(&self, w: &WeylGroup) -> Result<Vec<Vec<usize>>, PolytopeError> {
        let lookup: HashMap<&QVector, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        (0..w.order())
            .map(|g| {
                if w.element(g).len() != self.ambient_dim {
                    return Err(PolytopeError::DimensionMismatch {
                        expected: self.ambient_dim,
                        found: w.element(g).len(),
                    });
                }
                self.vertices
                    .iter()
                    .map(|v| {
                        lookup
                            .get(&w.apply(g, v))
                            .copied()
                            .ok_or(PolytopeError::NotInvariant { element: g })
                    })
                    .collect()
            })
            .collect()
    }

    /// Partition of the proper faces into orbits of `w`.
    pub fn faces_up_to_group(&self, w: &WeylGroup) -> Result<Vec<FaceOrbit>, PolytopeError> {
        self.faces_up_to_group_with_budget(w, DEFAULT_FACE_BUDGET)
    }

    pub fn faces_up_to_group_with_budget(
        &self,
        w: &WeylGroup,
        budget: usize,
    ) -> Result<Vec<FaceOrbit>, PolytopeError> {
        let perms = self.vertex_permutations(w)?;
        let faces = self.face_lattice_with_budget(budget)?;
        let improper = self.improper_face();
        let dims: HashMap<Vec<usize>, usize> = faces
            .iter()
            .map(|f| (f.vertex_indices.clone(), f.dim))
            .collect();
        let mut assigned: HashSet<Vec<usize>> = HashSet::new();
        let mut orbits = Vec::new();
        for face in faces.iter().filter(|f| **f != improper) {
            if assigned.contains(&face.vertex_indices) {
                continue;
            }
            let mut members: BTreeSet<Vec<usize>> = BTreeSet::new();
            for perm in &perms {
                let mut image: Vec<usize> = face.vertex_indices.iter().map(|&i| perm[i]).collect();
                image.sort_unstable();
                members.insert(image);
            }
            let members: Vec<Vec<usize>> = members.into_iter().collect();
            for m in &members {
                assigned.insert(m.clone());
            }
            let rep = members[0].clone();
            orbits.push(FaceOrbit {
                representative: PolytopeFace {
                    dim: dims.get(&rep).copied().unwrap_or(face.dim),
                    vertex_indices: rep,
                },
                orbit_size: members.len(),
                members,
            });
        }
        orbits.sort_by(|a, b| {
            a.representative
                .dim
                .cmp(&b.representative.dim)
                .then_with(|| {
                    a.representative
                        .vertex_indices
                        .cmp(&b.representative.vertex_indices)
                })
        });
        Ok(orbits)
    }

    /// Membership: in the affine hull and satisfying every facet inequality.
    pub fn contains(&self, p: &[Rat]) -> bool {
        if p.len() != self.ambient_dim || !self.in_affine_hull(p) {
            return false;
        }
        self.facets.iter().all(|f| dot(&f.normal, p) <= f.offset)
    }

    pub fn in_affine_hull(&self, p: &[Rat]) -> bool {
        let d = sub(p, &self.vertices[0]);
        let mut rows = self.directions.clone();
        rows.push(d);
        rational::rank(&rows) == self.directions.len()
    }

    /// The unique face whose relative interior contains `p`, if `p ∈ P`.
    pub fn locate(&self, p: &[Rat]) -> Option<PolytopeFace> {
        if !self.contains(p) {
            return None;
        }
        let mut face: Vec<usize> = (0..self.vertices.len()).collect();
        for f in self.facets.iter().filter(|f| dot(&f.normal, p) == f.offset) {
            let set: HashSet<usize> = f.vertices.iter().copied().collect();
            face.retain(|i| set.contains(i));
        }
        Some(self.face_from_indices(face))
    }

    /// Sum of the outer normals of the facets containing `face`; zero for the
    /// improper face.
    pub fn normal_cone_witness(&self, face: &PolytopeFace) -> QVector {
        let set: HashSet<usize> = face.vertex_indices.iter().copied().collect();
        let mut beta = rational::zeros(self.ambient_dim);
        for f in &self.facets {
            if set.iter().all(|i| f.vertices.contains(i)) {
                beta = rational::add(&beta, &f.normal);
            }
        }
        beta
    }

    /// Face counts indexed by dimension, including `P` itself.
    pub fn f_vector(&self) -> Result<Vec<usize>, PolytopeError> {
        let faces = self.face_lattice()?;
        let mut counts = vec![0; self.dim + 1];
        for f in faces {
            counts[f.dim] += 1;
        }
        Ok(counts)
    }

    fn check(&self, v: &[Rat]) -> Result<(), PolytopeError> {
        if v.len() != self.ambient_dim {
            Err(PolytopeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Orthogonal projector onto the row space of `basis`: `Bᵀ (B Bᵀ)⁻¹ B`.
fn direction_projector(basis: &[QVector]) -> QMatrix {
    let b: QMatrix = basis.to_vec();
    let bt = transpose(&b);
    let gram = rational::mat_mul(&b, &bt);
    let inv = inverse(&gram).expect("rows are independent");
    rational::mat_mul(&rational::mat_mul(&bt, &inv), &b)
}

/// Outer normal and indices of the points on one facet.
type IntegerFacet = (Vec<i128>, Vec<usize>);

/// Facets of a full-dimensional integer point configuration in `Z^dim`.
fn integer_facets(points: &[Vec<i128>], dim: usize) -> Result<Vec<IntegerFacet>, PolytopeError> {
    let n = points.len();
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut facets = Vec::new();
    if n < dim + 1 {
        return Ok(facets);
    }
    let mut comb: Vec<usize> = (0..dim).collect();
    loop {
        if let Some(normal) = hyperplane_normal(points, &comb)? {
            let base = dot_i128(&normal, &points[comb[0]])?;
            let mut above = false;
            let mut below = false;
            let mut on = Vec::new();
            for (i, p) in points.iter().enumerate() {
                let v = dot_i128(&normal, p)?;
                match v.cmp(&base) {
                    std::cmp::Ordering::Greater => above = true,
                    std::cmp::Ordering::Less => below = true,
                    std::cmp::Ordering::Equal => on.push(i),
                }
                if above && below {
                    break;
                }
            }
            if !(above && below) && found.insert(on.clone()) {
                let outer = if above {
                    normal.iter().map(|c| -c).collect()
                } else {
                    normal
                };
                facets.push((outer, on));
            }
        }
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    Ok(facets)
}

fn dot_i128(a: &[i128], b: &[i128]) -> Result<i128, PolytopeError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(PolytopeError::Overflow)
    })
}

/// Normal of the hyperplane through the chosen points (generalized cross
/// product of the difference vectors), or `None` if they are dependent.
fn hyperplane_normal(
    points: &[Vec<i128>],
    comb: &[usize],
) -> Result<Option<Vec<i128>>, PolytopeError> {
    let dim = comb.len();
    let p0 = &points[comb[0]];
    let rows: Vec<Vec<i128>> = comb[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(p0)
                .map(|(a, b)| a.checked_sub(*b).ok_or(PolytopeError::Overflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let mut normal = Vec::with_capacity(dim);
    for k in 0..dim {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let d = det_bareiss(minor)?;
        normal.push(if k % 2 == 0 { d } else { -d });
    }
    if normal.iter().all(|c| *c == 0) {
        return Ok(None);
    }
    let g = normal.iter().fold(0i128, |acc, c| gcd(acc, c.abs()));
    Ok(Some(normal.into_iter().map(|c| c / g).collect()))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fraction-free determinant.
fn det_bareiss(mut m: Vec<Vec<i128>>) -> Result<i128, PolytopeError> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j]
                    .checked_mul(m[k][k])
                    .ok_or(PolytopeError::Overflow)?;
                let b = m[i][k]
                    .checked_mul(m[k][j])
                    .ok_or(PolytopeError::Overflow)?;
                m[i][j] = a.checked_sub(b).ok_or(PolytopeError::Overflow)? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `F ∩ M` for an affine line `M = {base + t·dir}`: the parameter interval
/// of `P ∩ M` as `(t_min, t_max)`, or `None` if the line misses `P`. Facets
/// listed in `tight` are imposed as equalities, which cuts out a face.
pub fn line_section(
    p: &RationalPolytope,
    tight: &[usize],
    base: &[Rat],
    dir: &[Rat],
) -> Option<(Rat, Rat)> {
    if !p.in_affine_hull(base) || !p.in_affine_hull(&rational::add(base, dir)) {
        return None;
    }
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    let mut fixed: Option<Rat> = None;
    for (k, f) in p.facets().iter().enumerate() {
        let a = dot(&f.normal, dir);
        let b = &f.offset - dot(&f.normal, base);
        // a t <= b
        if tight.contains(&k) {
            // a t == b
            if a.is_zero() {
                if !b.is_zero() {
                    return None;
                }
                continue;
            }
            let t = &b / &a;
            if let Some(prev) = &fixed {
                if *prev != t {
                    return None;
                }
            }
            fixed = Some(t);
            continue;
        }
        if a.is_zero() {
            if b.is_negative() {
                return None;
            }
        } else if a.is_positive() {
            let t = &b / &a;
            hi = Some(match hi {
                Some(h) if h < t => h,
                _ => t,
            });
        } else {
            let t = &b / &a;
            lo = Some(match lo {
                Some(l) if l > t => l,
                _ => t,
            });
        }
    }
    let (lo, hi) = (lo?, hi?);
    if lo > hi {
        return None;
    }
    match fixed {
        Some(t) if t >= lo && t <= hi => Some((t.clone(), t)),
        Some(_) => None,
        None => Some((lo, hi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, rat};
    use crate::rootsys::RootSystem;

    fn orbit_polytope(label: &str, x: &[i64]) -> (RationalPolytope, WeylGroup) {
        let rs = RootSystem::from_label(label).unwrap();
        let w = WeylGroup::generate(&rs).unwrap();
        let p = RationalPolytope::hull(&w.orbit(&qvec(x)).unwrap()).unwrap();
        (p, w)
    }

    #[test]
    fn hexagon_and_triangle() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        assert_eq!(hex.dim(), 2);
        assert_eq!(hex.vertices().len(), 6);
        assert_eq!(hex.facets().len(), 6);
        let (tri, _) = orbit_polytope("A2", &[1, 1, -2]);
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.facets().len(), 3);
    }

    #[test]
    fn single_point() {
        let p = RationalPolytope::hull(&[qvec(&[1, 2]), qvec(&[1, 2])]).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.vertices().len(), 1);
        assert!(p.facets().is_empty());
        assert_eq!(p.face_lattice().unwrap().len(), 1);
        assert_eq!(
            RationalPolytope::hull(&[]).unwrap_err(),
            PolytopeError::Empty
        );
    }

    #[test]
    fn redundant_points_are_dropped() {
        let pts = vec![
            qvec(&[0, 0]),
            qvec(&[2, 0]),
            qvec(&[0, 2]),
            qvec(&[2, 2]),
            qvec(&[1, 1]),
            qvec(&[1, 0]),
        ];
        let p = RationalPolytope::hull(&pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        for f in p.facets() {
            assert_eq!(f.vertices.len(), 2);
        }
    }

    #[test]
    fn segment_in_higher_space() {
        let p = RationalPolytope::hull(&[qvec(&[1, 1, 0]), qvec(&[0, 0, 1]), qvec(&[2, 2, -1])])
            .unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.facets().len(), 2);
    }

    #[test]
    fn support_examples() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        let (val, arg) = hex.support(&qvec(&[1, 0, -1])).unwrap();
        assert_eq!(val, rat(4));
        assert_eq!(arg.len(), 1);
        assert_eq!(hex.vertices()[arg[0]], qvec(&[2, 0, -2]));
        let (val, arg) = hex.support(&qvec(&[0, 0, 0])).unwrap();
        assert_eq!(val, rat(0));
        assert_eq!(arg.len(), 6);

        let (tri, _) = orbit_polytope("A2", &[1, 1, -2]);
        let (val, arg) = tri.support(&qvec(&[0, 0, -1])).unwrap();
        assert_eq!(val, rat(2));
        assert_eq!(tri.vertices()[arg[0]], qvec(&[1, 1, -2]));
    }

    #[test]
    fn exposed_face_examples() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        let f = hex.exposed_face(&qvec(&[1, 0, -1])).unwrap();
        assert_eq!(f.dim, 0);
        let f = hex.exposed_face(&qvec(&[1, 1, -2])).unwrap();
        assert_eq!(f.dim, 1);
        let pts: BTreeSet<QVector> = f
            .vertex_indices
            .iter()
            .map(|&i| hex.vertices()[i].clone())
            .collect();
        assert_eq!(pts, BTreeSet::from([qvec(&[2, 0, -2]), qvec(&[0, 2, -2])]));
        assert_eq!(
            hex.exposed_face(&qvec(&[0, 0, 0])).unwrap(),
            hex.improper_face()
        );
    }

    #[test]
    fn lattice_counts() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        assert_eq!(hex.face_lattice().unwrap().len(), 13);
        assert_eq!(hex.f_vector().unwrap(), vec![6, 6, 1]);
        let (tri, _) = orbit_polytope("A2", &[1, 1, -2]);
        assert_eq!(tri.face_lattice().unwrap().len(), 7);
        assert_eq!(
            hex.face_lattice_with_budget(5).unwrap_err(),
            PolytopeError::FaceBudgetExceeded { budget: 5 }
        );
    }

    #[test]
    fn orbits_of_faces() {
        let (hex, w) = orbit_polytope("A2", &[2, 0, -2]);
        let orbits = hex.faces_up_to_group(&w).unwrap();
        let sizes: Vec<(usize, usize)> = orbits
            .iter()
            .map(|o| (o.representative.dim, o.orbit_size))
            .collect();
        assert_eq!(sizes, vec![(0, 6), (1, 3), (1, 3)]);

        let (tri, w) = orbit_polytope("A2", &[1, 1, -2]);
        assert_eq!(tri.faces_up_to_group(&w).unwrap().len(), 2);

        let (oct, w) = orbit_polytope("B2", &[2, 1]);
        assert_eq!(oct.vertices().len(), 8);
        let orbits = oct.faces_up_to_group(&w).unwrap();
        assert_eq!(orbits.len(), 3);
        assert_eq!(orbits.iter().map(|o| o.orbit_size).sum::<usize>(), 16);
    }

    #[test]
    fn non_invariant_group_is_rejected() {
        let rs = RootSystem::from_label("A2").unwrap();
        let w = WeylGroup::generate(&rs).unwrap();
        let p = RationalPolytope::hull(&[qvec(&[2, 0, -2]), qvec(&[0, 2, -2]), qvec(&[1, 1, -2])])
            .unwrap();
        assert!(matches!(
            p.faces_up_to_group(&w),
            Err(PolytopeError::NotInvariant { .. })
        ));
    }

    #[test]
    fn cube_face_lattice() {
        let mut pts = Vec::new();
        for a in [0, 1] {
            for b in [0, 1] {
                for c in [0, 1] {
                    pts.push(qvec(&[a, b, c]));
                }
            }
        }
        let p = RationalPolytope::hull(&pts).unwrap();
        assert_eq!(p.f_vector().unwrap(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn locate_and_contains() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        assert_eq!(hex.locate(&qvec(&[0, 0, 0])).unwrap(), hex.improper_face());
        assert_eq!(hex.locate(&qvec(&[2, 0, -2])).unwrap().dim, 0);
        assert_eq!(hex.locate(&qvec(&[1, 1, -2])).unwrap().dim, 1);
        assert!(hex.locate(&qvec(&[3, 0, -3])).is_none());
        assert!(!hex.contains(&qvec(&[1, 0, 0])));
    }

    #[test]
    fn line_sections() {
        let (hex, _) = orbit_polytope("A2", &[2, 0, -2]);
        // the line through 0 in direction (1,0,-1) meets the hexagon in [-2, 2]
        let (lo, hi) = line_section(&hex, &[], &qvec(&[0, 0, 0]), &qvec(&[1, 0, -1])).unwrap();
        assert_eq!((lo, hi), (rat(-2), rat(2)));
        assert!(line_section(&hex, &[], &qvec(&[1, 0, 0]), &qvec(&[1, 0, -1])).is_none());
    }
}
