//! The Weyl group as a finite set of exact matrices, generated by
//! breadth-first closure of the simple reflections.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{self, identity, mat_mul, mat_vec, transpose, QMatrix, QVector, Rat};
use crate::rootsys::{RootSystem, RootSystemError, SimpleSet};

pub const DEFAULT_ORDER_CAP: usize = 51_840;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("Weyl group order exceeds the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
}

/// A finite reflection group acting on the ambient space of a root system.
///
/// Elements are listed breadth-first by word length; within one length the
/// order is lexicographic in the generator indices of the recorded words.
/// Element 0 is the identity.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    root_system: RootSystem,
    generators: Vec<QMatrix>,
    elements: Vec<QMatrix>,
    words: Vec<Vec<usize>>,
    index: HashMap<QMatrix, usize>,
}

impl WeylGroup {
    pub fn generate(rs: &RootSystem) -> Result<Self, WeylError> {
        Self::generate_with_cap(rs, DEFAULT_ORDER_CAP)
    }

    pub fn generate_with_cap(rs: &RootSystem, cap: usize) -> Result<Self, WeylError> {
        let n = rs.ambient_dim();
        let generators: Vec<QMatrix> = rs
            .simple_roots()
            .iter()
            .map(|a| reflection_matrix(rs, a))
            .collect();
        let mut elements = vec![identity(n)];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(identity(n), 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, s) in generators.iter().enumerate() {
                let m = mat_mul(&elements[i], s);
                if index.contains_key(&m) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(WeylError::OrderCapExceeded { cap });
                }
                let mut w = words[i].clone();
                w.push(k);
                index.insert(m.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(m);
                words.push(w);
            }
        }
        Ok(WeylGroup {
            root_system: rs.clone(),
            generators,
            elements,
            words,
            index,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &QMatrix {
        &self.elements[i]
    }

    pub fn generator(&self, k: usize) -> &QMatrix {
        &self.generators[k]
    }

    /// Reduced word of element `i` in the simple reflections.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn index_of(&self, m: &QMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of the simple reflection `s_k` among the elements.
    pub fn generator_element(&self, k: usize) -> usize {
        self.index[&self.generators[k]]
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.index[&mat_mul(&self.elements[i], &self.elements[j])]
    }

    pub fn inverse(&self, i: usize) -> usize {
        // orthogonal for the Gram matrix: M^{-1} = G^{-1} M^T G
        let m = &self.elements[i];
        let inv = match self.root_system.gram() {
            None => transpose(m),
            Some(g) => {
                let ginv = rational::inverse(g).expect("Gram matrix is invertible");
                mat_mul(&mat_mul(&ginv, &transpose(m)), g)
            }
        };
        self.index[&inv]
    }

    pub fn apply(&self, i: usize, v: &[Rat]) -> QVector {
        mat_vec(&self.elements[i], v)
    }

    /// `Mᵀ G M = G`.
    pub fn is_orthogonal(&self, i: usize) -> bool {
        let g = self.root_system.gram_matrix();
        let m = &self.elements[i];
        mat_mul(&mat_mul(&transpose(m), &g), m) == g
    }

    /// Distinct images `w·x`, in the order of first appearance.
    pub fn orbit(&self, x: &[Rat]) -> Result<Vec<QVector>, WeylError> {
        self.root_system.check_vector(x)?;
        Ok(self.orbit_of_subgroup(&self.all_indices(), x))
    }

    pub fn orbit_of_subgroup(&self, subgroup: &[usize], x: &[Rat]) -> Vec<QVector> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &i in subgroup {
            let y = self.apply(i, x);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        out
    }

    fn all_indices(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    /// The dominant point `x⁺` of the orbit and the first element `w` (in
    /// group order) with `w·x = x⁺`.
    pub fn to_dominant(&self, x: &[Rat]) -> Result<(QVector, usize), WeylError> {
        self.root_system.check_vector(x)?;
        for i in 0..self.order() {
            let y = self.apply(i, x);
            if self.root_system.is_dominant(&y) {
                return Ok((y, i));
            }
        }
        unreachable!("every orbit meets the closed fundamental chamber")
    }

    /// Indices of the elements fixing `x`.
    pub fn stabilizer(&self, x: &[Rat]) -> Result<Vec<usize>, WeylError> {
        self.root_system.check_vector(x)?;
        Ok((0..self.order())
            .filter(|&i| self.apply(i, x).as_slice() == x)
            .collect())
    }

    /// `(1/|W|) Σ_w w·x`.
    pub fn average(&self, x: &[Rat]) -> Result<QVector, WeylError> {
        self.root_system.check_vector(x)?;
        let mut sum = rational::zeros(x.len());
        for i in 0..self.order() {
            sum = rational::add(&sum, &self.apply(i, x));
        }
        let n = rational::rat(self.order() as i64);
        Ok(sum.iter().map(|c| c / &n).collect())
    }

    /// Closure of the given elements under composition, sorted by index.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: HashSet<usize> = HashSet::from([0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for &g in gens {
                let j = self.compose(i, g);
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// `W_J`, generated by the reflections in the simple roots of `J`.
    pub fn parabolic_subgroup(&self, j: SimpleSet) -> Vec<usize> {
        let gens: Vec<usize> = j
            .iter()
            .filter(|&k| k < self.generator_count())
            .map(|k| self.generator_element(k))
            .collect();
        self.subgroup_generated(&gens)
    }
}

/// `s_α(v) = v − 2⟨α,v⟩/⟨α,α⟩ α` as a matrix.
pub fn reflection_matrix(rs: &RootSystem, alpha: &[Rat]) -> QMatrix {
    let n = rs.ambient_dim();
    let c = rational::rat(2) / rs.inner(alpha, alpha);
    let lowered = rs.lower(alpha);
    let mut m = identity(n);
    for (i, row) in m.iter_mut().enumerate() {
        if alpha[i].is_zero() {
            continue;
        }
        for (j, entry) in row.iter_mut().enumerate() {
            *entry -= &c * &alpha[i] * &lowered[j];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn group(label: &str) -> WeylGroup {
        WeylGroup::generate(&RootSystem::from_label(label).unwrap()).unwrap()
    }

    #[test]
    fn known_orders() {
        for (label, order) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("B2", 8),
            ("B3", 48),
            ("C3", 48),
            ("D3", 24),
            ("BC2", 8),
            ("G2", 12),
            ("F4", 1152),
            ("A1xA1", 4),
        ] {
            assert_eq!(group(label).order(), order, "{label}");
        }
    }

    #[test]
    fn order_cap() {
        let rs = RootSystem::from_label("B3").unwrap();
        assert_eq!(
            WeylGroup::generate_with_cap(&rs, 10).unwrap_err(),
            WeylError::OrderCapExceeded { cap: 10 }
        );
    }

    #[test]
    fn generators_are_involutions_and_words_are_short() {
        let w = group("G2");
        for k in 0..w.generator_count() {
            let s = w.generator_element(k);
            assert_eq!(w.compose(s, s), 0);
        }
        // longest element of G2 has length 6
        assert_eq!(w.words().iter().map(Vec::len).max(), Some(6));
        for i in 0..w.order() {
            let back = w.compose(i, w.inverse(i));
            assert_eq!(back, 0);
        }
    }

    #[test]
    fn orbit_examples() {
        let w = group("A2");
        let orbit = w.orbit(&qvec(&[2, 0, -2])).unwrap();
        assert_eq!(orbit.len(), 6);
        for p in &orbit {
            let mut s = p.clone();
            s.sort();
            assert_eq!(s, qvec(&[-2, 0, 2]));
        }
        assert_eq!(w.orbit(&qvec(&[1, 1, -2])).unwrap().len(), 3);
        assert_eq!(w.orbit(&qvec(&[0, 0, 0])).unwrap(), vec![qvec(&[0, 0, 0])]);
    }

    #[test]
    fn dominant_examples() {
        let a2 = group("A2");
        assert_eq!(
            a2.to_dominant(&qvec(&[-2, 0, 2])).unwrap().0,
            qvec(&[2, 0, -2])
        );
        assert_eq!(
            a2.to_dominant(&qvec(&[2, 0, -2])).unwrap(),
            (qvec(&[2, 0, -2]), 0)
        );
        let b2 = group("B2");
        assert_eq!(b2.to_dominant(&qvec(&[-1, -2])).unwrap().0, qvec(&[2, 1]));
    }

    #[test]
    fn stabilizer_examples() {
        let a2 = group("A2");
        assert_eq!(a2.stabilizer(&qvec(&[1, 1, -2])).unwrap().len(), 2);
        assert_eq!(a2.stabilizer(&qvec(&[2, 0, -2])).unwrap(), vec![0]);
        assert_eq!(a2.stabilizer(&qvec(&[0, 0, 0])).unwrap().len(), 6);
    }

    #[test]
    fn average_examples() {
        let a2 = group("A2");
        assert_eq!(a2.average(&qvec(&[5, -1, -4])).unwrap(), qvec(&[0, 0, 0]));
        let b2 = group("B2");
        assert_eq!(b2.average(&qvec(&[2, 1])).unwrap(), qvec(&[0, 0]));
        let prod = group("A1xA1");
        assert_eq!(prod.ambient_dim_for_test(), 4);
        assert_eq!(
            prod.average(&qvec(&[1, -1, 0, 0])).unwrap(),
            qvec(&[0, 0, 0, 0])
        );
        // a^W is the line of (1,1,1) for A2 realized in 3-space
        assert_eq!(a2.average(&qvec(&[3, 0, 0])).unwrap(), qvec(&[1, 1, 1]));
    }

    #[test]
    fn all_elements_orthogonal() {
        for label in ["A3", "B3", "G2", "BC2"] {
            let w = group(label);
            assert!((0..w.order()).all(|i| w.is_orthogonal(i)), "{label}");
        }
    }

    #[test]
    fn parabolic_subgroup_orders() {
        let w = group("B3");
        assert_eq!(w.parabolic_subgroup(SimpleSet::empty()), vec![0]);
        assert_eq!(
            w.parabolic_subgroup(SimpleSet::from_indices([0, 1])).len(),
            6
        );
        assert_eq!(
            w.parabolic_subgroup(SimpleSet::from_indices([1, 2])).len(),
            8
        );
        assert_eq!(
            w.parabolic_subgroup(SimpleSet::from_indices([0, 2])).len(),
            4
        );
        assert_eq!(w.parabolic_subgroup(SimpleSet::full(3)).len(), 48);
    }

    impl WeylGroup {
        fn ambient_dim_for_test(&self) -> usize {
            self.root_system.ambient_dim()
        }
    }
}
