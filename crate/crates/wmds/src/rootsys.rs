//! Simply-laced root systems (types A, D, E) and their Weyl groups.
//!
//! Roots are integer vectors in the simple-root basis. Weyl elements carry a
//! reduced word together with the matrix of their action on the root lattice,
//! which is canonical and used for deduplication during the breadth-first
//! enumeration.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            _ => None,
        }
    }
}

/// A vector in the root lattice, coordinates in the simple-root basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    pub coords: Vec<i64>,
}

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector { coords: vec![0; rank] }
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        RootVector { coords }
    }

    /// Height `d(alpha)`: the coordinate sum.
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &RootVector) -> RootVector {
        RootVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RootVector) -> RootVector {
        RootVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RootVector {
        RootVector { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: i64) -> RootVector {
        RootVector { coords: self.coords.iter().map(|a| k * a).collect() }
    }

    pub fn is_nonneg(&self) -> bool {
        self.coords.iter().all(|&k| k >= 0)
    }

    pub fn is_nonpos(&self) -> bool {
        self.coords.iter().all(|&k| k <= 0)
    }

    /// Partial order: `self >= other` when every coordinate of the
    /// difference is nonnegative.
    pub fn dominates(&self, other: &RootVector) -> bool {
        self.sub(other).is_nonneg()
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

#[derive(Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub adjacency: Vec<Vec<bool>>,
    pub positive_roots: Vec<RootVector>,
}

impl RootSystem {
    /// Build the root data for a valid simply-laced type: `A_r` (r >= 1),
    /// `D_r` (r >= 4), `E_6`, `E_7`, `E_8`.
    pub fn build(family: Family, rank: usize) -> Result<RootSystem> {
        let edges: Vec<(usize, usize)> = match family {
            Family::A => {
                if rank < 1 {
                    return Err(invalid(family, rank, "A_r requires r >= 1"));
                }
                (0..rank.saturating_sub(1)).map(|i| (i, i + 1)).collect()
            }
            Family::D => {
                if rank < 4 {
                    return Err(invalid(family, rank, "D_r requires r >= 4"));
                }
                let mut e: Vec<(usize, usize)> = (0..rank - 2).map(|i| (i, i + 1)).collect();
                e.push((rank - 3, rank - 1));
                e
            }
            Family::E => {
                if !(6..=8).contains(&rank) {
                    return Err(invalid(family, rank, "E_r requires r in {6,7,8}"));
                }
                // Bourbaki: path 1-3-4-5-6(-7)(-8), node 2 hangs off node 4.
                let mut e = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
                if rank >= 7 {
                    e.push((5, 6));
                }
                if rank >= 8 {
                    e.push((6, 7));
                }
                e
            }
        };
        let mut adjacency = vec![vec![false; rank]; rank];
        for (i, j) in edges {
            adjacency[i][j] = true;
            adjacency[j][i] = true;
        }
        let positive_roots = generate_positive_roots(rank, &adjacency)?;
        let expected = match family {
            Family::A => rank * (rank + 1) / 2,
            Family::D => rank * (rank - 1),
            Family::E => match rank {
                6 => 36,
                7 => 63,
                _ => 120,
            },
        };
        if positive_roots.len() != expected {
            return Err(Error::Certification("positive root count mismatch"));
        }
        Ok(RootSystem { family, rank, adjacency, positive_roots })
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank).filter(|&j| self.adjacency[i][j]).collect()
    }

    /// Cartan pairing `<alpha_i, alpha_j>`: 2 on the diagonal, -1 for
    /// adjacent nodes, 0 otherwise (simply-laced).
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else if self.adjacency[i][j] {
            -1
        } else {
            0
        }
    }

    fn pairing(&self, alpha: &RootVector, i: usize) -> i64 {
        alpha
            .coords
            .iter()
            .enumerate()
            .map(|(j, &k)| k * self.cartan(j, i))
            .sum()
    }

    /// Simple reflection on the root lattice:
    /// `sigma_i(alpha) = alpha - <alpha, alpha_i> alpha_i`.
    pub fn reflect(&self, i: usize, alpha: &RootVector) -> RootVector {
        let c = self.pairing(alpha, i);
        let mut out = alpha.clone();
        out.coords[i] -= c;
        out
    }

    pub fn is_positive_root(&self, alpha: &RootVector) -> bool {
        self.positive_roots.iter().any(|r| r == alpha)
    }

    /// Twice the Weyl vector: `2 rho = sum of the positive roots`. Stored
    /// doubled so everything stays integral; `rho` itself may be half-integral
    /// in root coordinates (already so for A_3).
    pub fn two_rho(&self) -> RootVector {
        let mut acc = RootVector::zero(self.rank);
        for r in &self.positive_roots {
            acc = acc.add(r);
        }
        acc
    }

    /// `|W|` by the classical formulas.
    pub fn weyl_order(&self) -> u128 {
        fn fact(n: u128) -> u128 {
            (1..=n).product()
        }
        match self.family {
            Family::A => fact(self.rank as u128 + 1),
            Family::D => (1u128 << (self.rank - 1)) * fact(self.rank as u128),
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
        }
    }
}

fn invalid(family: Family, rank: usize, reason: &str) -> Error {
    Error::InvalidRootSystem { family: family.letter(), rank, reason: reason.to_string() }
}

/// Orbit of the simple roots under the simple reflections, filtered to the
/// positive half.
fn generate_positive_roots(rank: usize, adjacency: &[Vec<bool>]) -> Result<Vec<RootVector>> {
    let stub = RootSystem {
        family: Family::A, // family irrelevant for reflection arithmetic
        rank,
        adjacency: adjacency.to_vec(),
        positive_roots: Vec::new(),
    };
    let mut seen: std::collections::HashSet<RootVector> = std::collections::HashSet::new();
    let mut queue: Vec<RootVector> = Vec::new();
    for i in 0..rank {
        let a = RootVector::simple(rank, i);
        seen.insert(a.clone());
        queue.push(a);
    }
    while let Some(alpha) = queue.pop() {
        for i in 0..rank {
            let beta = stub.reflect(i, &alpha);
            if seen.insert(beta.clone()) {
                queue.push(beta);
            }
        }
        if seen.len() > 1000 {
            return Err(Error::Certification("root orbit did not close"));
        }
    }
    let mut pos: Vec<RootVector> = seen.into_iter().filter(|r| r.is_nonneg()).collect();
    pos.sort_by(|a, b| (a.height(), &a.coords).cmp(&(b.height(), &b.coords)));
    Ok(pos)
}

/// A Weyl group element: reduced word plus its matrix on the root lattice
/// (columns are the images of the simple roots).
#[derive(Clone)]
pub struct WeylElement {
    pub word: Vec<usize>,
    columns: Vec<RootVector>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            columns: (0..rank).map(|i| RootVector::simple(rank, i)).collect(),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i64 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Apply the linear action to any lattice vector.
    pub fn apply(&self, alpha: &RootVector) -> RootVector {
        let rank = self.columns.len();
        let mut acc = RootVector::zero(rank);
        for (j, &k) in alpha.coords.iter().enumerate() {
            if k != 0 {
                acc = acc.add(&self.columns[j].scale(k));
            }
        }
        acc
    }

    /// Right multiplication by a simple reflection: `w * sigma_i`.
    pub fn mul_right_simple(&self, rs: &RootSystem, i: usize) -> WeylElement {
        let mut word = self.word.clone();
        word.push(i);
        let columns = (0..rs.rank)
            .map(|j| self.apply(&rs.reflect(i, &RootVector::simple(rs.rank, j))))
            .collect();
        WeylElement { word, columns }
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        WeylElement { word, columns }
    }

    /// The inverse (reversed word; generators are involutions).
    pub fn inverse(&self, rs: &RootSystem) -> WeylElement {
        let mut w = WeylElement::identity(rs.rank);
        for &i in self.word.iter().rev() {
            w = w.mul_right_simple(rs, i);
        }
        w
    }

    /// Build from an arbitrary word (not necessarily reduced).
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> WeylElement {
        let mut w = WeylElement::identity(rs.rank);
        for &i in word {
            w = w.mul_right_simple(rs, i);
        }
        w
    }

    pub fn matrix_key(&self) -> Vec<i64> {
        let mut key = Vec::with_capacity(self.columns.len() * self.columns.len());
        for c in &self.columns {
            key.extend_from_slice(&c.coords);
        }
        key
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// The full Weyl group in breadth-first order (words are reduced because
/// discovery is by length). `parent[k]` records the BFS edge
/// `elements[k] = elements[parent.0] * sigma_{parent.1}`.
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylGroup {
    pub fn enumerate(rs: &RootSystem, cap: u64) -> Result<WeylGroup> {
        let order = rs.weyl_order();
        if order > cap as u128 {
            return Err(Error::WeylCapExceeded { order, cap });
        }
        let mut elements = vec![WeylElement::identity(rs.rank)];
        let mut parent = vec![None];
        let mut index = HashMap::new();
        index.insert(elements[0].matrix_key(), 0usize);
        let mut head = 0;
        while head < elements.len() {
            for i in 0..rs.rank {
                let next = elements[head].mul_right_simple(rs, i);
                let key = next.matrix_key();
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                    e.insert(elements.len());
                    elements.push(next);
                    parent.push(Some((head, i)));
                }
            }
            head += 1;
        }
        if elements.len() as u128 != order {
            return Err(Error::Certification("Weyl enumeration count mismatch"));
        }
        Ok(WeylGroup { elements, parent, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn find(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.matrix_key()).copied()
    }
}

/// `Phi(w) = { alpha in Phi+ : w(alpha) in Phi- }`.
pub fn phi_set(rs: &RootSystem, w: &WeylElement) -> Vec<RootVector> {
    rs.positive_roots
        .iter()
        .filter(|alpha| w.apply(alpha).is_nonpos())
        .cloned()
        .collect()
}

/// `rho - w^{ -1} rho = sum over Phi(w)`, integral by construction.
pub fn rho_minus_w_inv_rho(rs: &RootSystem, w: &WeylElement) -> RootVector {
    let mut acc = RootVector::zero(rs.rank);
    for alpha in phi_set(rs, w) {
        acc = acc.add(&alpha);
    }
    acc
}

/// `rho - w rho = -w(rho - w^{-1} rho)`.
pub fn rho_minus_w_rho(rs: &RootSystem, w: &WeylElement) -> RootVector {
    w.apply(&rho_minus_w_inv_rho(rs, w)).neg()
}

/// Every generator in the reduced word lies in `Supp(rho - w rho)`
/// (the checkable face of the subgroup statement).
pub fn support_subgroup_check(rs: &RootSystem, w: &WeylElement) -> bool {
    let supp = rho_minus_w_rho(rs, w).support();
    w.word.iter().all(|i| supp.contains(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts() {
        assert_eq!(RootSystem::build(Family::A, 2).unwrap().positive_roots.len(), 3);
        assert_eq!(RootSystem::build(Family::D, 4).unwrap().positive_roots.len(), 12);
        assert_eq!(RootSystem::build(Family::A, 1).unwrap().positive_roots.len(), 1);
        assert_eq!(RootSystem::build(Family::E, 6).unwrap().positive_roots.len(), 36);
    }

    #[test]
    fn a2_positive_roots_explicit() {
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let coords: Vec<Vec<i64>> = rs.positive_roots.iter().map(|r| r.coords.clone()).collect();
        assert!(coords.contains(&vec![1, 0]));
        assert!(coords.contains(&vec![0, 1]));
        assert!(coords.contains(&vec![1, 1]));
    }

    #[test]
    fn a1_has_no_adjacency() {
        let rs = RootSystem::build(Family::A, 1).unwrap();
        assert!(rs.neighbors(0).is_empty());
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(RootSystem::build(Family::D, 3).is_err());
        assert!(RootSystem::build(Family::E, 9).is_err());
        assert!(RootSystem::build(Family::A, 0).is_err());
    }

    #[test]
    fn two_rho_values() {
        // A2: 2 rho = 2(alpha1 + alpha2)
        let rs = RootSystem::build(Family::A, 2).unwrap();
        assert_eq!(rs.two_rho().coords, vec![2, 2]);
        // A1: 2 rho = alpha1
        let rs = RootSystem::build(Family::A, 1).unwrap();
        assert_eq!(rs.two_rho().coords, vec![1]);
        // A3: 2 rho = 3 alpha1 + 4 alpha2 + 3 alpha3 (not halvable integrally)
        let rs = RootSystem::build(Family::A, 3).unwrap();
        assert_eq!(rs.two_rho().coords, vec![3, 4, 3]);
    }

    #[test]
    fn weyl_group_sizes() {
        let a2 = RootSystem::build(Family::A, 2).unwrap();
        assert_eq!(WeylGroup::enumerate(&a2, 1_000_000).unwrap().len(), 6);
        let d4 = RootSystem::build(Family::D, 4).unwrap();
        assert_eq!(WeylGroup::enumerate(&d4, 1_000_000).unwrap().len(), 192);
        let a4 = RootSystem::build(Family::A, 4).unwrap();
        assert_eq!(WeylGroup::enumerate(&a4, 1_000_000).unwrap().len(), 120);
    }

    #[test]
    fn cap_exceeded_names_the_order() {
        let e8 = RootSystem::build(Family::E, 8).unwrap();
        match WeylGroup::enumerate(&e8, 1_000_000) {
            Err(Error::WeylCapExceeded { order, .. }) => assert_eq!(order, 696_729_600),
            other => panic!("expected cap error, got {:?}", other.map(|g| g.len())),
        }
    }

    #[test]
    fn simple_reflection_action() {
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let s1 = WeylElement::from_word(&rs, &[0]);
        let a1 = RootVector::simple(2, 0);
        let a2 = RootVector::simple(2, 1);
        assert_eq!(s1.apply(&a1), a1.neg());
        assert_eq!(s1.apply(&a2), a1.add(&a2));
        let w0 = WeylElement::from_word(&rs, &[0, 1, 0]);
        assert_eq!(w0.apply(&a1), a2.neg());
    }

    #[test]
    fn phi_set_examples() {
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let id = WeylElement::identity(2);
        assert!(phi_set(&rs, &id).is_empty());
        let s1 = WeylElement::from_word(&rs, &[0]);
        assert_eq!(phi_set(&rs, &s1), vec![RootVector::simple(2, 0)]);
        let w0 = WeylElement::from_word(&rs, &[0, 1, 0]);
        assert_eq!(phi_set(&rs, &w0).len(), 3);
    }

    #[test]
    fn word_lengths_match_phi_cardinality() {
        let rs = RootSystem::build(Family::A, 3).unwrap();
        let group = WeylGroup::enumerate(&rs, 1_000_000).unwrap();
        for w in &group.elements {
            assert_eq!(phi_set(&rs, w).len(), w.length());
        }
    }

    #[test]
    fn rho_difference_identity_exhaustive() {
        // rho - w rho = sum over Phi(w^{-1}), checked against an
        // independently computed inverse.
        for (fam, rank) in [(Family::A, 2), (Family::A, 3), (Family::D, 4)] {
            let rs = RootSystem::build(fam, rank).unwrap();
            let group = WeylGroup::enumerate(&rs, 1_000_000).unwrap();
            let two_rho = rs.two_rho();
            for w in &group.elements {
                let winv = w.inverse(&rs);
                let mut sum = RootVector::zero(rs.rank);
                for alpha in phi_set(&rs, &winv) {
                    sum = sum.add(&alpha);
                }
                // doubled comparison keeps everything integral
                assert_eq!(two_rho.sub(&w.apply(&two_rho)), sum.scale(2));
            }
        }
    }

    #[test]
    fn generator_relations_fix_positive_roots() {
        let rs = RootSystem::build(Family::A, 3).unwrap();
        for i in 0..rs.rank {
            for j in 0..rs.rank {
                let r = if i == j {
                    1
                } else if rs.adjacent(i, j) {
                    3
                } else {
                    2
                };
                let mut word = Vec::new();
                for _ in 0..r {
                    word.push(i);
                    word.push(j);
                }
                let w = WeylElement::from_word(&rs, &word);
                for alpha in &rs.positive_roots {
                    assert_eq!(&w.apply(alpha), alpha);
                }
            }
        }
    }

    #[test]
    fn support_subgroup_exhaustive_a3() {
        let rs = RootSystem::build(Family::A, 3).unwrap();
        let group = WeylGroup::enumerate(&rs, 1_000_000).unwrap();
        assert_eq!(group.len(), 24);
        for w in &group.elements {
            assert!(support_subgroup_check(&rs, w));
        }
    }

    #[test]
    fn reduced_word_independence() {
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let a = WeylElement::from_word(&rs, &[0, 1, 0]);
        let b = WeylElement::from_word(&rs, &[1, 0, 1]);
        assert_eq!(a.matrix_key(), b.matrix_key());
    }
}
