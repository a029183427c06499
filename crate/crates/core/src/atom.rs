use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::Point;

/// Exact structural identity of a polytope vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKey {
    /// Unit vector `e_i` of the probability simplex.
    Coordinate(usize),
    /// `±tau * e_i` of an l1-ball.
    SignedCoordinate { index: usize, negative: bool },
    /// Cube corner, listed by the sorted coordinates equal to one.
    Corner(Vec<usize>),
    /// Permutation matrix; `perm[row] = column`.
    Permutation(Vec<usize>),
    /// Source-sink path, listed by arc indices in path order.
    Path(Vec<usize>),
}

#[derive(Debug)]
struct AtomData {
    key: AtomKey,
    dim: usize,
    entries: Vec<(usize, f64)>,
}

/// A vertex of a feasible region: a structural key plus a sparse coordinate view.
///
/// Equality and hashing go through the key only. Cloning is cheap.
#[derive(Clone)]
pub struct Atom(Arc<AtomData>);

impl Atom {
    /// Builds an atom from its nonzero entries. Entries must have distinct,
    /// in-range indices; zero values are dropped.
    pub fn new(key: AtomKey, dim: usize, mut entries: Vec<(usize, f64)>) -> Self {
        entries.retain(|&(_, v)| v != 0.0);
        entries.sort_by_key(|&(i, _)| i);
        debug_assert!(entries.iter().all(|&(i, _)| i < dim));
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Atom(Arc::new(AtomData { key, dim, entries }))
    }

    pub fn key(&self) -> &AtomKey {
        &self.0.key
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Nonzero coordinates, sorted by index.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.0.entries
    }

    pub fn dot(&self, c: &Point) -> f64 {
        self.0.entries.iter().map(|&(i, v)| c[i] * v).sum()
    }

    /// `target += weight * self`.
    pub fn add_scaled_to(&self, target: &mut Point, weight: f64) {
        for &(i, v) in &self.0.entries {
            target[i] += weight * v;
        }
    }

    pub fn to_dense(&self) -> Point {
        let mut out = Point::zeros(self.0.dim);
        self.add_scaled_to(&mut out, 1.0);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.entries.iter().fold(0.0, |m, &(_, v)| m.max(v.abs()))
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.0.key == other.0.key
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state);
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({:?})", self.0.key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_by_key() {
        let a = Atom::new(AtomKey::Coordinate(1), 3, vec![(1, 1.0)]);
        let b = Atom::new(AtomKey::Coordinate(1), 3, vec![(1, 1.0)]);
        let c = Atom::new(AtomKey::Coordinate(2), 3, vec![(2, 1.0)]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn dense_view_and_dot() {
        let a = Atom::new(AtomKey::Corner(vec![0, 2]), 3, vec![(2, 1.0), (0, 1.0)]);
        assert_eq!(a.to_dense(), Point::from_vec(vec![1.0, 0.0, 1.0]));
        assert_eq!(a.dot(&Point::from_vec(vec![2.0, 5.0, -1.0])), 1.0);
        assert_eq!(a.entries(), &[(0, 1.0), (2, 1.0)]);
    }
}
