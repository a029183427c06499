//! Active vertex sets: atoms with barycentric weights and the cached iterate.

use crate::atom::{Atom, AtomKey};
use crate::error::{check_dim, Error, Result};
use crate::Point;

/// Weights at or below this value are removed by [`ActiveSet::prune`].
pub const DROP_TOL: f64 = 1e-12;

const SUM_TOL: f64 = 1e-12;

/// Away and toward atoms of an active set for a given gradient.
#[derive(Clone, Debug)]
pub struct LocalExtremes {
    pub away_index: usize,
    pub toward_index: usize,
    pub away_value: f64,
    pub toward_value: f64,
}

impl LocalExtremes {
    /// `<g, v_away - v_toward>`, the local pairwise gap.
    pub fn local_gap(&self) -> f64 {
        self.away_value - self.toward_value
    }
}

/// Ordered list of distinct atoms `S`, weights `λ ∈ Δ^|S|` and `x = Σ λ_i v_i`.
#[derive(Clone, Debug)]
pub struct ActiveSet {
    atoms: Vec<Atom>,
    weights: Vec<f64>,
    iterate: Point,
}

impl ActiveSet {
    pub fn singleton(atom: Atom) -> Self {
        let iterate = atom.to_dense();
        ActiveSet {
            atoms: vec![atom],
            weights: vec![1.0],
            iterate,
        }
    }

    /// Validates and builds an active set. Weights are renormalized to sum one.
    pub fn new(atoms: Vec<Atom>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::DegenerateActiveSet("no atoms".into()));
        }
        check_dim(atoms.len(), weights.len())?;
        let dim = atoms[0].dim();
        for a in &atoms {
            check_dim(dim, a.dim())?;
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b == a) {
                return Err(Error::InvalidInput(format!("duplicate atom {:?}", a.key())));
            }
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
        }
        let mut set = ActiveSet {
            atoms,
            weights,
            iterate: Point::zeros(dim),
        };
        set.normalize()?;
        set.refresh();
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.iterate.len()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The cached iterate `x`.
    pub fn iterate(&self) -> &Point {
        &self.iterate
    }

    pub fn position(&self, key: &AtomKey) -> Option<usize> {
        self.atoms.iter().position(|a| a.key() == key)
    }

    /// Recomputes `Σ λ_i v_i` from scratch.
    pub fn iterate_of(&self) -> Point {
        combine(&self.atoms, &self.weights, self.dim())
    }

    /// Removes atoms with weight `<= tol` and renormalizes. Returns the number removed.
    pub fn prune(&mut self, tol: f64) -> Result<usize> {
        let before = self.atoms.len();
        if self.weights.iter().all(|&w| w <= tol) {
            return Err(Error::DegenerateActiveSet(format!(
                "all {before} weights are below {tol:e}"
            )));
        }
        let mut keep = self.weights.iter().map(|&w| w > tol);
        self.atoms.retain(|_| keep.next().unwrap());
        self.weights.retain(|&w| w > tol);
        self.normalize()?;
        self.refresh();
        Ok(before - self.atoms.len())
    }

    /// Maximizer and minimizer of `<gradient, v>` over the set. Ties go to the lowest index.
    pub fn local_extremes(&self, gradient: &Point) -> LocalExtremes {
        assert!(!self.atoms.is_empty(), "local_extremes on an empty active set");
        let mut ext = LocalExtremes {
            away_index: 0,
            toward_index: 0,
            away_value: f64::NEG_INFINITY,
            toward_value: f64::INFINITY,
        };
        for (i, a) in self.atoms.iter().enumerate() {
            let v = a.dot(gradient);
            if v > ext.away_value {
                ext.away_value = v;
                ext.away_index = i;
            }
            if v < ext.toward_value {
                ext.toward_value = v;
                ext.toward_index = i;
            }
        }
        ext
    }

    /// Replaces the weights (same order as the atoms), then prunes at [`DROP_TOL`].
    pub fn set_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        check_dim(self.atoms.len(), weights.len())?;
        self.weights = weights.into_iter().map(|w| w.max(0.0)).collect();
        self.prune(DROP_TOL)?;
        Ok(())
    }

    /// Frank-Wolfe move `x ← (1-γ)x + γv`. With `γ = 1` the set becomes `{v}`.
    pub fn fw_update(&mut self, atom: Atom, gamma: f64) -> Result<()> {
        check_dim(self.dim(), atom.dim())?;
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidInput(format!("step {gamma} outside [0, 1]")));
        }
        if gamma == 1.0 {
            *self = ActiveSet::singleton(atom);
            return Ok(());
        }
        for w in &mut self.weights {
            *w *= 1.0 - gamma;
        }
        match self.position(atom.key()) {
            Some(i) => self.weights[i] += gamma,
            None => {
                self.atoms.push(atom);
                self.weights.push(gamma);
            }
        }
        self.prune(DROP_TOL)?;
        Ok(())
    }

    /// Moves `mass` of weight from the atom at `away_index` onto `toward`.
    pub fn pairwise_update(&mut self, toward: Atom, away_index: usize, mass: f64) -> Result<()> {
        check_dim(self.dim(), toward.dim())?;
        let mass = mass.clamp(0.0, self.weights[away_index]);
        let toward_index = match self.position(toward.key()) {
            Some(i) => i,
            None => {
                self.atoms.push(toward);
                self.weights.push(0.0);
                self.atoms.len() - 1
            }
        };
        if toward_index == away_index {
            return Err(Error::InvalidInput("pairwise step between an atom and itself".into()));
        }
        self.weights[away_index] -= mass;
        self.weights[toward_index] += mass;
        self.prune(DROP_TOL)?;
        Ok(())
    }

    /// Away move `x ← (1+γ)x - γ v_away`, valid for `γ <= λ_a / (1 - λ_a)`.
    pub fn away_update(&mut self, away_index: usize, gamma: f64) -> Result<()> {
        let la = self.weights[away_index];
        let max = if la >= 1.0 { 0.0 } else { la / (1.0 - la) };
        let gamma = gamma.clamp(0.0, max);
        for w in &mut self.weights {
            *w *= 1.0 + gamma;
        }
        self.weights[away_index] -= gamma;
        if gamma == max {
            self.weights[away_index] = 0.0;
        }
        self.prune(DROP_TOL)?;
        Ok(())
    }

    /// Checks weight normalization, key uniqueness and iterate consistency.
    pub fn check_invariants(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::DegenerateActiveSet("no atoms".into()));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::DegenerateActiveSet("negative weight".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::DegenerateActiveSet(format!("weights sum to {sum}")));
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if self.atoms[..i].iter().any(|b| b == a) {
                return Err(Error::DegenerateActiveSet(format!("duplicate atom {:?}", a.key())));
            }
        }
        let fresh = self.iterate_of();
        let err = (&fresh - &self.iterate).amax();
        if err > 1e-9 * (1.0 + self.iterate.amax()) {
            return Err(Error::DegenerateActiveSet(format!("iterate drifted by {err:e}")));
        }
        Ok(())
    }

    fn normalize(&mut self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::DegenerateActiveSet("weights sum to zero".into()));
        }
        for w in &mut self.weights {
            *w /= sum;
        }
        Ok(())
    }

    fn refresh(&mut self) {
        self.iterate = combine(&self.atoms, &self.weights, self.dim());
    }
}

/// `Σ w_i a_i` for sparse atoms.
pub fn combine(atoms: &[Atom], weights: &[f64], dim: usize) -> Point {
    let mut x = Point::zeros(dim);
    for (a, &w) in atoms.iter().zip(weights) {
        a.add_scaled_to(&mut x, w);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(i: usize, n: usize) -> Atom {
        Atom::new(AtomKey::Coordinate(i), n, vec![(i, 1.0)])
    }

    fn corner(bits: &[usize], n: usize) -> Atom {
        Atom::new(
            AtomKey::Corner(bits.to_vec()),
            n,
            bits.iter().map(|&i| (i, 1.0)).collect(),
        )
    }

    #[test]
    fn iterate_of_examples() {
        let s = ActiveSet::singleton(e(0, 3));
        assert_eq!(s.iterate_of(), Point::from_vec(vec![1.0, 0.0, 0.0]));

        let s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        assert_eq!(s.iterate_of(), Point::from_vec(vec![0.5, 0.5]));

        // (1,0), (0,1), (0,0) as cube corners
        let s = ActiveSet::new(
            vec![corner(&[0], 2), corner(&[1], 2), corner(&[], 2)],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        let x = s.iterate_of();
        assert!((x[0] - 0.2).abs() < 1e-15 && (x[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn prune_examples() {
        let mut s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![1.0, 0.0]).unwrap();
        assert_eq!(s.prune(DROP_TOL).unwrap(), 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s.weights(), &[1.0]);

        let mut s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        assert_eq!(s.prune(DROP_TOL).unwrap(), 0);
        assert_eq!(s.weights(), &[0.5, 0.5]);

        let mut s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![1.0 - 1e-15, 1e-15]).unwrap();
        let before = s.iterate().clone();
        s.prune(1e-12).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.weights(), &[1.0]);
        assert!((s.iterate() - before).amax() <= 1e-15 + f64::EPSILON);
    }

    #[test]
    fn prune_all_below_tol_is_error() {
        let mut s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        assert!(s.prune(0.6).is_err());
    }

    #[test]
    fn local_extremes_examples() {
        let s = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        let ext = s.local_extremes(&Point::from_vec(vec![1.0, -1.0]));
        assert_eq!((ext.away_index, ext.toward_index), (0, 1));
        assert_eq!((ext.away_value, ext.toward_value), (1.0, -1.0));

        let s = ActiveSet::singleton(e(0, 2));
        let ext = s.local_extremes(&Point::from_vec(vec![3.0, -7.0]));
        assert_eq!((ext.away_index, ext.toward_index), (0, 0));
        assert_eq!(ext.local_gap(), 0.0);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let s = ActiveSet::new(vec![e(0, 3), e(1, 3), e(2, 3)], vec![0.2, 0.3, 0.5]).unwrap();
        let ext = s.local_extremes(&Point::from_vec(vec![1.0, 1.0, 1.0]));
        assert_eq!((ext.away_index, ext.toward_index), (0, 0));
    }

    #[test]
    fn fw_update_full_step_resets() {
        let mut s = ActiveSet::new(vec![e(0, 3), e(1, 3)], vec![0.5, 0.5]).unwrap();
        s.fw_update(e(2, 3), 1.0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.iterate(), &Point::from_vec(vec![0.0, 0.0, 1.0]));
    }

    #[test]
    fn duplicate_atoms_rejected() {
        assert!(ActiveSet::new(vec![e(0, 2), e(0, 2)], vec![0.5, 0.5]).is_err());
    }

    proptest! {
        #[test]
        fn local_extremes_match_exhaustive_scan(
            grad in prop::collection::vec(-10.0f64..10.0, 50),
            raw in prop::collection::vec(0.0f64..1.0, 1..50),
        ) {
            let n = 50;
            let atoms: Vec<Atom> = (0..raw.len()).map(|i| e(i, n)).collect();
            let weights: Vec<f64> = raw.iter().map(|w| w + 1e-3).collect();
            let s = ActiveSet::new(atoms, weights).unwrap();
            let g = Point::from_vec(grad);
            let ext = s.local_extremes(&g);
            let vals: Vec<f64> = s.atoms().iter().map(|a| a.to_dense().dot(&g)).collect();
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert_eq!(ext.away_value, max);
            prop_assert_eq!(ext.toward_value, min);
            prop_assert_eq!(ext.away_index, vals.iter().position(|&v| v == max).unwrap());
            prop_assert_eq!(ext.toward_index, vals.iter().position(|&v| v == min).unwrap());
        }

        #[test]
        fn prune_moves_iterate_by_at_most_bound(
            raw in prop::collection::vec(0.0f64..1.0, 2..20),
            tiny in prop::collection::vec(0.0f64..1e-12, 2..20),
        ) {
            let n = 20;
            let k = raw.len().min(tiny.len());
            let weights: Vec<f64> = (0..k)
                .map(|i| if i % 3 == 1 { tiny[i] } else { raw[i] + 0.01 })
                .collect();
            let atoms: Vec<Atom> = (0..k).map(|i| corner(&(0..=i).collect::<Vec<_>>(), n)).collect();
            let mut s = ActiveSet::new(atoms, weights).unwrap();
            let before = s.iterate().clone();
            s.prune(DROP_TOL).unwrap();
            s.check_invariants().unwrap();
            let moved = (s.iterate() - before).amax();
            prop_assert!(moved <= k as f64 * DROP_TOL * 1.0 + 1e-15);
        }
    }
}
