use crate::atom::{Atom, AtomKey};
use crate::error::{check_dim, Error, Result};
use crate::Point;

/// The Birkhoff polytope of `n × n` doubly stochastic matrices (row-major coordinates).
#[derive(Clone, Debug)]
pub struct Birkhoff {
    n: usize,
}

impl Birkhoff {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Birkhoff polytope needs n >= 1".into()));
        }
        Ok(Birkhoff { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn permutation_atom(&self, perm: Vec<usize>) -> Atom {
        let n = self.n;
        let entries = perm.iter().enumerate().map(|(i, &j)| (i * n + j, 1.0)).collect();
        Atom::new(AtomKey::Permutation(perm), n * n, entries)
    }

    pub fn identity(&self) -> Atom {
        self.permutation_atom((0..self.n).collect())
    }

    pub fn lmo(&self, c: &Point) -> Result<Atom> {
        check_dim(self.dim(), c.len())?;
        let n = self.n;
        let cost: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| c[i * n + j]).collect()).collect();
        Ok(self.permutation_atom(assignment(&cost)))
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        let n = self.n;
        if x.iter().any(|&v| v < -tol) {
            return false;
        }
        (0..n).all(|i| {
            let row: f64 = (0..n).map(|j| x[i * n + j]).sum();
            let col: f64 = (0..n).map(|j| x[j * n + i]).sum();
            (row - 1.0).abs() <= tol && (col - 1.0).abs() <= tol
        })
    }

    pub fn diameter(&self) -> f64 {
        if self.n >= 2 {
            (2.0 * self.n as f64).sqrt()
        } else {
            0.0
        }
    }
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method with
/// potentials, O(n³)). Returns `perm` with row `i` assigned to column `perm[i]`.
pub fn assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));

    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent exact assignment by dynamic programming over column subsets.
    fn assignment_dp(cost: &[Vec<f64>]) -> f64 {
        let n = cost.len();
        let mut best = vec![f64::INFINITY; 1 << n];
        best[0] = 0.0;
        for mask in 0..(1usize << n) {
            let row = mask.count_ones() as usize;
            if row >= n || best[mask].is_infinite() {
                continue;
            }
            for (j, &c) in cost[row].iter().enumerate() {
                if mask >> j & 1 == 0 {
                    let next = mask | 1 << j;
                    best[next] = best[next].min(best[mask] + c);
                }
            }
        }
        best[(1 << n) - 1]
    }

    #[test]
    fn matches_subset_dp_up_to_twelve() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=12 {
            for _ in 0..5 {
                let cost: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.random_range(-5.0..5.0)).collect())
                    .collect();
                let perm = assignment(&cost);
                let mut seen = vec![false; n];
                for &j in &perm {
                    assert!(!seen[j]);
                    seen[j] = true;
                }
                let val: f64 = (0..n).map(|i| cost[i][perm[i]]).sum();
                assert!((val - assignment_dp(&cost)).abs() < 1e-9, "n = {n}");
            }
        }
    }

    #[test]
    fn identity_is_doubly_stochastic() {
        let b = Birkhoff::new(4).unwrap();
        assert!(b.contains(&b.identity().to_dense(), 0.0));
    }
}
