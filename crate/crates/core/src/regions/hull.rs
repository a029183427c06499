use super::FeasibleRegion;
use crate::atom::Atom;
use crate::error::{check_dim, Error, Result};
use crate::Point;

const MEMBERSHIP_BUDGET: usize = 5_000;

/// Convex hull of a finite atom list. The LMO is an exhaustive scan.
#[derive(Clone, Debug)]
pub struct AtomHull {
    atoms: Vec<Atom>,
    dim: usize,
}

impl AtomHull {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::InvalidInput("hull of an empty atom list".into()))?;
        let dim = first.dim();
        for a in &atoms {
            check_dim(dim, a.dim())?;
        }
        Ok(AtomHull { atoms, dim })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

impl FeasibleRegion for AtomHull {
    fn dim(&self) -> usize {
        self.dim
    }

    fn lmo(&self, c: &Point) -> Result<Atom> {
        check_dim(self.dim, c.len())?;
        let mut best = 0;
        let mut best_val = self.atoms[0].dot(c);
        for (i, a) in self.atoms.iter().enumerate().skip(1) {
            let v = a.dot(c);
            if v < best_val {
                best = i;
                best_val = v;
            }
        }
        Ok(self.atoms[best].clone())
    }

    /// Decides `dist(x, conv S) <= tol` with pairwise Frank-Wolfe on
    /// `min_λ ‖Vλ - x‖²`, stopping early once the duality gap certifies either side.
    fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let dense: Vec<Point> = self.atoms.iter().map(Atom::to_dense).collect();
        let k = dense.len();
        let mut lambda = vec![1.0 / k as f64; k];
        let target = tol * tol;
        for _ in 0..MEMBERSHIP_BUDGET {
            let mut r = -x.clone();
            for (v, &l) in dense.iter().zip(&lambda) {
                r.axpy(l, v, 1.0);
            }
            let f = r.norm_squared();
            if f <= target {
                return true;
            }
            let g: Vec<f64> = dense.iter().map(|v| 2.0 * v.dot(&r)).collect();
            let s = (0..k).min_by(|&i, &j| g[i].total_cmp(&g[j])).unwrap();
            let a = (0..k)
                .filter(|&i| lambda[i] > 0.0)
                .max_by(|&i, &j| g[i].total_cmp(&g[j]))
                .unwrap();
            let gap: f64 = lambda.iter().zip(&g).map(|(l, gi)| l * gi).sum::<f64>() - g[s];
            if f - gap > target {
                return false;
            }
            if s == a {
                break;
            }
            let u = &dense[s] - &dense[a];
            let uu = u.norm_squared();
            if uu == 0.0 {
                break;
            }
            let step = (-r.dot(&u) / uu).clamp(0.0, lambda[a]);
            if step == 0.0 {
                break;
            }
            lambda[a] -= step;
            lambda[s] += step;
        }
        let mut r = -x.clone();
        for (v, &l) in dense.iter().zip(&lambda) {
            r.axpy(l, v, 1.0);
        }
        r.norm_squared() <= target
    }

    fn diameter(&self) -> f64 {
        let dense: Vec<Point> = self.atoms.iter().map(Atom::to_dense).collect();
        let mut d: f64 = 0.0;
        for i in 0..dense.len() {
            for j in i + 1..dense.len() {
                d = d.max((&dense[i] - &dense[j]).norm());
            }
        }
        d
    }

    fn affine_dim(&self) -> usize {
        (self.atoms.len() - 1).min(self.dim)
    }

    fn start_vertex(&self) -> Atom {
        self.atoms[0].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::AtomKey;

    fn e(i: usize, n: usize) -> Atom {
        Atom::new(AtomKey::Coordinate(i), n, vec![(i, 1.0)])
    }

    #[test]
    fn scan_lmo_and_membership() {
        let h = AtomHull::new(vec![e(0, 3), e(2, 3)]).unwrap();
        let a = h.lmo(&Point::from_vec(vec![1.0, -5.0, 0.5])).unwrap();
        assert_eq!(a.key(), &AtomKey::Coordinate(2));
        assert!(h.contains(&Point::from_vec(vec![0.3, 0.0, 0.7]), 1e-9));
        assert!(!h.contains(&Point::from_vec(vec![0.3, 0.2, 0.5]), 1e-9));
        assert!((h.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.affine_dim(), 1);
    }
}
