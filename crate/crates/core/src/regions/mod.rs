//! Feasible regions with exact linear minimization oracles.

mod birkhoff;
mod dag;
mod hull;

pub use birkhoff::{assignment, Birkhoff};
pub use dag::DagPath;
pub use hull::AtomHull;

use crate::atom::{Atom, AtomKey};
use crate::error::{check_dim, Error, Result};
use crate::Point;

/// A polytope given by its linear minimization oracle.
pub trait FeasibleRegion: Send + Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// A vertex minimizing `⟨c, v⟩`.
    fn lmo(&self, c: &Point) -> Result<Atom>;

    /// Whether `x` satisfies the defining constraints within `tol`.
    fn contains(&self, x: &Point, tol: f64) -> bool;

    /// ℓ2 diameter (an upper bound where noted by the implementation).
    fn diameter(&self) -> f64;

    /// Dimension of the affine hull.
    fn affine_dim(&self) -> usize;

    /// Deterministic starting vertex.
    fn start_vertex(&self) -> Atom;
}

/// The shipped polytopes.
#[derive(Clone, Debug)]
pub enum Region {
    /// Probability simplex `Δ^k`.
    Simplex { k: usize },
    /// Unit cube `[0, 1]ⁿ`.
    Cube { n: usize },
    /// `{x : ‖x‖₁ <= τ}`.
    L1Ball { n: usize, tau: f64 },
    /// Doubly stochastic `n × n` matrices, stored row-major.
    Birkhoff(Birkhoff),
    /// Convex hull of source-sink path incidence vectors of a DAG.
    DagPath(DagPath),
}

impl Region {
    pub fn simplex(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("simplex needs k >= 1".into()));
        }
        Ok(Region::Simplex { k })
    }

    pub fn cube(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cube needs n >= 1".into()));
        }
        Ok(Region::Cube { n })
    }

    pub fn l1_ball(n: usize, tau: f64) -> Result<Self> {
        if n == 0 || !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidInput("l1-ball needs n >= 1 and tau > 0".into()));
        }
        Ok(Region::L1Ball { n, tau })
    }

    pub fn birkhoff(n: usize) -> Result<Self> {
        Ok(Region::Birkhoff(Birkhoff::new(n)?))
    }

    pub fn name(&self) -> String {
        match self {
            Region::Simplex { k } => format!("simplex({k})"),
            Region::Cube { n } => format!("cube({n})"),
            Region::L1Ball { n, tau } => format!("l1ball({n}, {tau})"),
            Region::Birkhoff(b) => format!("birkhoff({})", b.n()),
            Region::DagPath(d) => format!("dagpath({} nodes, {} arcs)", d.nodes(), d.arcs().len()),
        }
    }
}

fn unit(i: usize, n: usize) -> Atom {
    Atom::new(AtomKey::Coordinate(i), n, vec![(i, 1.0)])
}

fn signed_unit(i: usize, n: usize, tau: f64, negative: bool) -> Atom {
    let v = if negative { -tau } else { tau };
    Atom::new(AtomKey::SignedCoordinate { index: i, negative }, n, vec![(i, v)])
}

fn corner(bits: Vec<usize>, n: usize) -> Atom {
    let entries = bits.iter().map(|&i| (i, 1.0)).collect();
    Atom::new(AtomKey::Corner(bits), n, entries)
}

impl FeasibleRegion for Region {
    fn dim(&self) -> usize {
        match self {
            Region::Simplex { k } => *k,
            Region::Cube { n } | Region::L1Ball { n, .. } => *n,
            Region::Birkhoff(b) => b.dim(),
            Region::DagPath(d) => d.arcs().len(),
        }
    }

    fn lmo(&self, c: &Point) -> Result<Atom> {
        check_dim(self.dim(), c.len())?;
        match self {
            Region::Simplex { k } => {
                let mut best = 0;
                for i in 1..*k {
                    if c[i] < c[best] {
                        best = i;
                    }
                }
                Ok(unit(best, *k))
            }
            Region::Cube { n } => Ok(corner((0..*n).filter(|&i| c[i] < 0.0).collect(), *n)),
            Region::L1Ball { n, tau } => {
                let mut best = 0;
                for i in 1..*n {
                    if c[i].abs() > c[best].abs() {
                        best = i;
                    }
                }
                Ok(signed_unit(best, *n, *tau, c[best] >= 0.0))
            }
            Region::Birkhoff(b) => b.lmo(c),
            Region::DagPath(d) => d.lmo(c),
        }
    }

    fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            Region::Simplex { .. } => x.iter().all(|&v| v >= -tol) && (x.sum() - 1.0).abs() <= tol,
            Region::Cube { .. } => x.iter().all(|&v| v >= -tol && v <= 1.0 + tol),
            Region::L1Ball { tau, .. } => x.lp_norm(1) <= tau + tol,
            Region::Birkhoff(b) => b.contains(x, tol),
            Region::DagPath(d) => d.contains(x, tol),
        }
    }

    fn diameter(&self) -> f64 {
        match self {
            Region::Simplex { k } => {
                if *k >= 2 {
                    2f64.sqrt()
                } else {
                    0.0
                }
            }
            Region::Cube { n } => (*n as f64).sqrt(),
            Region::L1Ball { tau, .. } => 2.0 * tau,
            Region::Birkhoff(b) => b.diameter(),
            Region::DagPath(d) => d.diameter_bound(),
        }
    }

    fn affine_dim(&self) -> usize {
        match self {
            Region::Simplex { k } => k - 1,
            Region::Cube { n } | Region::L1Ball { n, .. } => *n,
            Region::Birkhoff(b) => (b.n() - 1).pow(2),
            Region::DagPath(d) => (d.arcs().len() + 1).saturating_sub(d.nodes()),
        }
    }

    fn start_vertex(&self) -> Atom {
        match self {
            Region::Simplex { k } => unit(0, *k),
            Region::Cube { n } => corner(vec![0], *n),
            Region::L1Ball { n, tau } => signed_unit(0, *n, *tau, false),
            Region::Birkhoff(b) => b.identity(),
            Region::DagPath(d) => d.lmo(&Point::zeros(d.arcs().len())).expect("validated DAG has a path"),
        }
    }
}
