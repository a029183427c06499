//! Seeded instance generators for the benchmark problem families.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` so instances are
//! bit-reproducible across platforms.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::QuadraticObjective;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::regions::{DagPath, FeasibleRegion, Region};
use crate::Point;

/// Feasible region of a structured regression instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    Simplex {
        k: usize,
    },
    Cube {
        n: usize,
    },
    L1Ball {
        n: usize,
        tau: f64,
    },
    Birkhoff {
        n: usize,
    },
    /// Synthetic layered DAG, drawn from the instance seed.
    DagPath {
        layers: usize,
        width: usize,
        arc_prob: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `min ‖Ax - b‖²` over the unit ℓ1-ball. `b = scale·A x₀` with `‖x₀‖₁ = 1` and
    /// `nnz` nonzeros, so the planted minimizer `scale·x₀` lies outside when `scale > 1`.
    Lasso { m: usize, n: usize, nnz: usize, scale: f64 },
    /// `min ‖y - Φx‖²` over `‖x‖₁ <= τ` with sparse `Φ` of the given density,
    /// `y = Φx₀ + σ·noise`. Without `tau`, `τ = ‖x₀‖₁ / 2`.
    SignalRecovery {
        m: usize,
        n: usize,
        density: f64,
        sigma: f64,
        tau: Option<f64>,
    },
    /// `min ‖Ax - b‖²` over a polytope, `b = A x_t + 0.01·noise` for a target `x_t`
    /// outside the region.
    StructuredRegression { region: RegionSpec, m: usize },
    /// Strongly convex `‖Ax - b‖²` over `Δ^k` whose unconstrained minimizer has a
    /// negative coordinate.
    SimplexQuadratic { k: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        InstanceSpec { family, seed }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub objective: QuadraticObjective,
    pub region: Region,
    pub start: Atom,
    /// The planted unconstrained minimizer, when the family has one.
    pub planted_minimizer: Option<Point>,
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        z * scale
    })
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Point {
    Point::from_fn(n, |_, _| StandardNormal.sample(rng))
}

fn sparse_vector(rng: &mut ChaCha8Rng, n: usize, nnz: usize) -> Point {
    let mut x = Point::zeros(n);
    for i in sample(rng, n, nnz.min(n)).into_iter() {
        let mut z: f64 = StandardNormal.sample(rng);
        if z == 0.0 {
            z = 1.0;
        }
        x[i] = z;
    }
    x
}

fn build_region(spec: &RegionSpec, rng: &mut ChaCha8Rng) -> Result<Region> {
    match *spec {
        RegionSpec::Simplex { k } => Region::simplex(k),
        RegionSpec::Cube { n } => Region::cube(n),
        RegionSpec::L1Ball { n, tau } => Region::l1_ball(n, tau),
        RegionSpec::Birkhoff { n } => Region::birkhoff(n),
        RegionSpec::DagPath {
            layers,
            width,
            arc_prob,
        } => Ok(Region::DagPath(DagPath::layered(layers, width, arc_prob, rng)?)),
    }
}

/// Builds the objective, region and start vertex for `spec`.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let invalid = |m: &str| Err(Error::InvalidInput(m.to_string()));
    match spec.family {
        Family::Lasso { m, n, nnz, scale } => {
            if m == 0 || n == 0 || nnz == 0 || nnz > n || !(scale > 0.0) {
                return invalid("lasso needs m, n >= 1, 1 <= nnz <= n and scale > 0");
            }
            let a = gaussian_matrix(&mut rng, m, n, 1.0 / (m as f64).sqrt());
            let mut x0 = sparse_vector(&mut rng, n, nnz);
            x0 /= x0.lp_norm(1);
            let planted = x0 * scale;
            let b = &a * &planted;
            let region = Region::l1_ball(n, 1.0)?;
            let start = region.start_vertex();
            Ok(Instance {
                objective: QuadraticObjective::new(a, b)?,
                region,
                start,
                planted_minimizer: Some(planted),
            })
        }
        Family::SignalRecovery {
            m,
            n,
            density,
            sigma,
            tau,
        } => {
            if m == 0 || n == 0 || !(density > 0.0 && density <= 1.0) || !(sigma >= 0.0) {
                return invalid("signal recovery needs m, n >= 1, density in (0, 1] and sigma >= 0");
            }
            let scale = 1.0 / (density * m as f64).sqrt();
            let phi = DMatrix::from_fn(m, n, |_, _| {
                if rng.random_bool(density) {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * scale
                } else {
                    0.0
                }
            });
            let nnz = ((density * n as f64).ceil() as usize).clamp(1, n);
            let x0 = sparse_vector(&mut rng, n, nnz);
            let noise = gaussian_vector(&mut rng, m) * sigma;
            let y = &phi * &x0 + noise;
            let tau = match tau {
                Some(t) if t > 0.0 => t,
                Some(_) => return invalid("tau must be positive"),
                None => x0.lp_norm(1) / 2.0,
            };
            let region = Region::l1_ball(n, tau)?;
            let start = region.start_vertex();
            Ok(Instance {
                objective: QuadraticObjective::new(phi, y)?,
                region,
                start,
                planted_minimizer: Some(x0),
            })
        }
        Family::StructuredRegression { ref region, m } => {
            if m == 0 {
                return invalid("structured regression needs m >= 1");
            }
            let region = build_region(region, &mut rng)?;
            let dim = region.dim();
            let a = gaussian_matrix(&mut rng, m, dim, 1.0 / (m as f64).sqrt());
            // Target: a random mix of a few vertices pushed out of the region.
            let mut inside = Point::zeros(dim);
            let mix = 5;
            for _ in 0..mix {
                let c = gaussian_vector(&mut rng, dim);
                region.lmo(&c)?.add_scaled_to(&mut inside, 1.0 / mix as f64);
            }
            let mut target;
            let mut push = 0.5;
            loop {
                let z = gaussian_vector(&mut rng, dim);
                let z = &z * (push * region.diameter().max(1.0) / z.norm().max(f64::MIN_POSITIVE));
                target = &inside + z;
                if !region.contains(&target, 1e-6) {
                    break;
                }
                push *= 2.0;
            }
            let noise = gaussian_vector(&mut rng, m) * 0.01;
            let b = &a * &target + noise;
            let start = region.start_vertex();
            Ok(Instance {
                objective: QuadraticObjective::new(a, b)?,
                region,
                start,
                planted_minimizer: Some(target),
            })
        }
        Family::SimplexQuadratic { k } => {
            if k < 2 {
                return invalid("simplex quadratic needs k >= 2");
            }
            let kf = k as f64;
            let a = DMatrix::identity(k, k) + gaussian_matrix(&mut rng, k, k, 0.5 / kf.sqrt());
            let mut xstar = Point::from_element(k, 1.0 / kf) + gaussian_vector(&mut rng, k) * (0.5 / kf.sqrt());
            xstar[0] = -(xstar[0].abs() + 0.1);
            let b = &a * &xstar;
            let region = Region::simplex(k)?;
            let start = region.start_vertex();
            Ok(Instance {
                objective: QuadraticObjective::new(a, b)?,
                region,
                start,
                planted_minimizer: Some(xstar),
            })
        }
    }
}
