//! Independent numerical checks of gaps, curvature and smoothness bounds.
//!
//! Curvature and simplicial curvature are sampled, so they are lower bounds on the
//! true constants; report names carry a `sampled_` prefix to make that explicit.

use std::io::Write;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atom::Atom;
use crate::error::{check_dim, Error, Result};
use crate::objectives::{Objective, QuadraticObjective};
use crate::regions::FeasibleRegion;
use crate::Point;

/// Outcome of one inequality check `lhs <= rhs (+ tolerance)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs - lhs`; negative when violated.
    pub slack: f64,
}

impl BoundReport {
    /// Satisfied when `lhs <= rhs + tol`.
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            satisfied: lhs <= rhs + tol,
            slack: rhs - lhs,
        }
    }
}

/// Writes one JSON object per line.
pub fn write_json_lines<W: Write>(mut out: W, reports: &[BoundReport]) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `max_v ⟨∇f(x), x - v⟩` via one exact LMO call, clamped at zero.
pub fn dual_gap(obj: &dyn Objective, region: &dyn FeasibleRegion, x: &Point) -> Result<f64> {
    check_dim(region.dim(), x.len())?;
    let g = obj.gradient(x);
    let v = region.lmo(&g)?;
    Ok((g.dot(x) - v.dot(&g)).max(0.0))
}

/// Random point of `region`: a random convex combination of a few LMO vertices.
pub fn random_point(region: &dyn FeasibleRegion, rng: &mut ChaCha8Rng, vertices: usize) -> Result<Point> {
    let vs = random_vertices(region, rng, vertices.max(1))?;
    let w: Vec<f64> = vs.iter().map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut x = Point::zeros(region.dim());
    for (v, wi) in vs.iter().zip(&w) {
        v.add_scaled_to(&mut x, wi / total);
    }
    Ok(x)
}

/// Vertices from LMO calls on Gaussian-like random directions (duplicates removed).
pub fn random_vertices(region: &dyn FeasibleRegion, rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Atom>> {
    let mut out: Vec<Atom> = Vec::with_capacity(count);
    for _ in 0..count {
        let c = Point::from_fn(region.dim(), |_, _| rng.random_range(-1.0..1.0));
        let v = region.lmo(&c)?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Sampled curvature: the maximum over `samples` random `(x, y, γ)` of
/// `2[f(x + γ(y - x)) - f(x) - γ⟨∇f(x), y - x⟩] / γ²`. A lower bound on `C`.
pub fn curvature_estimate(
    obj: &dyn Objective,
    region: &dyn FeasibleRegion,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidInput(
            "curvature estimate needs at least one sample".into(),
        ));
    }
    let mut best = 0.0f64;
    for _ in 0..samples {
        let x = random_point(region, rng, 3)?;
        // Far endpoints give the largest ratios, so y is a vertex.
        let c = Point::from_fn(region.dim(), |_, _| rng.random_range(-1.0..1.0));
        let y = region.lmo(&c)?.to_dense();
        let gamma: f64 = rng.random_range(0.05..=1.0);
        let d = &y - &x;
        let g = obj.gradient(&x);
        let fx = obj.value(&x);
        let val = 2.0 * (obj.value(&(&x + &d * gamma)) - fx - gamma * g.dot(&d)) / (gamma * gamma);
        best = best.max(val);
    }
    Ok(best)
}

/// One sampled vertex set and its smoothness data.
#[derive(Clone, Debug)]
pub struct SimplicialTrial {
    pub size: usize,
    pub restricted_smoothness: f64,
    /// `L·D²·|S|/4`.
    pub cap: f64,
}

/// Sampled simplicial curvature: the maximum restricted smoothness `L_{f_S}` over
/// `trials` random vertex sets with `2 <= |S| <= 2·dim P`. Each trial carries the
/// corresponding `L·D²·|S|/4` cap.
pub fn simplicial_curvature_estimate(
    obj: &QuadraticObjective,
    region: &dyn FeasibleRegion,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<SimplicialTrial>)> {
    if trials == 0 {
        return Err(Error::InvalidInput(
            "simplicial curvature estimate needs at least one trial".into(),
        ));
    }
    let max_size = (2 * region.affine_dim()).max(2);
    let l = obj.smoothness();
    let d = region.diameter();
    let mut best = 0.0f64;
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let want = rng.random_range(2..=max_size);
        let atoms = random_vertices(region, rng, want)?;
        let ls = obj.restricted_smoothness(&atoms)?;
        best = best.max(ls);
        out.push(SimplicialTrial {
            size: atoms.len(),
            restricted_smoothness: ls,
            cap: l * d * d * atoms.len() as f64 / 4.0,
        });
    }
    Ok((best, out))
}

/// `L_{f_S} <= L·D²·|S|/4`, at relative tolerance `1e-9`.
pub fn restricted_smoothness_bound(
    obj: &QuadraticObjective,
    region: &dyn FeasibleRegion,
    atoms: &[Atom],
) -> Result<BoundReport> {
    let ls = obj.restricted_smoothness(atoms)?;
    let d = region.diameter();
    let cap = obj.smoothness() * d * d * atoms.len() as f64 / 4.0;
    Ok(BoundReport::new(
        "restricted_smoothness_cap",
        ls,
        cap,
        1e-9 * (1.0 + cap.abs()),
    ))
}

/// Lower bound `4α/k` on the geometric strong convexity over `Δ^k`.
pub fn simplex_strong_convexity_floor(alpha: f64, k: usize) -> Result<f64> {
    if !(alpha >= 0.0) || k < 2 {
        return Err(Error::InvalidInput("need alpha >= 0 and k >= 2".into()));
    }
    Ok(4.0 * alpha / k as f64)
}

/// Largest relative error between `∇f` and central differences at `points`.
/// Passes at `1e-5`.
pub fn gradient_check(obj: &dyn Objective, points: &[Point]) -> BoundReport {
    let mut worst = 0.0f64;
    for x in points {
        let g = obj.gradient(x);
        let scale = 1.0 + g.amax();
        for i in 0..x.len() {
            let h = 1e-6 * (1.0 + x[i].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (obj.value(&xp) - obj.value(&xm)) / (2.0 * h);
            worst = worst.max((fd - g[i]).abs() / scale);
        }
    }
    BoundReport::new("gradient_finite_difference", worst, 1e-5, 0.0)
}

/// Random subset of `atoms` of the given size (order preserved).
pub fn random_subset(atoms: &[Atom], size: usize, rng: &mut ChaCha8Rng) -> Vec<Atom> {
    let mut idx: Vec<usize> = sample(rng, atoms.len(), size.min(atoms.len())).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| atoms[i].clone()).collect()
}
