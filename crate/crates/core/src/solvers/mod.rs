//! Solver drivers: BCG, stand-alone simplex gradient descent, Frank-Wolfe baselines,
//! and post-optimization.
//!
//! Every driver returns a [`RunResult`] whose trace has one [`IterationRecord`] per
//! iteration. Structural invariants are checked while the run progresses; failures are
//! collected in [`RunResult::violations`] rather than aborting the run.

mod baselines;
mod bcg;
mod post_opt;
mod standalone;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use baselines::{baseline, Baseline};
pub use bcg::bcg;
pub use post_opt::post_optimize;
pub use standalone::standalone_sigd;

use crate::active_set::ActiveSet;
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::regions::FeasibleRegion;
use crate::trace::{IterationRecord, StepKind};
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The gap estimate (or, for non-lazy solvers, the dual gap) reached the target.
    PhiBelowEps,
    MaxIter,
    TimeLimit,
}

/// State of the iterate right after a gap step (or at `t = 0`), kept so the
/// `dual gap <= 2Φ` certificate can be re-checked independently.
#[derive(Clone, Debug)]
pub struct GapCertificate {
    /// Iteration after which the state was captured (`0` for the start).
    pub iter: usize,
    pub phi: f64,
    pub iterate: Point,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_set: ActiveSet,
    pub trace: Vec<IterationRecord>,
    pub termination: Termination,
    pub f0: f64,
    pub phi0: f64,
    pub phi_final: f64,
    /// Exact dual gap at the final iterate over the region the solver ran on.
    pub final_dual_gap: f64,
    pub certificates: Vec<GapCertificate>,
    pub violations: Vec<String>,
}

impl RunResult {
    pub fn final_value(&self, obj: &dyn Objective) -> f64 {
        obj.value(self.final_set.iterate())
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.trace.iter().filter(|r| r.step == kind).count()
    }

    pub fn lmo_calls(&self) -> u64 {
        self.trace.last().map_or(0, |r| r.lmo_calls)
    }

    pub fn cache_hits(&self) -> u64 {
        self.trace.last().map_or(0, |r| r.cache_hits)
    }
}

/// `max_v ⟨∇f(x), x - v⟩` by one exact LMO call, clamped at zero.
pub(crate) fn exact_dual_gap(region: &dyn FeasibleRegion, gradient: &Point, x: &Point) -> Result<f64> {
    let v = region.lmo(gradient)?;
    Ok((gradient.dot(x) - v.dot(gradient)).max(0.0))
}

pub(crate) fn check_start(region: &dyn FeasibleRegion, start: &crate::Atom) -> Result<()> {
    crate::error::check_dim(region.dim(), start.dim())?;
    if !region.contains(&start.to_dense(), 1e-9) {
        return Err(Error::InvalidInput("start vertex is not in the feasible region".into()));
    }
    Ok(())
}

/// Wall clock and time-limit check shared by the drivers.
pub(crate) struct Clock {
    start: Instant,
    limit: Option<f64>,
}

impl Clock {
    pub(crate) fn new(limit: Option<f64>) -> Self {
        Clock {
            start: Instant::now(),
            limit,
        }
    }

    pub(crate) fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    pub(crate) fn expired(&self) -> bool {
        self.limit.is_some_and(|l| self.elapsed() >= l)
    }
}

/// Watches a trace as it is produced and records broken invariants.
pub(crate) struct Monitor {
    monotone: bool,
    phi_discipline: bool,
    initial_size: usize,
    prev_f: f64,
    prev_size: usize,
    fw_steps: usize,
    drop_steps: usize,
    pub(crate) violations: Vec<String>,
}

const MONOTONE_TOL: f64 = 1e-12;

impl Monitor {
    /// `monotone`: whether `f` must be non-increasing (false with drop promotion).
    /// `phi_discipline`: whether `Φ` may change only on gap steps (lazy solvers).
    pub(crate) fn new(f0: f64, initial_size: usize, monotone: bool, phi_discipline: bool) -> Self {
        Monitor {
            monotone,
            phi_discipline,
            initial_size,
            prev_f: f0,
            prev_size: initial_size,
            fw_steps: 0,
            drop_steps: 0,
            violations: Vec::new(),
        }
    }

    pub(crate) fn observe(&mut self, rec: &IterationRecord, prev_phi: f64, set: &ActiveSet) {
        let t = rec.iter;
        match rec.step {
            StepKind::FrankWolfe => self.fw_steps += 1,
            StepKind::Drop => self.drop_steps += 1,
            _ => {}
        }
        if let Err(e) = set.check_invariants() {
            self.violations.push(format!("iter {t}: active set: {e}"));
        }
        if self.monotone && rec.f_value > self.prev_f + MONOTONE_TOL * (1.0 + self.prev_f.abs()) {
            self.violations
                .push(format!("iter {t}: f increased from {} to {}", self.prev_f, rec.f_value));
        }
        if rec.active_size > self.prev_size {
            if rec.step != StepKind::FrankWolfe {
                self.violations
                    .push(format!("iter {t}: active set grew on a {} step", rec.step));
            } else if rec.active_size > self.prev_size + 1 {
                self.violations
                    .push(format!("iter {t}: active set grew by more than one"));
            }
        }
        if self.drop_steps > self.fw_steps + self.initial_size {
            self.violations.push(format!(
                "iter {t}: {} drop steps exceed {} FW steps + {}",
                self.drop_steps, self.fw_steps, self.initial_size
            ));
        }
        if self.phi_discipline {
            if rec.step == StepKind::GapStep && !(rec.phi < prev_phi) {
                self.violations.push(format!(
                    "iter {t}: gap step did not decrease phi ({prev_phi} -> {})",
                    rec.phi
                ));
            }
            if rec.step != StepKind::GapStep && rec.phi != prev_phi {
                self.violations
                    .push(format!("iter {t}: phi changed outside a gap step"));
            }
        }
        self.prev_f = rec.f_value;
        self.prev_size = rec.active_size;
    }
}
