use super::{bcg, RunResult};
use crate::config::SolverConfig;
use crate::error::Result;
use crate::objectives::Objective;
use crate::regions::AtomHull;

/// Re-solves over the convex hull of the final active set of `run`.
///
/// BCG restarts on `conv S₀` from the heaviest atom of `S₀` with `eps = d₀`, the
/// recorded dual gap of `run`, so the hull dual gap at the end is at most `d₀` and
/// `f` ends no more than `d₀` above its value in `run`. The final set is a subset of
/// `S₀`. A singleton `S₀` or `d₀ = 0` returns `run` unchanged.
///
/// The returned `final_dual_gap` is measured over `conv S₀`, not the original region.
pub fn post_optimize(obj: &dyn Objective, run: &RunResult, config: &SolverConfig) -> Result<RunResult> {
    let s0 = &run.final_set;
    let d0 = run.final_dual_gap;
    if s0.len() == 1 || !(d0 > 0.0) {
        return Ok(run.clone());
    }
    let hull = AtomHull::new(s0.atoms().to_vec())?;
    let heaviest = s0
        .weights()
        .iter()
        .enumerate()
        .fold(0, |best, (i, &w)| if w > s0.weights()[best] { i } else { best });
    let cfg = SolverConfig {
        eps: d0,
        exact_gap: false,
        ..config.clone()
    };
    bcg(obj, &hull, s0.atoms()[heaviest].clone(), &cfg)
}
