use serde::{Deserialize, Serialize};

use super::bcg::ternary_budget;
use super::{check_start, exact_dual_gap, Clock, GapCertificate, Monitor, RunResult, Termination};
use crate::active_set::ActiveSet;
use crate::atom::Atom;
use crate::config::SolverConfig;
use crate::error::Result;
use crate::linesearch::ternary;
use crate::objectives::Objective;
use crate::regions::FeasibleRegion;
use crate::trace::{IterationRecord, StepKind};
use crate::weak_sep::{SeparationOutcome, WeakSeparation};
use crate::Point;

/// Conditional gradient variants used as benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Baseline {
    VanillaFW,
    AwayFW,
    PairwiseFW,
    /// Pairwise steps driven by the weak-separation oracle with `Φ`-halving.
    LazyPairwiseFW,
}

enum Move {
    Toward(Atom),
    Away(usize),
    Pairwise(Atom, usize),
}

/// Runs a baseline from the vertex `start`, with ternary line search on every step.
///
/// The non-lazy variants call the exact LMO once per iteration, so they stop on the
/// true dual gap (`gap <= eps`) and record it as `phi`. The lazy variant keeps a gap
/// estimate and stops like BCG.
pub fn baseline(
    variant: Baseline,
    obj: &dyn Objective,
    region: &dyn FeasibleRegion,
    start: Atom,
    config: &SolverConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_start(region, &start)?;
    let budget = ternary_budget(config);
    let clock = Clock::new(config.time_limit);
    let mut ws = WeakSeparation::new(config.cache_cap);
    let mut set = ActiveSet::singleton(start);
    let mut grad = obj.gradient(set.iterate());
    let mut fx = obj.value(set.iterate());
    let f0 = fx;
    let lazy = variant == Baseline::LazyPairwiseFW;

    let v0 = ws.exact(region, &grad)?;
    let gap0 = (grad.dot(set.iterate()) - v0.dot(&grad)).max(0.0);
    let phi0 = if lazy { gap0 / 2.0 } else { gap0 };
    let mut phi = phi0;
    let mut pending = Some(v0);
    let mut certificates = Vec::new();
    if lazy {
        certificates.push(GapCertificate {
            iter: 0,
            phi,
            iterate: set.iterate().clone(),
        });
    }
    let mut monitor = Monitor::new(f0, 1, true, lazy);
    let mut trace = Vec::new();
    let mut termination = Termination::MaxIter;
    let done = |phi: f64| {
        if lazy {
            phi <= config.eps / 2.0
        } else {
            phi <= config.eps
        }
    };

    if done(phi) {
        termination = Termination::PhiBelowEps;
    } else {
        for t in 1..=config.max_iter {
            if clock.expired() {
                termination = Termination::TimeLimit;
                break;
            }
            let prev_phi = phi;
            let x = set.iterate().clone();
            let ext = set.local_extremes(&grad);

            let mv = if lazy {
                match ws.separate(region, set.atoms(), &grad, &x, phi, config.accuracy)? {
                    SeparationOutcome::Negative { true_gap } => {
                        phi = (phi / 2.0).min(true_gap).max(0.0);
                        certificates.push(GapCertificate {
                            iter: t,
                            phi,
                            iterate: x.clone(),
                        });
                        None
                    }
                    SeparationOutcome::Positive { atom, .. } => Some(Move::Pairwise(atom, ext.away_index)),
                }
            } else {
                // The LMO call for this iterate was made at the end of the previous one.
                let v = match pending.take() {
                    Some(v) => v,
                    None => ws.exact(region, &grad)?,
                };
                Some(match variant {
                    Baseline::VanillaFW => Move::Toward(v),
                    Baseline::PairwiseFW => Move::Pairwise(v, ext.away_index),
                    _ => {
                        let fw_gap = grad.dot(&x) - v.dot(&grad);
                        let away_gap = ext.away_value - grad.dot(&x);
                        if fw_gap >= away_gap || set.len() == 1 {
                            Move::Toward(v)
                        } else {
                            Move::Away(ext.away_index)
                        }
                    }
                })
            };

            let before = set.len();
            let step = match mv {
                None => StepKind::GapStep,
                Some(Move::Toward(v)) => {
                    let seg = obj.segment_delta(&x, &v.to_dense());
                    let s = ternary(seg, budget)?;
                    set.fw_update(v, s.gamma)?;
                    StepKind::FrankWolfe
                }
                Some(Move::Pairwise(v, a)) => {
                    if set.atoms()[a] == v {
                        // Already optimal within the active set.
                        StepKind::FrankWolfe
                    } else {
                        let mass = set.weights()[a];
                        let mut target = x.clone();
                        v.add_scaled_to(&mut target, mass);
                        set.atoms()[a].add_scaled_to(&mut target, -mass);
                        let seg = obj.segment_delta(&x, &target);
                        let s = ternary(seg, budget)?;
                        let is_new = set.position(v.key()).is_none();
                        set.pairwise_update(v, a, s.gamma * mass)?;
                        if !is_new && set.len() < before {
                            StepKind::Drop
                        } else {
                            StepKind::FrankWolfe
                        }
                    }
                }
                Some(Move::Away(a)) => {
                    let la = set.weights()[a];
                    let gamma_max = la / (1.0 - la);
                    let mut target: Point = &x * (1.0 + gamma_max);
                    set.atoms()[a].add_scaled_to(&mut target, -gamma_max);
                    let seg = obj.segment_delta(&x, &target);
                    let s = ternary(seg, budget)?;
                    set.away_update(a, s.gamma * gamma_max)?;
                    if set.len() < before {
                        StepKind::Drop
                    } else {
                        StepKind::Descent
                    }
                }
            };

            if step != StepKind::GapStep {
                grad = obj.gradient(set.iterate());
                fx = obj.value(set.iterate());
                if !lazy {
                    let v = ws.exact(region, &grad)?;
                    phi = (grad.dot(set.iterate()) - v.dot(&grad)).max(0.0);
                    pending = Some(v);
                }
            }
            let dual_gap = match (config.exact_gap, lazy) {
                (false, _) => None,
                (true, false) => Some(phi),
                (true, true) => Some(exact_dual_gap(region, &grad, set.iterate())?),
            };
            let rec = IterationRecord {
                iter: t,
                elapsed: clock.elapsed(),
                f_value: fx,
                phi,
                dual_gap,
                step,
                active_size: set.len(),
                lmo_calls: ws.lmo_calls(),
                cache_hits: ws.cache_hits(),
            };
            monitor.observe(&rec, prev_phi, &set);
            trace.push(rec);
            if (!lazy || step == StepKind::GapStep) && done(phi) {
                termination = Termination::PhiBelowEps;
                break;
            }
        }
    }

    let final_dual_gap = exact_dual_gap(region, &grad, set.iterate())?;
    Ok(RunResult {
        final_set: set,
        trace,
        termination,
        f0,
        phi0,
        phi_final: phi,
        final_dual_gap,
        certificates,
        violations: monitor.violations,
    })
}
