use super::{check_start, exact_dual_gap, Clock, GapCertificate, Monitor, RunResult, Termination};
use crate::active_set::ActiveSet;
use crate::atom::Atom;
use crate::config::SolverConfig;
use crate::error::Result;
use crate::linesearch::ternary;
use crate::objectives::Objective;
use crate::regions::FeasibleRegion;
use crate::sigd::{sigd_step_at, SigdMode};
use crate::trace::{IterationRecord, StepKind};
use crate::weak_sep::{SeparationOutcome, WeakSeparation};

/// Blended conditional gradients from the vertex `start`.
///
/// Each iteration compares the local gap `max_S ⟨∇f, v⟩ - min_S ⟨∇f, v⟩` with the
/// gap estimate `Φ`. A large local gap triggers a simplex descent step on the active
/// set; otherwise the weak-separation oracle either supplies a vertex for a
/// Frank-Wolfe step or certifies that `Φ` can shrink to `min(Φ/2, dual gap)`.
/// The run stops once a gap step brings `Φ` to `eps/2` or below.
pub fn bcg(obj: &dyn Objective, region: &dyn FeasibleRegion, start: Atom, config: &SolverConfig) -> Result<RunResult> {
    config.validate()?;
    check_start(region, &start)?;
    let clock = Clock::new(config.time_limit);
    let mut ws = WeakSeparation::new(config.cache_cap);
    let mut set = ActiveSet::singleton(start);

    let mut grad = obj.gradient(set.iterate());
    let mut fx = obj.value(set.iterate());
    let f0 = fx;
    let v0 = ws.exact(region, &grad)?;
    let phi0 = ((grad.dot(set.iterate()) - v0.dot(&grad)) / 2.0).max(0.0);
    let mut phi = phi0;
    let mut certificates = vec![GapCertificate {
        iter: 0,
        phi,
        iterate: set.iterate().clone(),
    }];
    let mut monitor = Monitor::new(f0, 1, config.drop_promotion_eps0.is_none(), true);
    let mut trace = Vec::new();
    let mut last_progress = 0.0;
    let mut termination = Termination::MaxIter;

    if phi <= config.eps / 2.0 {
        termination = Termination::PhiBelowEps;
    } else {
        for t in 1..=config.max_iter {
            if clock.expired() {
                termination = Termination::TimeLimit;
                break;
            }
            let prev_phi = phi;
            let ext = set.local_extremes(&grad);
            let step = if set.len() >= 2 && ext.local_gap() >= phi {
                let mode = match config.drop_promotion_eps0 {
                    Some(eps0) => SigdMode::PromoteDrops { eps0, last_progress },
                    None => SigdMode::Vanilla,
                };
                let out = sigd_step_at(obj, &mut set, &grad, fx, mode, config.line_search)?;
                last_progress = out.progress;
                out.kind
            } else {
                let x = set.iterate().clone();
                match ws.separate(region, set.atoms(), &grad, &x, phi, config.accuracy)? {
                    SeparationOutcome::Negative { true_gap } => {
                        phi = (phi / 2.0).min(true_gap).max(0.0);
                        certificates.push(GapCertificate {
                            iter: t,
                            phi,
                            iterate: x,
                        });
                        StepKind::GapStep
                    }
                    SeparationOutcome::Positive { atom, .. } => {
                        if config.pairwise_blend && set.len() >= 2 {
                            let a = ext.away_index;
                            let mass = set.weights()[a];
                            let mut target = x.clone();
                            atom.add_scaled_to(&mut target, mass);
                            set.atoms()[a].add_scaled_to(&mut target, -mass);
                            let phi_seg = obj.segment_delta(&x, &target);
                            let s = ternary(phi_seg, ternary_budget(config))?;
                            set.pairwise_update(atom, a, s.gamma * mass)?;
                            last_progress = -s.f_value;
                        } else {
                            let phi_seg = obj.segment_delta(&x, &atom.to_dense());
                            let s = ternary(phi_seg, ternary_budget(config))?;
                            set.fw_update(atom, s.gamma)?;
                            last_progress = -s.f_value;
                        }
                        StepKind::FrankWolfe
                    }
                }
            };

            if step != StepKind::GapStep {
                grad = obj.gradient(set.iterate());
                fx = obj.value(set.iterate());
            }
            let dual_gap = if config.exact_gap {
                Some(exact_dual_gap(region, &grad, set.iterate())?)
            } else {
                None
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
            if step == StepKind::GapStep && phi <= config.eps / 2.0 {
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

/// Budget for segment searches on FW and pairwise steps.
pub(crate) fn ternary_budget(config: &SolverConfig) -> usize {
    match config.line_search {
        crate::config::LineSearch::Ternary { budget } => budget,
        _ => crate::config::LineSearch::default_ternary_budget(),
    }
}
