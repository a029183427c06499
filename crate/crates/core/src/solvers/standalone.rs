use super::{Clock, Monitor, RunResult, Termination};
use crate::active_set::{ActiveSet, DROP_TOL};
use crate::atom::{Atom, AtomKey};
use crate::config::SolverConfig;
use crate::error::{check_dim, Error, Result};
use crate::linesearch::ternary;
use crate::objectives::Objective;
use crate::sigd::{project_direction, ratio_test};
use crate::trace::{IterationRecord, StepKind};
use crate::Point;

fn vertex(i: usize, k: usize) -> Atom {
    Atom::new(AtomKey::Coordinate(i), k, vec![(i, 1.0)])
}

fn support(x: &Point) -> Vec<usize> {
    (0..x.len()).filter(|&i| x[i] > DROP_TOL).collect()
}

fn as_active_set(x: &Point) -> Result<ActiveSet> {
    let s = support(x);
    let atoms = s.iter().map(|&i| vertex(i, x.len())).collect();
    ActiveSet::new(atoms, s.iter().map(|&i| x[i]).collect())
}

/// Stand-alone simplex gradient descent over `Δ^k`, starting from `e₁`.
///
/// Works directly on coordinates: the active set is the support of `x`. The gradient
/// minimum over all coordinates plays the role of the LMO, so the dual gap is
/// available every iteration and doubles as the stopping test (`gap <= eps`) and the
/// `phi` column of the trace.
///
/// With `fixed_steps`, descent steps take the gradient step `x - d/L_f`, clipped at
/// the boundary point `y = x - ηd`, and Frank-Wolfe steps take `γ = 2/(t + 2)` with
/// `t` counted from zero. `L_f` comes from [`Objective::smoothness_hint`]. Fixed
/// Frank-Wolfe steps are not monotone, so the monotonicity check is off in that mode.
pub fn standalone_sigd(obj: &dyn Objective, k: usize, config: &SolverConfig) -> Result<RunResult> {
    config.validate()?;
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "stand-alone simplex descent needs k >= 2, got {k}"
        )));
    }
    check_dim(k, obj.dim())?;
    let inv_l = if config.fixed_steps {
        let l = obj.smoothness_hint().ok_or_else(|| {
            Error::InvalidConfig("fixed steps need an objective with a known smoothness constant".into())
        })?;
        if !(l > 0.0) {
            return Err(Error::InvalidConfig(
                "fixed steps need a positive smoothness constant".into(),
            ));
        }
        Some(1.0 / l)
    } else {
        None
    };
    let budget = super::bcg::ternary_budget(config);
    let clock = Clock::new(config.time_limit);

    let mut x = Point::zeros(k);
    x[0] = 1.0;
    let mut fx = obj.value(&x);
    let mut grad = obj.gradient(&x);
    let f0 = fx;
    let gap_of = |g: &Point, x: &Point| (g.dot(x) - g.min()).max(0.0);
    let mut gap = gap_of(&grad, &x);
    let phi0 = gap;
    let mut monitor = Monitor::new(f0, 1, !config.fixed_steps, false);
    let mut trace = Vec::new();
    let mut lmo_calls = 1u64;
    let mut termination = Termination::MaxIter;

    if gap <= config.eps {
        termination = Termination::PhiBelowEps;
    } else {
        for t in 1..=config.max_iter {
            if clock.expired() {
                termination = Termination::TimeLimit;
                break;
            }
            let s = support(&x);
            let pick = |better: fn(f64, f64) -> bool| {
                s.iter()
                    .copied()
                    .reduce(|b, i| if better(grad[i], grad[b]) { i } else { b })
                    .unwrap()
            };
            let a = pick(|u, v| u > v);
            let lo = pick(|u, v| u < v);
            let w = grad.argmin().0;

            let step = if grad[a] - grad[lo] > gap {
                let c: Vec<f64> = s.iter().map(|&i| grad[i]).collect();
                let d = project_direction(&c);
                let lambda: Vec<f64> = s.iter().map(|&i| x[i]).collect();
                let (eta, blocking) = ratio_test(&lambda, &d)?;
                let mut y = x.clone();
                for (j, &i) in s.iter().enumerate() {
                    y[i] = (x[i] - eta * d[j]).max(0.0);
                }
                y[s[blocking]] = 0.0;
                y /= y.sum();
                let delta = obj.segment_delta(&x, &y);
                if delta(1.0) <= 0.0 {
                    x = y;
                    StepKind::Drop
                } else {
                    let gamma = match inv_l {
                        Some(h) => (h / eta).min(1.0),
                        None => ternary(delta, budget)?.gamma,
                    };
                    x = &x + (&y - &x) * gamma;
                    StepKind::Descent
                }
            } else {
                let gamma = if inv_l.is_some() {
                    2.0 / ((t - 1) as f64 + 2.0)
                } else {
                    let mut e = Point::zeros(k);
                    e[w] = 1.0;
                    let seg = obj.segment_delta(&x, &e);
                    ternary(seg, budget)?.gamma
                };
                x *= 1.0 - gamma;
                x[w] += gamma;
                StepKind::FrankWolfe
            };
            for v in x.iter_mut() {
                if *v <= DROP_TOL {
                    *v = 0.0;
                }
            }
            x /= x.sum();

            fx = obj.value(&x);
            grad = obj.gradient(&x);
            lmo_calls += 1;
            let prev_gap = gap;
            gap = gap_of(&grad, &x);
            let set = as_active_set(&x)?;
            let rec = IterationRecord {
                iter: t,
                elapsed: clock.elapsed(),
                f_value: fx,
                phi: gap,
                dual_gap: config.exact_gap.then_some(gap),
                step,
                active_size: set.len(),
                lmo_calls,
                cache_hits: 0,
            };
            monitor.observe(&rec, prev_gap, &set);
            trace.push(rec);
            if gap <= config.eps {
                termination = Termination::PhiBelowEps;
                break;
            }
        }
    }

    Ok(RunResult {
        final_set: as_active_set(&x)?,
        trace,
        termination,
        f0,
        phi0,
        phi_final: gap,
        final_dual_gap: gap,
        certificates: Vec::new(),
        violations: monitor.violations,
    })
}
