//! Simplex gradient descent (SiGD): one projection-free descent step on `conv S`.
//!
//! The step works on the barycentric weights `λ` of the active set. With
//! `c_i = ⟨∇f(x), v_i⟩` and `d = c - mean(c)·𝟙`, it moves `λ` along `-d` up to the
//! boundary of the simplex. If the boundary point `y` is no worse than `x` the step
//! lands there and drops an atom; otherwise it line-searches on `[x, y]`.

use crate::active_set::{combine, ActiveSet};
use crate::config::LineSearch;
use crate::error::{Error, Result};
use crate::linesearch::{backtracking, ternary};
use crate::objectives::Objective;
use crate::trace::StepKind;
use crate::Point;

/// How the drop test is relaxed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigdMode {
    /// Accept the boundary point when `f(y) <= f(x)`.
    Vanilla,
    /// Accept when `f(y) <= f(x) + min(max(last_progress, 0)/2, eps0)`.
    PromoteDrops { eps0: f64, last_progress: f64 },
}

impl SigdMode {
    fn slack(self) -> f64 {
        match self {
            SigdMode::Vanilla => 0.0,
            SigdMode::PromoteDrops { eps0, last_progress } => (last_progress.max(0.0) / 2.0).min(eps0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SigdOutcome {
    /// [`StepKind::Drop`] or [`StepKind::Descent`].
    pub kind: StepKind,
    pub f_before: f64,
    pub f_after: f64,
    /// `f_before - f_after`.
    /// `f_before - f_after`, evaluated as a segment difference so it stays accurate
    /// when the decrease is below the rounding error of `f`.
    pub progress: f64,
    /// Number of atoms removed.
    pub dropped: usize,
    /// `max_i c_i - min_i c_i`.
    pub local_gap: f64,
}

/// Orthogonal projection onto `{z : Σz = 0}`.
pub fn project_direction(c: &[f64]) -> Vec<f64> {
    if c.is_empty() {
        return Vec::new();
    }
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    c.iter().map(|x| x - mean).collect()
}

/// Largest `η >= 0` with `λ - ηd >= 0`, and the index that blocks it.
pub fn ratio_test(lambda: &[f64], d: &[f64]) -> Result<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, (&l, &di)) in lambda.iter().zip(d).enumerate() {
        if di > 0.0 {
            let eta = l / di;
            if best.is_none_or(|(b, _)| eta < b) {
                best = Some((eta, i));
            }
        }
    }
    best.ok_or_else(|| Error::InvalidInput("ratio test needs a direction with a positive entry".into()))
}

/// One SiGD step on `set`, computing `∇f(x)` and `f(x)` itself.
pub fn sigd_step(
    obj: &dyn Objective,
    set: &mut ActiveSet,
    mode: SigdMode,
    line_search: LineSearch,
) -> Result<SigdOutcome> {
    let x = set.iterate().clone();
    let g = obj.gradient(&x);
    let fx = obj.value(&x);
    sigd_step_at(obj, set, &g, fx, mode, line_search)
}

/// One SiGD step given the gradient and value at the current iterate.
pub fn sigd_step_at(
    obj: &dyn Objective,
    set: &mut ActiveSet,
    gradient: &Point,
    f_x: f64,
    mode: SigdMode,
    line_search: LineSearch,
) -> Result<SigdOutcome> {
    let k = set.len();
    if k < 2 {
        return Err(Error::DegenerateActiveSet(format!(
            "simplex descent needs at least two atoms, got {k}"
        )));
    }
    let c: Vec<f64> = set.atoms().iter().map(|a| a.dot(gradient)).collect();
    let cmax = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cmin = c.iter().cloned().fold(f64::INFINITY, f64::min);
    let local_gap = cmax - cmin;
    let d = project_direction(&c);
    // `d = 0` exactly when `c` is constant; a rounding-level mean can leave `d` with no
    // positive entry, which is the same situation.
    if local_gap == 0.0 || !d.iter().any(|&v| v > 0.0) {
        // Gradient is constant on S: collapse onto the first atom.
        let first = set.atoms()[0].clone();
        let progress = -obj.segment_delta(set.iterate(), &first.to_dense())(1.0);
        *set = ActiveSet::singleton(first);
        let f_after = obj.value(set.iterate());
        return Ok(SigdOutcome {
            kind: StepKind::Drop,
            f_before: f_x,
            f_after,
            progress,
            dropped: k - 1,
            local_gap,
        });
    }

    let lambda = set.weights().to_vec();
    let (eta, blocking) = ratio_test(&lambda, &d)?;
    let mut tau: Vec<f64> = lambda.iter().zip(&d).map(|(l, di)| (l - eta * di).max(0.0)).collect();
    tau[blocking] = 0.0;
    // A large η amplifies the rounding in Σd; renormalizing keeps y in the affine
    // hull of S, which the sign of the segment slope depends on.
    let total: f64 = tau.iter().sum();
    tau.iter_mut().for_each(|t| *t /= total);
    let x = set.iterate().clone();
    let y = combine(set.atoms(), &tau, set.dim());
    let delta = obj.segment_delta(&x, &y);

    let delta_y = delta(1.0);
    if delta_y <= mode.slack() {
        set.set_weights(tau)?;
        let f_after = obj.value(set.iterate());
        return Ok(SigdOutcome {
            kind: StepKind::Drop,
            f_before: f_x,
            f_after,
            progress: -delta_y,
            dropped: k - set.len(),
            local_gap,
        });
    }

    let search = match line_search {
        LineSearch::Ternary { budget } => {
            let s = ternary(&delta, budget)?;
            if !(s.f_value < 0.0) {
                return Err(Error::LineSearchExhausted { budget });
            }
            s
        }
        LineSearch::Backtracking {
            shrink,
            sufficient_decrease,
            budget,
        } => {
            let slope: f64 = c
                .iter()
                .zip(tau.iter().zip(&lambda))
                .map(|(ci, (t, l))| ci * (t - l))
                .sum();
            backtracking(delta, 0.0, slope, 1.0, shrink, sufficient_decrease, budget)?
        }
    };
    let (gamma, progress) = (search.gamma, -search.f_value);
    let weights: Vec<f64> = lambda.iter().zip(&tau).map(|(l, t)| l + gamma * (t - l)).collect();
    set.set_weights(weights)?;
    let f_after = obj.value(set.iterate());
    let dropped = k - set.len();
    Ok(SigdOutcome {
        kind: if dropped > 0 { StepKind::Drop } else { StepKind::Descent },
        f_before: f_x,
        f_after,
        progress,
        dropped,
        local_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::{Atom, AtomKey};
    use crate::objectives::QuadraticObjective;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize, n: usize) -> Atom {
        Atom::new(AtomKey::Coordinate(i), n, vec![(i, 1.0)])
    }

    #[test]
    fn project_direction_examples() {
        assert_eq!(project_direction(&[1.0, 1.0, 1.0]), vec![0.0, 0.0, 0.0]);
        assert_eq!(project_direction(&[2.0, 0.0]), vec![1.0, -1.0]);
        assert_eq!(project_direction(&[3.0, 0.0, 0.0]), vec![2.0, -1.0, -1.0]);
    }

    #[test]
    fn ratio_test_examples() {
        assert_eq!(ratio_test(&[0.5, 0.5], &[0.25, -0.25]).unwrap(), (2.0, 0));
        let (eta, i) = ratio_test(&[0.2, 0.3, 0.5], &[0.1, 0.2, -0.3]).unwrap();
        assert!((eta - 1.5).abs() < 1e-15);
        assert_eq!(i, 1);
        assert!(ratio_test(&[0.5, 0.5], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn ratio_test_lands_on_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let w: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            let lambda: Vec<f64> = w.iter().map(|x| x / s).collect();
            let d = project_direction(&(0..10).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<_>>());
            let (eta, _) = ratio_test(&lambda, &d).unwrap();
            let after: Vec<f64> = lambda.iter().zip(&d).map(|(l, di)| l - eta * di).collect();
            assert!(after.iter().all(|&v| v >= -1e-14));
            assert!(after.iter().any(|&v| v.abs() <= 1e-12));
        }
    }

    #[test]
    fn drop_to_vertex_on_two_point_segment() {
        // f(x) = ½‖x - e₁‖² written as ‖Ax - b‖² with A = I/√2, b = e₁/√2
        let s = 0.5f64.sqrt();
        let obj = QuadraticObjective::new(DMatrix::identity(2, 2) * s, Point::from_vec(vec![s, 0.0])).unwrap();
        let mut set = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        let g = obj.gradient(set.iterate());
        assert!((g - Point::from_vec(vec![-0.5, 0.5])).amax() < 1e-15);
        let out = sigd_step(&obj, &mut set, SigdMode::Vanilla, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Drop);
        assert_eq!(set.len(), 1);
        assert_eq!(set.atoms()[0].key(), &AtomKey::Coordinate(0));
        assert!((out.f_before - 0.25).abs() < 1e-15);
        assert!(out.f_after.abs() < 1e-15);
    }

    #[test]
    fn constant_gradient_collapses_to_first_atom() {
        let obj = QuadraticObjective::linear(Point::from_vec(vec![1.0, 1.0, 1.0]));
        let mut set = ActiveSet::new(vec![e(2, 3), e(0, 3), e(1, 3)], vec![0.2, 0.3, 0.5]).unwrap();
        let out = sigd_step(&obj, &mut set, SigdMode::Vanilla, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Drop);
        assert_eq!(set.len(), 1);
        assert_eq!(set.atoms()[0].key(), &AtomKey::Coordinate(2));
    }

    #[test]
    fn descent_step_meets_progress_bound() {
        // f(x) = ‖x - (⅓,⅓,⅓)‖² on Δ³ from (0.6, 0.3, 0.1)
        let obj = QuadraticObjective::new(DMatrix::identity(3, 3), Point::from_element(3, 1.0 / 3.0)).unwrap();
        let atoms = vec![e(0, 3), e(1, 3), e(2, 3)];
        let mut set = ActiveSet::new(atoms.clone(), vec![0.6, 0.3, 0.1]).unwrap();
        let g = obj.gradient(set.iterate());
        let gap = g.max() - g.min();
        let l_s = obj.restricted_smoothness(&atoms).unwrap();
        assert!((l_s - 2.0).abs() < 1e-12);
        let out = sigd_step(&obj, &mut set, SigdMode::Vanilla, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Descent);
        assert!(out.f_after < out.f_before);
        assert!(out.progress >= gap * gap / (4.0 * l_s) - 1e-12);
        set.check_invariants().unwrap();
    }

    #[test]
    fn singleton_is_rejected() {
        let obj = QuadraticObjective::linear(Point::from_vec(vec![1.0, 2.0]));
        let mut set = ActiveSet::singleton(e(0, 2));
        assert!(sigd_step(&obj, &mut set, SigdMode::Vanilla, LineSearch::default()).is_err());
    }

    #[test]
    fn promoted_drop_accepts_bounded_increase() {
        // At x = (0.5, 0.5) the boundary point e₁ is slightly worse than x.
        let obj = QuadraticObjective::new(DMatrix::identity(2, 2), Point::from_vec(vec![0.55, 0.45])).unwrap();
        let start = ActiveSet::new(vec![e(0, 2), e(1, 2)], vec![0.5, 0.5]).unwrap();
        let mut vanilla = start.clone();
        let out = sigd_step(&obj, &mut vanilla, SigdMode::Vanilla, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Descent);

        let mut promoted = start.clone();
        let mode = SigdMode::PromoteDrops {
            eps0: 1.0,
            last_progress: 2.0,
        };
        let out = sigd_step(&obj, &mut promoted, mode, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Drop);
        assert!(-out.progress <= 1.0);

        // eps0 = 0 reduces to vanilla
        let mut strict = start;
        let mode = SigdMode::PromoteDrops {
            eps0: 0.0,
            last_progress: 2.0,
        };
        let out = sigd_step(&obj, &mut strict, mode, LineSearch::default()).unwrap();
        assert_eq!(out.kind, StepKind::Descent);
    }

    #[test]
    fn backtracking_variant_descends() {
        let obj = QuadraticObjective::new(DMatrix::identity(3, 3), Point::from_element(3, 1.0 / 3.0)).unwrap();
        let mut set = ActiveSet::new(vec![e(0, 3), e(1, 3), e(2, 3)], vec![0.6, 0.3, 0.1]).unwrap();
        let ls = LineSearch::Backtracking {
            shrink: 0.7,
            sufficient_decrease: 0.0,
            budget: 100,
        };
        let out = sigd_step(&obj, &mut set, SigdMode::Vanilla, ls).unwrap();
        assert!(out.f_after < out.f_before);
    }

    proptest! {
        #[test]
        fn projected_direction_sums_to_zero(c in prop::collection::vec(-1.0f64..1.0, 1..60)) {
            let d = project_direction(&c);
            prop_assert!(d.iter().sum::<f64>().abs() <= 1e-12);
        }

        #[test]
        fn vanilla_steps_never_increase_f_and_stay_consistent(
            seed in 0u64..1000,
            k in 2usize..8,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 8;
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let b = Point::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
            let obj = QuadraticObjective::new(a, b).unwrap();
            let atoms: Vec<Atom> = (0..k).map(|i| e(i, n)).collect();
            let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let mut set = ActiveSet::new(atoms, w).unwrap();
            for _ in 0..5 {
                if set.len() < 2 { break; }
                // Mirror the solver: simplex descent only runs on a visible local gap.
                let g = obj.gradient(set.iterate());
                if set.local_extremes(&g).local_gap() < 1e-8 * (1.0 + g.amax()) { break; }
                let before = set.len();
                let out = sigd_step(&obj, &mut set, SigdMode::Vanilla, LineSearch::default()).unwrap();
                set.check_invariants().unwrap();
                prop_assert!(out.f_after <= out.f_before + 1e-12 * (1.0 + out.f_before.abs()));
                prop_assert!(out.progress >= 0.0);
                if out.kind == StepKind::Drop {
                    prop_assert!(set.len() < before);
                } else {
                    prop_assert_eq!(set.len(), before);
                    prop_assert!(out.progress > 0.0);
                }
            }
        }
    }
}
