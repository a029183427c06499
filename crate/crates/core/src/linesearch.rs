//! Segment minimization shared by the solvers.
//!
//! Both searches work on a scalar restriction `φ(γ)`, `γ ∈ [0, γ_max]`, usually
//! obtained from [`Objective::segment_delta`](crate::Objective::segment_delta).

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::Point;

/// Interval width (in units of the segment) at which ternary search stops early.
pub const TERNARY_WIDTH_TOL: f64 = 1e-12;

/// Outcome of a one-dimensional search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarSearch {
    pub gamma: f64,
    pub f_value: f64,
    pub evals: usize,
}

/// Outcome of a search on the segment `[a, b]`, with the accepted point.
#[derive(Clone, Debug)]
pub struct SegmentSearchResult {
    pub gamma: f64,
    pub point: Point,
    pub f_value: f64,
    pub evals: usize,
}

/// Minimizes a convex `φ` on `[0, 1]`.
///
/// Each round compares `φ` at two probes just either side of the midpoint and keeps
/// the half containing the minimizer, so the bracket roughly halves per round. The
/// endpoints are always candidates; among equal values `0`, then `1`, then interior
/// points win.
pub fn ternary<F: Fn(f64) -> f64>(phi: F, budget: usize) -> Result<ScalarSearch> {
    if budget == 0 {
        return Err(Error::InvalidInput("ternary search budget must be positive".into()));
    }
    let mut best = ScalarSearch {
        gamma: 0.0,
        f_value: phi(0.0),
        evals: 1,
    };
    let f1 = phi(1.0);
    best.evals += 1;
    if f1 < best.f_value {
        best.gamma = 1.0;
        best.f_value = f1;
    }
    let consider = |g: f64, f: f64, best: &mut ScalarSearch| {
        if f < best.f_value {
            best.gamma = g;
            best.f_value = f;
        }
    };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..budget {
        let width = hi - lo;
        if width < TERNARY_WIDTH_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let delta = 1e-4 * width;
        let (p, q) = (mid - delta, mid + delta);
        let (fp, fq) = (phi(p), phi(q));
        best.evals += 2;
        consider(p, fp, &mut best);
        consider(q, fq, &mut best);
        if fp < fq {
            hi = q;
        } else if fp > fq {
            lo = p;
        } else {
            lo = p;
            hi = q;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = phi(mid);
    best.evals += 1;
    consider(mid, fm, &mut best);
    Ok(best)
}

/// Ternary search for `min f` on the segment `[a, b]`; `γ = 0` is `a`.
pub fn ternary_segment(obj: &dyn Objective, a: &Point, b: &Point, budget: usize) -> Result<SegmentSearchResult> {
    let delta = obj.segment_delta(a, b);
    let s = ternary(delta, budget)?;
    Ok(SegmentSearchResult {
        gamma: s.gamma,
        point: a + (b - a) * s.gamma,
        f_value: obj.value(a) + s.f_value,
        evals: s.evals,
    })
}

/// Backtracking on `φ` starting from `γ_max`, shrinking geometrically.
///
/// Accepts the first `γ = γ_max·shrink^j` with `φ(γ) < φ(0)` and, when
/// `sufficient_decrease > 0`, `φ(γ) <= φ(0) + sufficient_decrease·γ·slope`, where
/// `slope = φ'(0)`.
pub fn backtracking<F: Fn(f64) -> f64>(
    phi: F,
    f0: f64,
    slope: f64,
    gamma_max: f64,
    shrink: f64,
    sufficient_decrease: f64,
    budget: usize,
) -> Result<ScalarSearch> {
    let mut gamma = gamma_max;
    for j in 0..budget {
        let f = phi(gamma);
        let armijo = sufficient_decrease == 0.0 || f <= f0 + sufficient_decrease * gamma * slope;
        if f < f0 && armijo {
            return Ok(ScalarSearch {
                gamma,
                f_value: f,
                evals: j + 1,
            });
        }
        gamma *= shrink;
    }
    Err(Error::LineSearchExhausted { budget })
}

/// Backtracking along `x + γ·direction`, `γ ∈ (0, γ_max]`, with simple decrease.
pub fn backtracking_direction(
    obj: &dyn Objective,
    x: &Point,
    direction: &Point,
    gamma_max: f64,
    shrink: f64,
    budget: usize,
) -> Result<SegmentSearchResult> {
    let end = x + direction * gamma_max;
    let delta = obj.segment_delta(x, &end);
    let s = backtracking(delta, 0.0, 0.0, 1.0, shrink, 0.0, budget)?;
    let gamma = s.gamma * gamma_max;
    Ok(SegmentSearchResult {
        gamma,
        point: x + direction * gamma,
        f_value: obj.value(x) + s.f_value,
        evals: s.evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::QuadraticObjective;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity(n: usize) -> QuadraticObjective {
        QuadraticObjective::new(DMatrix::identity(n, n), Point::zeros(n)).unwrap()
    }

    #[test]
    fn symmetric_segment_midpoint() {
        let obj = identity(2);
        let a = Point::from_vec(vec![1.0, 0.0]);
        let b = Point::from_vec(vec![0.0, 1.0]);
        let r = ternary_segment(&obj, &a, &b, 64).unwrap();
        assert!((r.gamma - 0.5).abs() < 1e-6, "gamma = {}", r.gamma);
    }

    #[test]
    fn endpoint_minimizer_is_selected() {
        // f(x) = x_1 on [e2, e1]
        let obj = QuadraticObjective::linear(Point::from_vec(vec![1.0, 0.0]));
        let a = Point::from_vec(vec![0.0, 1.0]);
        let b = Point::from_vec(vec![1.0, 0.0]);
        let r = ternary_segment(&obj, &a, &b, 64).unwrap();
        assert_eq!(r.gamma, 0.0);
        let r = ternary_segment(&obj, &b, &a, 64).unwrap();
        assert_eq!(r.gamma, 1.0);
    }

    #[test]
    fn zero_budget_is_error() {
        assert!(ternary(|g| g * g, 0).is_err());
    }

    #[test]
    fn never_worse_than_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (p, q, r) = (
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.0..2.0),
            );
            let phi = |g: f64| r * g * g + q * g + p;
            let s = ternary(phi, 64).unwrap();
            assert!(s.f_value <= phi(0.0).min(phi(1.0)) + 1e-12 * (1.0 + phi(0.0).abs()));
        }
    }

    /// Closed-form minimizer of a quadratic restricted to a segment.
    fn exact_gamma(obj: &QuadraticObjective, a: &Point, b: &Point) -> f64 {
        let d = b - a;
        let slope = obj.gradient(a).dot(&d);
        let curv = 2.0 * (obj.a() * &d).norm_squared();
        if curv <= 0.0 {
            return if slope < 0.0 { 1.0 } else { 0.0 };
        }
        (-slope / curv).clamp(0.0, 1.0)
    }

    #[test]
    fn matches_closed_form_on_random_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 6;
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let b = Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let obj = QuadraticObjective::new(a, b).unwrap();
            let p = Point::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
            let q = Point::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
            let r = ternary_segment(&obj, &p, &q, 64).unwrap();
            let g = exact_gamma(&obj, &p, &q);
            assert!((r.gamma - g).abs() < 1e-6, "ternary {} vs exact {}", r.gamma, g);
        }
    }

    #[test]
    fn backtracking_accepts_full_step_on_strong_descent() {
        let obj = identity(2);
        let x = Point::from_vec(vec![1.0, 1.0]);
        let d = Point::from_vec(vec![-0.5, -0.5]);
        let r = backtracking_direction(&obj, &x, &d, 1.0, 0.7, 100).unwrap();
        assert_eq!(r.gamma, 1.0);
        assert_eq!(r.evals, 1);
    }

    #[test]
    fn backtracking_ascent_direction_exhausts() {
        let obj = identity(2);
        let x = Point::from_vec(vec![1.0, 1.0]);
        let d = Point::from_vec(vec![1.0, 0.0]);
        assert!(matches!(
            backtracking_direction(&obj, &x, &d, 1.0, 0.7, 100),
            Err(Error::LineSearchExhausted { .. })
        ));
    }

    #[test]
    fn armijo_backtracking_reaches_half_of_exact_decrease() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut good = 0;
        let trials = 1000;
        for _ in 0..trials {
            let n = 5;
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let b = Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let obj = QuadraticObjective::new(a, b).unwrap();
            let x = Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let g = obj.gradient(&x);
            let dir = -&g * rng.random_range(0.01..10.0);
            let end = &x + &dir;
            let phi = obj.segment(&x, &end);
            let f0 = phi(0.0);
            let slope = g.dot(&dir);
            let s = backtracking(&phi, f0, slope, 1.0, 0.7, 0.5, 100).unwrap();
            let exact = phi(exact_gamma(&obj, &x, &end));
            if f0 - s.f_value >= 0.5 * (f0 - exact) {
                good += 1;
            }
        }
        assert!(good as f64 >= 0.95 * trials as f64, "{good}/{trials}");
    }
}
