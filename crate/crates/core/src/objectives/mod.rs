//! Smooth convex objectives and seeded instance generators.

mod instances;
pub mod io;
mod quadratic;

pub use instances::{generate, Family, Instance, InstanceSpec, RegionSpec};
pub use quadratic::{power_iteration, QuadraticObjective};

use crate::Point;

/// Function value and gradient of a smooth convex objective.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Point) -> f64;

    fn gradient(&self, x: &Point) -> Point;

    /// A known gradient Lipschitz constant `L_f`, if available.
    fn smoothness_hint(&self) -> Option<f64> {
        None
    }

    /// Restriction `γ ↦ f(a + γ(b - a))`. Implementations may precompute to make
    /// repeated evaluations cheaper than a full [`value`](Objective::value) call.
    fn segment<'a>(&'a self, a: &Point, b: &Point) -> Box<dyn Fn(f64) -> f64 + 'a> {
        let a = a.clone();
        let d = b - &a;
        Box::new(move |g| self.value(&(&a + &d * g)))
    }

    /// `γ ↦ f(a + γ(b - a)) - f(a)`. Line searches compare these differences, so
    /// implementations that avoid the cancellation in `f(·) - f(a)` let them resolve
    /// decreases far below the rounding error of `f` itself.
    fn segment_delta<'a>(&'a self, a: &Point, b: &Point) -> Box<dyn Fn(f64) -> f64 + 'a> {
        let f0 = self.value(a);
        let seg = self.segment(a, b);
        Box::new(move |g| if g == 0.0 { 0.0 } else { seg(g) - f0 })
    }
}
