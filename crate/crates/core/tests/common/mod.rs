//! Reference solutions computed without any code from the crate's solvers.

#![allow(dead_code)]

use bcg::{Objective, Point};

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &Point) -> Point {
    let mut u: Vec<f64> = v.iter().copied().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.map(|x| (x - theta).max(0.0))
}

pub fn project_cube(v: &Point) -> Point {
    v.map(|x| x.clamp(0.0, 1.0))
}

/// Projected gradient with step `1/L` from the barycenter-like point `x0`.
pub fn projected_gradient(
    obj: &dyn Objective,
    l: f64,
    x0: Point,
    iters: usize,
    project: fn(&Point) -> Point,
) -> (Point, f64) {
    let mut x = x0;
    for _ in 0..iters {
        let next = project(&(&x - obj.gradient(&x) / l));
        let moved = (&next - &x).norm();
        x = next;
        if moved < 1e-15 {
            break;
        }
    }
    let f = obj.value(&x);
    (x, f)
}
