use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use super::Objective;
use crate::atom::Atom;
use crate::error::{check_dim, Error, Result};
use crate::Point;

const DENSE_SPECTRUM_MAX_DIM: usize = 600;
const POWER_TOL: f64 = 1e-10;
const POWER_BUDGET: usize = 100_000;

/// `f(x) = ‖Ax - b‖² + ⟨q, x⟩`, gradient `2Aᵀ(Ax - b) + q`, Hessian `2AᵀA`.
///
/// The linear term is optional and exists so linear objectives can be expressed
/// exactly (`A` with zero rows).
#[derive(Debug)]
pub struct QuadraticObjective {
    a: DMatrix<f64>,
    b: Point,
    linear: Option<Point>,
    spectrum: OnceLock<(f64, f64)>,
}

impl Clone for QuadraticObjective {
    fn clone(&self) -> Self {
        QuadraticObjective {
            a: self.a.clone(),
            b: self.b.clone(),
            linear: self.linear.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl QuadraticObjective {
    pub fn new(a: DMatrix<f64>, b: Point) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        Ok(QuadraticObjective {
            a,
            b,
            linear: None,
            spectrum: OnceLock::new(),
        })
    }

    /// The linear function `⟨q, x⟩`.
    pub fn linear(q: Point) -> Self {
        let n = q.len();
        QuadraticObjective {
            a: DMatrix::zeros(0, n),
            b: Point::zeros(0),
            linear: Some(q),
            spectrum: OnceLock::new(),
        }
    }

    pub fn with_linear(mut self, q: Point) -> Result<Self> {
        check_dim(self.a.ncols(), q.len())?;
        self.linear = Some(q);
        Ok(self)
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn linear_term(&self) -> Option<&Point> {
        self.linear.as_ref()
    }

    /// `L = 2 λ_max(AᵀA)`.
    pub fn smoothness(&self) -> f64 {
        self.spectrum().1
    }

    /// `α = 2 λ_min(AᵀA)`, zero when `A` has fewer rows than columns.
    pub fn strong_convexity(&self) -> f64 {
        self.spectrum().0
    }

    /// `vᵀ ∇²f v = 2‖Av‖²`.
    pub fn hessian_form(&self, v: &Point) -> f64 {
        2.0 * (&self.a * v).norm_squared()
    }

    /// Exact smoothness of `f_S(λ) = f(Σ λ_i v_i)` on the probability simplex:
    /// the largest eigenvalue of `2VᵀAᵀAV` restricted to `{λ : Σλ = 0}`,
    /// computed by power iteration.
    pub fn restricted_smoothness(&self, atoms: &[Atom]) -> Result<f64> {
        let g = self.restricted_hessian(atoms)?;
        let k = g.nrows();
        if k < 2 {
            return Ok(0.0);
        }
        let m = center(&g);
        let start = Point::from_fn(k, |i, _| ((i as f64 + 1.0) * 0.754_877_666).sin());
        power_iteration(|v| &m * v, project_mean_zero(start), POWER_TOL, POWER_BUDGET)
    }

    /// `2VᵀAᵀAV` for the atoms stacked as columns of `V`.
    pub fn restricted_hessian(&self, atoms: &[Atom]) -> Result<DMatrix<f64>> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("empty atom list".into()));
        }
        let n = self.a.ncols();
        let m = self.a.nrows();
        let mut w = DMatrix::zeros(m, atoms.len());
        for (j, atom) in atoms.iter().enumerate() {
            check_dim(n, atom.dim())?;
            let mut col = w.column_mut(j);
            for &(i, v) in atom.entries() {
                col.axpy(v, &self.a.column(i), 1.0);
            }
        }
        Ok(w.tr_mul(&w) * 2.0)
    }

    fn spectrum(&self) -> (f64, f64) {
        *self.spectrum.get_or_init(|| {
            let (m, n) = self.a.shape();
            if m == 0 || n == 0 {
                return (0.0, 0.0);
            }
            if n <= DENSE_SPECTRUM_MAX_DIM {
                let ata = self.a.tr_mul(&self.a);
                let eig = SymmetricEigen::new(ata);
                let max = eig.eigenvalues.max().max(0.0);
                let min = if m < n { 0.0 } else { eig.eigenvalues.min().max(0.0) };
                return (2.0 * min, 2.0 * max);
            }
            let start = Point::from_fn(n, |i, _| 1.0 + ((i as f64) * 0.618_033_988).fract());
            let apply = |v: &Point| self.a.tr_mul(&(&self.a * v));
            let max = power_iteration(apply, start.clone(), POWER_TOL, POWER_BUDGET).unwrap_or_else(|_| {
                // Frobenius norm bounds the spectral norm.
                self.a.norm_squared()
            });
            let min = if m < n {
                0.0
            } else {
                let shifted = |v: &Point| v * max - apply(v);
                power_iteration(shifted, start, POWER_TOL, POWER_BUDGET)
                    .map(|s| (max - s).max(0.0))
                    .unwrap_or(0.0)
            };
            (2.0 * min, 2.0 * max)
        })
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &Point) -> f64 {
        let r = &self.a * x - &self.b;
        let lin = self.linear.as_ref().map_or(0.0, |q| q.dot(x));
        r.norm_squared() + lin
    }

    fn gradient(&self, x: &Point) -> Point {
        let r = &self.a * x - &self.b;
        let mut g = self.a.tr_mul(&r) * 2.0;
        if let Some(q) = &self.linear {
            g += q;
        }
        g
    }

    fn smoothness_hint(&self) -> Option<f64> {
        Some(self.smoothness())
    }

    fn segment<'a>(&'a self, a: &Point, b: &Point) -> Box<dyn Fn(f64) -> f64 + 'a> {
        let d = b - a;
        let r0 = &self.a * a - &self.b;
        let dr = &self.a * &d;
        let (l0, l1) = match &self.linear {
            Some(q) => (q.dot(a), q.dot(&d)),
            None => (0.0, 0.0),
        };
        Box::new(move |g| {
            let res: f64 = r0.iter().zip(dr.iter()).map(|(r, s)| (r + g * s).powi(2)).sum();
            res + l0 + g * l1
        })
    }

    fn segment_delta<'a>(&'a self, a: &Point, b: &Point) -> Box<dyn Fn(f64) -> f64 + 'a> {
        // f(a + γd) - f(a) = γ(2⟨r, Ad⟩ + ⟨q, d⟩) + γ²‖Ad‖² with r = Aa - b.
        let d = b - a;
        let r0 = &self.a * a - &self.b;
        let dr = &self.a * &d;
        let slope = 2.0 * r0.dot(&dr) + self.linear.as_ref().map_or(0.0, |q| q.dot(&d));
        let curv = dr.norm_squared();
        Box::new(move |g| g * slope + g * g * curv)
    }
}

/// `Π G Π` with `Π = I - 𝟙𝟙ᵀ/k`.
fn center(g: &DMatrix<f64>) -> DMatrix<f64> {
    let k = g.nrows();
    let kf = k as f64;
    let row_means: Vec<f64> = (0..k).map(|i| g.row(i).sum() / kf).collect();
    let total = row_means.iter().sum::<f64>() / kf;
    DMatrix::from_fn(k, k, |i, j| g[(i, j)] - row_means[i] - row_means[j] + total)
}

fn project_mean_zero(mut v: Point) -> Point {
    let mean = v.mean();
    v.add_scalar_mut(-mean);
    v
}

/// Largest eigenvalue of a symmetric positive semidefinite operator.
///
/// Stops once the relative residual `‖Mv - ρv‖ / ρ` falls below `tol`, or once the
/// Rayleigh quotient has stalled to machine precision (clustered top eigenvalues).
pub fn power_iteration<F: Fn(&Point) -> Point>(apply: F, start: Point, tol: f64, budget: usize) -> Result<f64> {
    let norm = start.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("power iteration needs a nonzero start".into()));
    }
    let mut v = start / norm;
    let mut rho_prev = f64::NAN;
    let mut stalled = 0;
    for _ in 0..budget {
        let w = apply(&v);
        let rho = v.dot(&w);
        let wn = w.norm();
        if wn <= 1e-300 || rho <= 0.0 && wn <= 1e-14 {
            return Ok(0.0);
        }
        let residual = (&w - &v * rho).norm();
        if residual <= tol * rho.abs() {
            return Ok(rho);
        }
        if (rho - rho_prev).abs() <= 4.0 * f64::EPSILON * rho.abs() {
            stalled += 1;
            if stalled >= 50 {
                return Ok(rho);
            }
        } else {
            stalled = 0;
        }
        rho_prev = rho;
        v = w / wn;
    }
    Err(Error::NoConvergence { budget })
}
