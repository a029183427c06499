use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Line search used for the descent step inside the simplex gradient descent oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LineSearch {
    /// Derivative-free bracketing on the segment; `budget` interval halvings.
    Ternary { budget: usize },
    /// `γ = γ_max · shrink^j`, accepted when `f(γ) <= f(0) + c·γ·f'(0)` with
    /// `c = sufficient_decrease` (`c = 0` means simple decrease).
    Backtracking {
        shrink: f64,
        sufficient_decrease: f64,
        budget: usize,
    },
}

impl LineSearch {
    pub const fn default_ternary_budget() -> usize {
        64
    }
}

impl Default for LineSearch {
    fn default() -> Self {
        LineSearch::Ternary {
            budget: Self::default_ternary_budget(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Weak-separation accuracy `K >= 1`.
    pub accuracy: f64,
    /// Target accuracy; BCG stops once the gap estimate drops to `eps / 2`.
    pub eps: f64,
    pub max_iter: usize,
    /// Wall-clock budget in seconds, checked once per iteration.
    pub time_limit: Option<f64>,
    pub line_search: LineSearch,
    /// Upper bound `ε₀` on the objective increase accepted to force a drop step.
    pub drop_promotion_eps0: Option<f64>,
    /// Replace Frank-Wolfe steps with pairwise steps against the away atom.
    pub pairwise_blend: bool,
    /// Stand-alone simplex descent with fixed `1/L` and `2/(t+2)` steps.
    pub fixed_steps: bool,
    /// Compute the exact dual gap after every iteration (one extra LMO call, not counted).
    pub exact_gap: bool,
    /// Maximum number of cached vertices; `None` keeps every vertex.
    pub cache_cap: Option<usize>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            accuracy: 1.0,
            eps: 1e-8,
            max_iter: 10_000,
            time_limit: None,
            line_search: LineSearch::default(),
            drop_promotion_eps0: None,
            pairwise_blend: false,
            fixed_steps: false,
            exact_gap: false,
            cache_cap: None,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.accuracy >= 1.0) {
            return bad("accuracy K must be >= 1");
        }
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                return bad("time limit must be positive");
            }
        }
        match self.line_search {
            LineSearch::Ternary { budget: 0 } => return bad("ternary budget must be positive"),
            LineSearch::Backtracking {
                shrink,
                sufficient_decrease,
                budget,
            } => {
                if !(shrink > 0.0 && shrink < 1.0) {
                    return bad("backtracking shrink must lie in (0, 1)");
                }
                if !(0.0..1.0).contains(&sufficient_decrease) {
                    return bad("sufficient decrease must lie in [0, 1)");
                }
                if budget == 0 {
                    return bad("backtracking budget must be positive");
                }
            }
            _ => {}
        }
        if let Some(e0) = self.drop_promotion_eps0 {
            if !(e0 >= 0.0) {
                return bad("drop promotion eps0 must be nonnegative");
            }
        }
        if self.cache_cap == Some(0) {
            return bad("cache cap must be positive");
        }
        Ok(())
    }
}
