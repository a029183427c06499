use std::fmt;

use serde::{Deserialize, Serialize};

/// What a solver iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    /// Moved toward a vertex returned by an oracle (possibly new to the active set).
    FrankWolfe,
    /// The separation oracle failed; the gap estimate shrank and the iterate stayed put.
    GapStep,
    /// Decreased the objective inside the current active set.
    Descent,
    /// Removed at least one atom from the active set.
    Drop,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::FrankWolfe => "fw",
            StepKind::GapStep => "gap",
            StepKind::Descent => "descent",
            StepKind::Drop => "drop",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a run trace, describing the state after iteration `iter`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub elapsed: f64,
    pub f_value: f64,
    pub phi: f64,
    pub dual_gap: Option<f64>,
    pub step: StepKind,
    pub active_size: usize,
    pub lmo_calls: u64,
    pub cache_hits: u64,
}
