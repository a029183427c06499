//! Blended conditional gradients (BCG) and related projection-free solvers.
//!
//! The crate is organized around a small data model ([`Atom`], [`ActiveSet`],
//! [`IterationRecord`]) shared by:
//!
//! * [`regions`]: polytopes with exact linear minimization oracles,
//! * [`objectives`]: least-squares objectives and seeded instance generators,
//! * [`weak_sep`]: the lazified weak-separation oracle with a vertex cache,
//! * [`sigd`]: the simplex gradient descent step,
//! * [`solvers`]: BCG, stand-alone simplex gradient descent, and Frank-Wolfe baselines,
//! * [`diagnostics`]: independent checks of gaps, curvature and smoothness bounds,
//! * [`linesearch`]: segment minimization primitives.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod active_set;
pub mod atom;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod linesearch;
pub mod objectives;
pub mod regions;
pub mod sigd;
pub mod solvers;
pub mod trace;
pub mod weak_sep;

pub use active_set::{ActiveSet, LocalExtremes, DROP_TOL};
pub use atom::{Atom, AtomKey};
pub use config::{LineSearch, SolverConfig};
pub use error::{Error, Result};
pub use objectives::{Instance, InstanceSpec, Objective, QuadraticObjective};
pub use regions::{AtomHull, FeasibleRegion, Region};
pub use solvers::{RunResult, Termination};
pub use trace::{IterationRecord, StepKind};

/// Dense point type used throughout the crate.
pub type Point = nalgebra::DVector<f64>;
