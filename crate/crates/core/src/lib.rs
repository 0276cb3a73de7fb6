//! Finite-volume schemes for the Stefan form of the discontinuous
//! generalized porous medium equation `p_t = (k(p) p_x)_x`.
//!
//! The coefficient `k` jumps from `k_max` to `k_min` at a threshold `p*`, so
//! the solution develops a sharp moving front. The crate provides
//!
//! * the coefficient model and initial data ([`model`]),
//! * the similarity solution used as a reference ([`exact`]),
//! * face averages: arithmetic, harmonic, integral and shock-based ([`averaging`]),
//! * explicit stepping, including a moving-window refinement ([`solver`]),
//! * front trackers driven by the jump condition ([`tracker`]),
//! * error norms and artifact metrics ([`diagnostics`]).

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod model;
pub mod solver;
pub mod special;
pub mod tracker;

pub use error::{Error, Result};
pub use exact::ExactSolution;
pub use model::{CoefficientModel, InitialCondition, ProblemSpec};
pub use solver::{Grid, SchemeKind, SchemeSpec, Simulation, State};
pub use tracker::{ShockTracker, VelocityStencil};
