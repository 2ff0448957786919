//! Trajectory-based optimization for smooth inequality-constrained problems.
//!
//! A point moves along the normalized field
//! `s = -grad f/|grad f| - zeta grad Phi/|grad Phi|`, where `Phi` is the log
//! barrier of the constraints, until it first leaves the feasible set.

pub mod benchmarks;
pub mod diagnostics;
pub mod direction;
pub mod error;
pub mod integrator;
pub mod problem;

pub use direction::{
    direction_multi, direction_single, msdm_direction, zeta_from_c, Branch, DirectionParams, DirectionResult,
};
pub use error::{Component, Error, Result};
pub use integrator::{scan_zeta, solve, step, BoundaryPolicy, SolveResult, Status, TraceRecord, TrajectoryConfig};
pub use problem::{barrier, evaluate, BarrierState, Evaluation, Problem, SmoothFn};
