use std::fmt;

use thiserror::Error;

/// Identifies which callable of a [`Problem`](crate::Problem) produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Objective,
    Constraint(usize),
    Barrier,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Objective => write!(f, "objective"),
            Component::Constraint(i) => write!(f, "constraint {i}"),
            Component::Barrier => write!(f, "barrier"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value from {0}")]
    NonFinite(Component),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("starting point is not strictly feasible (max g = {max_g:e})")]
    InfeasibleStart { max_g: f64 },

    /// The objective gradient vanished; the trajectory is undefined here.
    #[error("objective gradient vanished (|grad f| = {norm:e})")]
    CriticalPoint { norm: f64 },

    /// The constraint gradient vanished; callers escape along `-grad f`.
    #[error("constraint gradient vanished (|grad g| = {norm:e})")]
    ConstraintCritical { norm: f64 },

    #[error("normalized gradients are parallel (cos theta = {cos_theta})")]
    DegenerateGeometry { cos_theta: f64 },

    #[error("matrix is singular to working precision (min |eigenvalue| = {min_abs_eigenvalue:e})")]
    Singular { min_abs_eigenvalue: f64 },

    #[error("no hessian available for {0} and finite-difference fallback is disabled")]
    MissingHessian(Component),

    #[error("failed to draw a strictly feasible start after {attempts} samples")]
    Initialization { attempts: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("malformed reference data at line {line}: {reason}")]
    ReferenceData { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
