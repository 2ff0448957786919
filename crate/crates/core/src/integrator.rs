//! Fixed-step explicit Euler integration of the direction field.
//!
//! Each iteration evaluates the problem, records a [`TraceRecord`], and moves
//! by `h * s / |s|` (normalized field) or `h * s` (raw field). The run stops
//! at the first iterate that violates a constraint, at a vanishing objective
//! gradient, on a non-finite evaluation, or when the budget is exhausted.

use nalgebra::DVector;

use crate::direction::{direction_multi, Branch, DirectionParams, DEFAULT_GRAD_ZERO_TOL};
use crate::error::{Component, Error, Result};
use crate::problem::{barrier, evaluate, Evaluation, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// Report the first iterate with `max g_i >= 0`.
    StopAtFirstViolation,
    /// Report the last strictly feasible iterate.
    ClampToLastFeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub zeta: f64,
    /// Euclidean step length under the normalized field; Euler step under
    /// the raw field.
    pub step_size: f64,
    pub max_iters: usize,
    pub use_normalized_field: bool,
    pub grad_zero_tol: f64,
    pub boundary_policy: BoundaryPolicy,
}

impl TrajectoryConfig {
    pub fn new(zeta: f64, step_size: f64) -> Self {
        Self {
            zeta,
            step_size,
            max_iters: 100_000,
            use_normalized_field: true,
            grad_zero_tol: DEFAULT_GRAD_ZERO_TOL,
            boundary_policy: BoundaryPolicy::ClampToLastFeasible,
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_raw_field(mut self) -> Self {
        self.use_normalized_field = false;
        self
    }

    pub fn with_boundary_policy(mut self, policy: BoundaryPolicy) -> Self {
        self.boundary_policy = policy;
        self
    }

    pub fn direction_params(&self) -> DirectionParams {
        DirectionParams {
            zeta: self.zeta,
            grad_zero_tol: self.grad_zero_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.direction_params().validate()?;
        if self.step_size.is_nan() || self.step_size <= 0.0 || !self.step_size.is_finite() {
            return Err(Error::InvalidInput(format!(
                "step_size must be positive, got {}",
                self.step_size
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Snapshot of one iterate, taken before the step from it.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    /// Accumulated integration time; arc length under the normalized field.
    pub t: f64,
    pub x: DVector<f64>,
    pub f: f64,
    pub g_max: f64,
    pub cos_theta: Option<f64>,
    /// `|s|` before normalization.
    pub s_norm: f64,
    pub branch: Branch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    BoundaryHit,
    MaxIters,
    CriticalPoint,
    EvaluationFailure,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::BoundaryHit => "boundary_hit",
            Status::MaxIters => "max_iters",
            Status::CriticalPoint => "critical_point",
            Status::EvaluationFailure => "evaluation_failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub x_final: DVector<f64>,
    pub f_final: f64,
    /// The reported boundary point, per [`BoundaryPolicy`].
    pub boundary_point: Option<DVector<f64>>,
    /// First iterate with `max g_i >= 0`.
    pub crossing_point: Option<DVector<f64>>,
    /// `cos theta` at the last feasible iterate before the crossing.
    pub cos_theta_at_boundary: Option<f64>,
    /// Number of Euler steps taken.
    pub iterations: usize,
    pub failure: Option<Error>,
    pub trace: Vec<TraceRecord>,
}

impl SolveResult {
    pub fn last_record(&self) -> Option<&TraceRecord> {
        self.trace.last()
    }
}

struct Stepped {
    next: DVector<f64>,
    record: TraceRecord,
}

fn advance(config: &TrajectoryConfig, x: &DVector<f64>, evaluation: &Evaluation, iter: usize) -> Result<Stepped> {
    let b = barrier(evaluation);
    if !b.is_finite() {
        return Err(Error::NonFinite(Component::Barrier));
    }
    let d = direction_multi(evaluation, &b, &config.direction_params())?;
    let h = config.step_size;
    let next = if config.use_normalized_field {
        x + h * &d.s_unit
    } else {
        x + h * &d.s
    };
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(Component::Barrier));
    }
    Ok(Stepped {
        next,
        record: TraceRecord {
            iter,
            t: iter as f64 * h,
            x: x.clone(),
            f: evaluation.f_value,
            g_max: evaluation.max_g,
            cos_theta: d.cos_theta,
            s_norm: d.s_norm,
            branch: d.branch,
        },
    })
}

/// One Euler step from a strictly feasible `x_k`. The record is stamped
/// with iteration `iter`.
pub fn step(
    problem: &Problem,
    config: &TrajectoryConfig,
    x_k: &DVector<f64>,
    iter: usize,
) -> Result<(DVector<f64>, TraceRecord)> {
    config.validate()?;
    let e = evaluate(problem, x_k)?;
    if !e.feasible {
        return Err(Error::InfeasibleStart { max_g: e.max_g });
    }
    let s = advance(config, x_k, &e, iter)?;
    Ok((s.next, s.record))
}

/// Integrates the trajectory from a strictly feasible `x0`.
pub fn solve(problem: &Problem, config: &TrajectoryConfig, x0: &DVector<f64>) -> Result<SolveResult> {
    config.validate()?;
    let first = evaluate(problem, x0)?;
    if !first.feasible {
        return Err(Error::InfeasibleStart { max_g: first.max_g });
    }

    let mut trace: Vec<TraceRecord> = Vec::new();
    let mut x = x0.clone();
    let mut current = Ok(first);
    let mut last_feasible: (DVector<f64>, f64) = (x0.clone(), f64::NAN);

    for iter in 0..=config.max_iters {
        let e = match current {
            Ok(e) => e,
            Err(err) => return Ok(failure(last_feasible, trace, iter, err)),
        };
        if !e.feasible {
            let cos_theta_at_boundary = trace.last().and_then(|r| r.cos_theta);
            let (point, f_final) = match config.boundary_policy {
                BoundaryPolicy::StopAtFirstViolation => (x.clone(), e.f_value),
                BoundaryPolicy::ClampToLastFeasible => last_feasible,
            };
            return Ok(SolveResult {
                status: Status::BoundaryHit,
                x_final: point.clone(),
                f_final,
                boundary_point: Some(point),
                crossing_point: Some(x),
                cos_theta_at_boundary,
                iterations: iter,
                failure: None,
                trace,
            });
        }
        last_feasible = (x.clone(), e.f_value);
        if iter == config.max_iters {
            break;
        }
        match advance(config, &x, &e, iter) {
            Ok(stepped) => {
                trace.push(stepped.record);
                x = stepped.next;
            }
            Err(Error::CriticalPoint { .. }) => {
                return Ok(SolveResult {
                    status: Status::CriticalPoint,
                    x_final: x,
                    f_final: e.f_value,
                    boundary_point: None,
                    crossing_point: None,
                    cos_theta_at_boundary: None,
                    iterations: iter,
                    failure: None,
                    trace,
                });
            }
            Err(err) => return Ok(failure(last_feasible, trace, iter, err)),
        }
        current = evaluate(problem, &x);
    }

    let (x_final, f_final) = last_feasible;
    Ok(SolveResult {
        status: Status::MaxIters,
        x_final,
        f_final,
        boundary_point: None,
        crossing_point: None,
        cos_theta_at_boundary: None,
        iterations: config.max_iters,
        failure: None,
        trace,
    })
}

fn failure(last_feasible: (DVector<f64>, f64), trace: Vec<TraceRecord>, iterations: usize, err: Error) -> SolveResult {
    SolveResult {
        status: Status::EvaluationFailure,
        x_final: last_feasible.0,
        f_final: last_feasible.1,
        boundary_point: None,
        crossing_point: None,
        cos_theta_at_boundary: None,
        iterations,
        failure: Some(err),
        trace,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaScanRow {
    pub zeta: f64,
    /// Steps until the boundary was crossed; `None` if the run ended otherwise.
    pub iterations_to_boundary: Option<usize>,
}

/// Runs [`solve`] once per `zeta`, keeping everything else from `base_config`.
pub fn scan_zeta(
    problem: &Problem,
    base_config: &TrajectoryConfig,
    x0: &DVector<f64>,
    zetas: &[f64],
) -> Result<Vec<ZetaScanRow>> {
    zetas
        .iter()
        .map(|&zeta| {
            let config = TrajectoryConfig {
                zeta,
                ..base_config.clone()
            };
            let r = solve(problem, &config, x0)?;
            Ok(ZetaScanRow {
                zeta,
                iterations_to_boundary: (r.status == Status::BoundaryHit).then_some(r.iterations),
            })
        })
        .collect()
}
