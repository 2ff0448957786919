//! Problem representation and pointwise evaluation.
//!
//! A [`Problem`] is `minimize f(x) subject to g_i(x) <= 0`, with every
//! function supplied as a callable returning its value and gradient. The
//! logarithmic barrier `Phi(x) = -sum log(-g_i(x))` is derived from a joint
//! [`Evaluation`] by [`barrier`].

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Component, Error, Result};

type ValueGradFn = dyn Fn(&DVector<f64>) -> (f64, DVector<f64>) + Send + Sync;
type HessianFn = dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync;

/// A twice differentiable scalar function with an analytic (or finite
/// difference) gradient and an optional analytic Hessian.
#[derive(Clone)]
pub struct SmoothFn {
    eval: Arc<ValueGradFn>,
    hessian: Option<Arc<HessianFn>>,
}

impl SmoothFn {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&DVector<f64>) -> (f64, DVector<f64>) + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            hessian: None,
        }
    }

    /// Wraps a value-only function; the gradient comes from central
    /// differences with step `1e-6 * (1 + |x_i|)`.
    pub fn from_value<F>(f: F) -> Self
    where
        F: Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        Self::new(move |x| {
            let value = f(x);
            (value, central_gradient(&f, x))
        })
    }

    /// `a^T x + b`, with a zero Hessian.
    pub fn affine(a: DVector<f64>, b: f64) -> Self {
        let n = a.len();
        let grad = a.clone();
        Self::new(move |x| (a.dot(x) + b, grad.clone())).with_hessian(move |_| DMatrix::zeros(n, n))
    }

    pub fn with_hessian<H>(mut self, h: H) -> Self
    where
        H: Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(h));
        self
    }

    pub fn value_and_gradient(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        (self.eval)(x)
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        (self.eval)(x).0
    }

    pub fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        self.hessian.as_ref().map(|h| h(x))
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian.is_some()
    }
}

impl fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFn")
            .field("hessian", &self.hessian.is_some())
            .finish()
    }
}

/// Central-difference gradient with per-coordinate step `1e-6 * (1 + |x_i|)`.
pub fn central_gradient<F>(f: &F, x: &DVector<f64>) -> DVector<f64>
where
    F: Fn(&DVector<f64>) -> f64 + ?Sized,
{
    let mut probe = x.clone();
    DVector::from_iterator(
        x.len(),
        (0..x.len()).map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        }),
    )
}

/// `minimize f(x)` subject to `g_i(x) <= 0`, `i = 1..m`.
#[derive(Clone, Debug)]
pub struct Problem {
    name: String,
    n_dims: usize,
    objective: SmoothFn,
    constraints: Vec<SmoothFn>,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        n_dims: usize,
        objective: SmoothFn,
        constraints: Vec<SmoothFn>,
    ) -> Result<Self> {
        if n_dims == 0 {
            return Err(Error::InvalidInput("problem needs at least one variable".into()));
        }
        if constraints.is_empty() {
            return Err(Error::InvalidInput("problem needs at least one constraint".into()));
        }
        Ok(Self {
            name: name.into(),
            n_dims,
            objective,
            constraints,
        })
    }

    /// Appends box bounds as inequality constraints `lo_i - x_i <= 0` and
    /// `x_i - hi_i <= 0`. Infinite bounds are skipped.
    pub fn with_bounds(mut self, lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != self.n_dims || upper.len() != self.n_dims {
            return Err(Error::DimensionMismatch {
                expected: self.n_dims,
                got: lower.len().min(upper.len()),
            });
        }
        for (i, &lo) in lower.iter().enumerate() {
            if lo.is_finite() {
                let a = -DVector::from_fn(self.n_dims, |j, _| if i == j { 1.0 } else { 0.0 });
                self.constraints.push(SmoothFn::affine(a, lo));
            }
        }
        for (i, &hi) in upper.iter().enumerate() {
            if hi.is_finite() {
                let a = DVector::from_fn(self.n_dims, |j, _| if i == j { 1.0 } else { 0.0 });
                self.constraints.push(SmoothFn::affine(a, -hi));
            }
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &SmoothFn {
        &self.objective
    }

    pub fn constraints(&self) -> &[SmoothFn] {
        &self.constraints
    }

    pub fn function(&self, which: Component) -> Option<&SmoothFn> {
        match which {
            Component::Objective => Some(&self.objective),
            Component::Constraint(i) => self.constraints.get(i),
            Component::Barrier => None,
        }
    }

    pub(crate) fn check_dims(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.n_dims {
            return Err(Error::DimensionMismatch {
                expected: self.n_dims,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// One joint pass over the objective and all constraints at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub f_value: f64,
    pub grad_f: DVector<f64>,
    pub g_values: DVector<f64>,
    /// `m x n`, row `i` is the gradient of constraint `i`.
    pub grad_g: DMatrix<f64>,
    /// All `g_i < 0`.
    pub feasible: bool,
    /// `max_i g_i`.
    pub max_g: f64,
}

impl Evaluation {
    pub fn constraint_gradient(&self, i: usize) -> DVector<f64> {
        self.grad_g.row(i).transpose()
    }
}

/// Evaluates objective and constraints at `x`. Infeasible points are
/// reported through [`Evaluation::feasible`], not rejected.
pub fn evaluate(problem: &Problem, x: &DVector<f64>) -> Result<Evaluation> {
    problem.check_dims(x)?;
    let n = problem.n_dims;
    let (f_value, grad_f) = problem.objective.value_and_gradient(x);
    check_finite(f_value, &grad_f, n, Component::Objective)?;

    let m = problem.constraints.len();
    let mut g_values = DVector::zeros(m);
    let mut grad_g = DMatrix::zeros(m, n);
    for (i, c) in problem.constraints.iter().enumerate() {
        let (g, dg) = c.value_and_gradient(x);
        check_finite(g, &dg, n, Component::Constraint(i))?;
        g_values[i] = g;
        grad_g.set_row(i, &dg.transpose());
    }
    let max_g = g_values.max();
    Ok(Evaluation {
        f_value,
        grad_f,
        g_values,
        grad_g,
        feasible: max_g < 0.0,
        max_g,
    })
}

fn check_finite(value: f64, grad: &DVector<f64>, n: usize, which: Component) -> Result<()> {
    if grad.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: grad.len(),
        });
    }
    if !value.is_finite() || grad.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(which));
    }
    Ok(())
}

/// Logarithmic barrier value and gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct BarrierState {
    pub phi: f64,
    pub grad_phi: DVector<f64>,
    /// False when some `g_i >= 0`; `phi` and `grad_phi` are then meaningless.
    pub defined: bool,
}

impl BarrierState {
    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.grad_phi.iter().all(|v| v.is_finite())
    }
}

/// `Phi = -sum log(-g_i)`, `grad Phi = sum grad g_i / (-g_i)`.
pub fn barrier(evaluation: &Evaluation) -> BarrierState {
    let n = evaluation.grad_f.len();
    if !evaluation.feasible {
        return BarrierState {
            phi: f64::INFINITY,
            grad_phi: DVector::from_element(n, f64::NAN),
            defined: false,
        };
    }
    let mut phi = 0.0;
    let mut grad_phi = DVector::zeros(n);
    for (i, &g) in evaluation.g_values.iter().enumerate() {
        let slack = -g;
        phi -= slack.ln();
        for j in 0..n {
            grad_phi[j] += evaluation.grad_g[(i, j)] / slack;
        }
    }
    BarrierState {
        phi,
        grad_phi,
        defined: true,
    }
}

/// `sum [hess g_i / (-g_i) + grad g_i grad g_i^T / g_i^2]`. Needs every
/// constraint Hessian; returns `None` if one is missing.
pub fn barrier_hessian(problem: &Problem, evaluation: &Evaluation, x: &DVector<f64>) -> Option<DMatrix<f64>> {
    let n = problem.n_dims;
    let mut h = DMatrix::zeros(n, n);
    for (i, c) in problem.constraints.iter().enumerate() {
        let g = evaluation.g_values[i];
        let dg = evaluation.constraint_gradient(i);
        h += c.hessian(x)? / (-g) + (&dg * dg.transpose()) / (g * g);
    }
    Some(h)
}
