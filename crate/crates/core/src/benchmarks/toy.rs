//! Two-dimensional problems with closed-form geometry.
//!
//! `toy2d_linear`: minimize `(x1^2 + x2^2)/2` subject to `10 - x2 <= 0`.
//! Its trajectories satisfy
//! `x2 + sqrt(x1^2 + x2^2) = 2 xbar2 |x1/x1_0|^(1-zeta)` with
//! `xbar2 = (x2_0 + |x_0|)/2`.
//!
//! `toy2d_nonconvex`: minimize `(x1-2)^2 + (x2-2)^2` subject to
//! `3 - (x1-3)^2/10 - x2 <= 0`.

use nalgebra::{DMatrix, DVector};

use crate::problem::{Problem, SmoothFn};

pub fn toy2d_linear() -> Problem {
    let f = SmoothFn::new(|x: &DVector<f64>| (0.5 * x.norm_squared(), x.clone()))
        .with_hessian(|x: &DVector<f64>| DMatrix::identity(x.len(), x.len()));
    let g = SmoothFn::affine(DVector::from_vec(vec![0.0, -1.0]), 10.0);
    Problem::new("toy2d_linear", 2, f, vec![g]).expect("static problem definition")
}

pub fn toy2d_nonconvex() -> Problem {
    let f = SmoothFn::new(|x: &DVector<f64>| {
        let (a, b) = (x[0] - 2.0, x[1] - 2.0);
        (a * a + b * b, DVector::from_vec(vec![2.0 * a, 2.0 * b]))
    })
    .with_hessian(|_: &DVector<f64>| DMatrix::from_diagonal_element(2, 2, 2.0));
    let g = SmoothFn::new(|x: &DVector<f64>| {
        let a = x[0] - 3.0;
        (-0.1 * a * a - x[1] + 3.0, DVector::from_vec(vec![-0.2 * a, -1.0]))
    })
    .with_hessian(|_: &DVector<f64>| DMatrix::from_diagonal(&DVector::from_vec(vec![-0.2, 0.0])));
    Problem::new("toy2d_nonconvex", 2, f, vec![g]).expect("static problem definition")
}

/// `(x2_0 + |x_0|) / 2`, the height at which trajectories from `x0` meet
/// the central path as `zeta -> 1`.
pub fn xbar2(x0: &DVector<f64>) -> f64 {
    0.5 * (x0[1] + x0.norm())
}

/// Largest normalized defect `|x2 + |x| - 2 xbar2 |x1/x1_0|^(1-zeta)| / xbar2`
/// over `path`. Points with `x1 = 0` are outside the relation's domain; the
/// caller should drop them.
pub fn analytic_trajectory_residual(path: &[DVector<f64>], x0: &DVector<f64>, zeta: f64) -> f64 {
    let xb = xbar2(x0);
    path.iter()
        .map(|x| {
            let rhs = 2.0 * xb * (x[0] / x0[0]).abs().powf(1.0 - zeta);
            (x[1] + x.norm() - rhs).abs() / xb
        })
        .fold(0.0, f64::max)
}

/// Point of the exact trajectory through `x0` at abscissa `x1`
/// (same sign as `x0[0]`).
pub fn trajectory_point(x0: &DVector<f64>, zeta: f64, x1: f64) -> DVector<f64> {
    // x2 + sqrt(x1^2 + x2^2) = k  =>  x2 = (k^2 - x1^2) / (2k)
    let k = 2.0 * xbar2(x0) * (x1 / x0[0]).abs().powf(1.0 - zeta);
    DVector::from_vec(vec![x1, (k * k - x1 * x1) / (2.0 * k)])
}

/// Path point with the largest `x2`.
pub fn turning_point(path: &[DVector<f64>]) -> Option<&DVector<f64>> {
    path.iter().max_by(|a, b| a[1].total_cmp(&b[1]))
}

/// Turning point as given by the closed-form estimates
/// `|x1| = (xbar2/zeta) sqrt(1 - zeta^2)` and
/// `x2^zeta = 2/(1+zeta) xbar2/|x1_0|^(1-zeta) (sqrt(1-zeta^2)/zeta)^(1-zeta)`.
/// Returns `(|x1|, x2)`.
pub fn published_turning_point(x0: &DVector<f64>, zeta: f64) -> (f64, f64) {
    let xb = xbar2(x0);
    let q = (1.0 - zeta * zeta).sqrt() / zeta;
    let x1 = xb * q;
    let rhs = 2.0 / (1.0 + zeta) * xb / x0[0].abs().powf(1.0 - zeta) * q.powf(1.0 - zeta);
    (x1, rhs.powf(1.0 / zeta))
}

/// Exact maximizer of `x2` along the trajectory through `x0`. At the
/// turning point `x2 = zeta |x|`, which gives `|x1| = x2 sqrt(1-zeta^2)/zeta`
/// and `x2^zeta = 2 zeta/(1+zeta) xbar2/|x1_0|^(1-zeta) (sqrt(1-zeta^2)/zeta)^(1-zeta)`.
/// Returns `(|x1|, x2)`.
pub fn exact_turning_point(x0: &DVector<f64>, zeta: f64) -> (f64, f64) {
    let xb = xbar2(x0);
    let q = (1.0 - zeta * zeta).sqrt() / zeta;
    let rhs = 2.0 * zeta / (1.0 + zeta) * xb / x0[0].abs().powf(1.0 - zeta) * q.powf(1.0 - zeta);
    let x2 = rhs.powf(1.0 / zeta);
    (x2 * q, x2)
}

/// Central-path point of `toy2d_nonconvex` with abscissa `x1`, where the
/// gradients of `f` and `g` are antiparallel. Returns `None` when no such
/// point lies in the feasible set.
///
/// For fixed `x1` the cross product of the two gradients is affine in `x2`,
/// so the point is found in closed form.
pub fn nonconvex_central_point(x1: f64) -> Option<DVector<f64>> {
    // grad f = 2 (x1-2, x2-2), grad g = (-0.2 (x1-3), -1);
    // the cross product vanishes when x2 - 2 = 5 (x1-2)/(x1-3)
    let u = x1 - 3.0;
    if u.abs() < 1e-14 {
        return None;
    }
    let x2 = 2.0 + 5.0 * (x1 - 2.0) / u;
    let x = DVector::from_vec(vec![x1, x2]);
    let gf = DVector::from_vec(vec![2.0 * (x1 - 2.0), 2.0 * (x2 - 2.0)]);
    let gg = DVector::from_vec(vec![-0.2 * u, -1.0]);
    let g = -0.1 * u * u - x2 + 3.0;
    (g < 0.0 && gf.dot(&gg) < 0.0).then_some(x)
}
