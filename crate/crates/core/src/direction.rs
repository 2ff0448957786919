//! Search-direction field.
//!
//! For a single constraint the field is
//!
//! ```text
//! s = -grad f / |grad f| - zeta * grad g / |grad g|,   0 <= zeta < 1
//! ```
//!
//! and for several constraints `grad g` is replaced by the barrier gradient
//! `grad Phi`, falling back to plain `-grad f` where `grad Phi` vanishes.
//! [`msdm_direction`] builds the same direction from the two right singular
//! vectors of the stacked normalized gradients, with `zeta = (c-1)/(c+1)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problem::{BarrierState, Evaluation};

/// Relative scale for treating a gradient norm as zero.
pub const DEFAULT_GRAD_ZERO_TOL: f64 = 1e-12;

const PARALLEL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionParams {
    pub zeta: f64,
    /// A gradient norm at or below `grad_zero_tol * (1 + |grad f|)` counts as zero.
    pub grad_zero_tol: f64,
}

impl DirectionParams {
    pub fn new(zeta: f64) -> Result<Self> {
        let p = Self {
            zeta,
            grad_zero_tol: DEFAULT_GRAD_ZERO_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.zeta) {
            return Err(Error::InvalidInput(format!(
                "zeta must lie in [0, 1), got {}",
                self.zeta
            )));
        }
        if self.grad_zero_tol.is_nan() || self.grad_zero_tol <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "grad_zero_tol must be positive, got {}",
                self.grad_zero_tol
            )));
        }
        Ok(())
    }

    /// `1 - zeta`, the error measure of the boundary-hit point.
    pub fn epsilon(&self) -> f64 {
        1.0 - self.zeta
    }

    fn zero_threshold(&self, grad_f_norm: f64) -> f64 {
        self.grad_zero_tol * (1.0 + grad_f_norm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Normalized objective and barrier gradients.
    BarrierBranch,
    /// `grad Phi` vanished; the field is `-grad f`.
    SafeguardBranch,
    /// Normalized objective and single constraint gradient.
    SingleConstraint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionResult {
    pub s: DVector<f64>,
    /// `s / |s|`, or zero if `|s|` is numerically zero.
    pub s_unit: DVector<f64>,
    pub s_norm: f64,
    pub branch: Branch,
    /// Cosine of the angle between `grad f` and `grad g` (or `grad Phi`).
    /// `None` on the safeguard branch.
    pub cos_theta: Option<f64>,
}

/// Cosine between two nonzero vectors, clamped to `[-1, 1]`.
pub fn cosine(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a.dot(b) / (a.norm() * b.norm())).clamp(-1.0, 1.0)
}

fn combine(
    grad_f: &DVector<f64>,
    f_norm: f64,
    grad_c: &DVector<f64>,
    c_norm: f64,
    params: &DirectionParams,
    branch: Branch,
) -> DirectionResult {
    let nf = grad_f / f_norm;
    let nc = grad_c / c_norm;
    let s = -&nf - params.zeta * &nc;
    let s_norm = s.norm();
    // At zeta = 0 the field is already the unit vector -grad f/|grad f|.
    let s_unit = if params.zeta == 0.0 {
        s.clone()
    } else if s_norm > params.zero_threshold(f_norm) {
        &s / s_norm
    } else {
        DVector::zeros(s.len())
    };
    DirectionResult {
        s,
        s_unit,
        s_norm,
        branch,
        cos_theta: Some(nf.dot(&nc).clamp(-1.0, 1.0)),
    }
}

/// Field for one constraint: `-grad f/|grad f| - zeta grad g/|grad g|`.
pub fn direction_single(
    grad_f: &DVector<f64>,
    grad_g: &DVector<f64>,
    params: &DirectionParams,
) -> Result<DirectionResult> {
    params.validate()?;
    if grad_f.len() != grad_g.len() {
        return Err(Error::DimensionMismatch {
            expected: grad_f.len(),
            got: grad_g.len(),
        });
    }
    let f_norm = grad_f.norm();
    let tol = params.zero_threshold(f_norm);
    if f_norm <= tol {
        return Err(Error::CriticalPoint { norm: f_norm });
    }
    let g_norm = grad_g.norm();
    if g_norm <= tol {
        return Err(Error::ConstraintCritical { norm: g_norm });
    }
    Ok(combine(
        grad_f,
        f_norm,
        grad_g,
        g_norm,
        params,
        Branch::SingleConstraint,
    ))
}

/// Barrier-based field for any number of constraints. Requires a strictly
/// feasible evaluation.
pub fn direction_multi(
    evaluation: &Evaluation,
    barrier: &BarrierState,
    params: &DirectionParams,
) -> Result<DirectionResult> {
    params.validate()?;
    if !evaluation.feasible || !barrier.defined {
        return Err(Error::InvalidInput(
            "barrier direction needs a strictly feasible point".into(),
        ));
    }
    let grad_f = &evaluation.grad_f;
    let f_norm = grad_f.norm();
    let tol = params.zero_threshold(f_norm);
    if f_norm <= tol {
        return Err(Error::CriticalPoint { norm: f_norm });
    }
    let phi_norm = barrier.grad_phi.norm();
    if phi_norm <= tol {
        let s = -grad_f;
        return Ok(DirectionResult {
            s_unit: &s / f_norm,
            s,
            s_norm: f_norm,
            branch: Branch::SafeguardBranch,
            cos_theta: None,
        });
    }
    Ok(combine(
        grad_f,
        f_norm,
        &barrier.grad_phi,
        phi_norm,
        params,
        Branch::BarrierBranch,
    ))
}

/// `(c - 1) / (c + 1)`.
pub fn zeta_from_c(c: f64) -> Result<f64> {
    if c.is_nan() || c < 1.0 || !c.is_finite() {
        return Err(Error::InvalidInput(format!("c must be a finite value >= 1, got {c}")));
    }
    Ok((c - 1.0) / (c + 1.0))
}

/// Two-mode decomposition of the normalized steepest-descent direction.
#[derive(Clone, Debug, PartialEq)]
pub struct MsdmDecomposition {
    /// Decreases `f`, increases `g`.
    pub v1: DVector<f64>,
    /// Decreases both `f` and `g`.
    pub v2: DVector<f64>,
    pub sigma1: f64,
    pub sigma2: f64,
    pub cos_alpha1: f64,
    pub cos_alpha2: f64,
    pub cos_theta: f64,
    /// `cos a1 v1 + c cos a2 v2`.
    pub s_c: DVector<f64>,
    /// Largest deviation between the closed-form modes and an explicit SVD
    /// of the sensitivity matrix (singular values, and vectors when the
    /// singular values are separated).
    pub svd_deviation: f64,
}

/// Modified search direction from the SVD of `[grad f/|grad f|; grad g/|grad g|]`.
pub fn msdm_direction(grad_f: &DVector<f64>, grad_g: &DVector<f64>, c: f64) -> Result<MsdmDecomposition> {
    zeta_from_c(c)?;
    let n = grad_f.len();
    if n != grad_g.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: grad_g.len(),
        });
    }
    let f_norm = grad_f.norm();
    let g_norm = grad_g.norm();
    if f_norm == 0.0 {
        return Err(Error::CriticalPoint { norm: 0.0 });
    }
    if g_norm == 0.0 {
        return Err(Error::ConstraintCritical { norm: 0.0 });
    }
    let nf = grad_f / f_norm;
    let ng = grad_g / g_norm;
    let cos_theta = nf.dot(&ng).clamp(-1.0, 1.0);
    if 1.0 - cos_theta.abs() <= PARALLEL_TOL {
        return Err(Error::DegenerateGeometry { cos_theta });
    }

    let v1 = (-&nf + &ng) / (2.0 - 2.0 * cos_theta).sqrt();
    let v2 = (-&nf - &ng) / (2.0 + 2.0 * cos_theta).sqrt();
    let cos_alpha1 = ((1.0 - cos_theta) / 2.0).sqrt();
    let cos_alpha2 = ((1.0 + cos_theta) / 2.0).sqrt();
    let sigma1 = (1.0 - cos_theta).sqrt();
    let sigma2 = (1.0 + cos_theta).sqrt();
    let s_c = cos_alpha1 * &v1 + c * cos_alpha2 * &v2;

    let svd_deviation = svd_check(&nf, &ng, &v1, &v2, sigma1, sigma2);

    Ok(MsdmDecomposition {
        v1,
        v2,
        sigma1,
        sigma2,
        cos_alpha1,
        cos_alpha2,
        cos_theta,
        s_c,
        svd_deviation,
    })
}

fn svd_check(
    nf: &DVector<f64>,
    ng: &DVector<f64>,
    v1: &DVector<f64>,
    v2: &DVector<f64>,
    sigma1: f64,
    sigma2: f64,
) -> f64 {
    let n = nf.len();
    let m = DMatrix::from_fn(2, n, |i, j| if i == 0 { nf[j] } else { ng[j] });
    let svd = m.svd(false, true);
    let v_t = match svd.v_t {
        Some(v_t) => v_t,
        None => return f64::INFINITY,
    };
    let mut sv: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, v_t.row(k).transpose()))
        .collect();
    sv.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut closed = [(sigma1, v1), (sigma2, v2)];
    closed.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut deviation: f64 = 0.0;
    for ((s_svd, _), (s_cf, _)) in sv.iter().zip(closed.iter()) {
        deviation = deviation.max((s_svd - s_cf).abs());
    }
    // Vectors are only unique (up to sign) when the singular values differ.
    if (sigma1 - sigma2).abs() > 1e-6 {
        let steepest = -nf;
        for ((_, v_svd), (_, v_cf)) in sv.iter().zip(closed.iter()) {
            let sign = if v_svd.dot(&steepest) >= 0.0 { 1.0 } else { -1.0 };
            deviation = deviation.max((sign * v_svd - *v_cf).amax());
        }
    }
    deviation
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn params(zeta: f64) -> DirectionParams {
        DirectionParams::new(zeta).unwrap()
    }

    #[test]
    fn single_opposing_gradients() {
        let d = direction_single(&v(&[0.0, 1.0]), &v(&[0.0, -1.0]), &params(0.9)).unwrap();
        assert_relative_eq!(d.s, v(&[0.0, -0.1]), epsilon = 1e-15);
        assert_eq!(d.cos_theta, Some(-1.0));
        assert_eq!(d.branch, Branch::SingleConstraint);
    }

    #[test]
    fn single_matches_closed_form_field_of_linear_toy() {
        // s = -(x1, x2 - zeta r) / r at x = (3, 4)
        let d = direction_single(&v(&[3.0, 4.0]), &v(&[0.0, -1.0]), &params(0.5)).unwrap();
        assert_relative_eq!(d.s, v(&[-0.6, -0.3]), epsilon = 1e-15);
        assert_relative_eq!(d.cos_theta.unwrap(), -0.8, epsilon = 1e-15);
    }

    #[test]
    fn single_zeta_zero_is_normalized_steepest_descent() {
        let gf = v(&[1.5, -2.0, 0.25]);
        let d = direction_single(&gf, &v(&[0.3, 0.1, 7.0]), &params(0.0)).unwrap();
        let expected = -(&gf / gf.norm());
        assert_eq!(d.s, expected);
        assert_eq!(d.s_unit, expected);
    }

    #[test]
    fn single_signals_vanishing_gradients() {
        let p = params(0.5);
        assert!(matches!(
            direction_single(&v(&[0.0, 0.0]), &v(&[1.0, 0.0]), &p),
            Err(Error::CriticalPoint { .. })
        ));
        assert!(matches!(
            direction_single(&v(&[1.0, 0.0]), &v(&[0.0, 1e-15]), &p),
            Err(Error::ConstraintCritical { .. })
        ));
    }

    #[test]
    fn params_reject_zeta_out_of_range() {
        assert!(DirectionParams::new(1.0).is_err());
        assert!(DirectionParams::new(-0.1).is_err());
        assert!(DirectionParams::new(f64::NAN).is_err());
        assert_relative_eq!(params(0.98).epsilon(), 0.02, epsilon = 1e-15);
    }

    fn eval_with(grad_f: &[f64], g: &[f64], grad_g: &[&[f64]]) -> (Evaluation, BarrierState) {
        let n = grad_f.len();
        let g_values = v(g);
        let max_g = g_values.max();
        let e = Evaluation {
            f_value: 0.0,
            grad_f: v(grad_f),
            g_values,
            grad_g: DMatrix::from_fn(grad_g.len(), n, |i, j| grad_g[i][j]),
            feasible: max_g < 0.0,
            max_g,
        };
        let b = crate::problem::barrier(&e);
        (e, b)
    }

    #[test]
    fn multi_with_one_constraint_matches_single() {
        let (e, b) = eval_with(&[1.0, 2.0], &[-0.3], &[&[0.5, -1.0]]);
        let p = params(0.7);
        let multi = direction_multi(&e, &b, &p).unwrap();
        let single = direction_single(&e.grad_f, &v(&[0.5, -1.0]), &p).unwrap();
        assert_relative_eq!(multi.s, single.s, epsilon = 1e-14);
        assert_relative_eq!(multi.cos_theta.unwrap(), single.cos_theta.unwrap(), epsilon = 1e-14);
        assert_eq!(multi.branch, Branch::BarrierBranch);
    }

    #[test]
    fn multi_safeguard_when_barrier_gradient_vanishes() {
        // Two opposite constraints with equal slack cancel in grad Phi.
        let (e, b) = eval_with(&[1.0, 0.0], &[-1.0, -1.0], &[&[0.0, 1.0], &[0.0, -1.0]]);
        let d = direction_multi(&e, &b, &params(0.9)).unwrap();
        assert_eq!(d.branch, Branch::SafeguardBranch);
        assert_eq!(d.s, v(&[-1.0, 0.0]));
        assert_eq!(d.cos_theta, None);
    }

    #[test]
    fn multi_interior_point_of_linear_toy() {
        // x = (10, 20): grad f = x, grad g = (0, -1), g = -10.
        let (e, b) = eval_with(&[10.0, 20.0], &[-10.0], &[&[0.0, -1.0]]);
        let d = direction_multi(&e, &b, &params(0.98)).unwrap();
        let nf = v(&[10.0, 20.0]) / 500f64.sqrt();
        let raw = -nf - 0.98 * v(&[0.0, -1.0]);
        let expected = &raw / raw.norm();
        assert_relative_eq!(d.s_unit, expected, epsilon = 1e-12);
    }

    #[test]
    fn multi_requires_feasibility_and_nonzero_objective_gradient() {
        let (e, b) = eval_with(&[1.0, 0.0], &[0.5], &[&[0.0, 1.0]]);
        assert!(direction_multi(&e, &b, &params(0.5)).is_err());
        let (e, b) = eval_with(&[0.0, 0.0], &[-0.5], &[&[0.0, 1.0]]);
        assert!(matches!(
            direction_multi(&e, &b, &params(0.5)),
            Err(Error::CriticalPoint { .. })
        ));
    }

    #[test]
    fn zeta_from_c_values() {
        assert_eq!(zeta_from_c(1.0).unwrap(), 0.0);
        assert_eq!(zeta_from_c(3.0).unwrap(), 0.5);
        assert_relative_eq!(zeta_from_c(199.0).unwrap(), 0.99, epsilon = 1e-15);
        assert!(zeta_from_c(0.5).is_err());
    }

    #[test]
    fn msdm_c_one_is_steepest_descent() {
        let gf = v(&[1.0, 2.0, -0.5]);
        let d = msdm_direction(&gf, &v(&[0.3, -1.0, 2.0]), 1.0).unwrap();
        assert_relative_eq!(d.s_c, -(&gf / gf.norm()), epsilon = 1e-14);
        assert!(d.svd_deviation < 1e-10);
    }

    #[test]
    fn msdm_orthogonal_gradients() {
        let d = msdm_direction(&v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 1.0).unwrap();
        let half = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(d.cos_alpha1, half, epsilon = 1e-15);
        assert_relative_eq!(d.cos_alpha2, half, epsilon = 1e-15);
        assert!(d.svd_deviation < 1e-10);
    }

    #[test]
    fn msdm_rejects_parallel_gradients() {
        assert!(matches!(
            msdm_direction(&v(&[1.0, 0.0]), &v(&[-2.0, 0.0]), 2.0),
            Err(Error::DegenerateGeometry { .. })
        ));
        assert!(matches!(
            msdm_direction(&v(&[1.0, 1.0]), &v(&[3.0, 3.0]), 2.0),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn msdm_modes_have_documented_roles() {
        let gf = v(&[0.2, 1.0, -0.4, 0.7]);
        let gg = v(&[-1.0, 0.5, 0.3, 0.1]);
        let d = msdm_direction(&gf, &gg, 3.0).unwrap();
        assert!(d.v1.dot(&d.v2).abs() <= 1e-10);
        assert_relative_eq!(d.v1.norm(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(d.v2.norm(), 1.0, epsilon = 1e-12);
        assert!(d.v1.dot(&gf) < 0.0 && d.v1.dot(&gg) > 0.0);
        assert!(d.v2.dot(&gf) < 0.0 && d.v2.dot(&gg) < 0.0);
        assert!(d.svd_deviation < 1e-10);
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = DVector<f64>> {
        prop::collection::vec(-10.0..10.0f64, n)
            .prop_filter("nonzero", |xs| xs.iter().map(|x| x * x).sum::<f64>() > 1e-6)
            .prop_map(DVector::from_vec)
    }

    fn pair_strategy() -> impl Strategy<Value = (DVector<f64>, DVector<f64>)> {
        prop_oneof![Just(2usize), Just(3), Just(10)]
            .prop_flat_map(|n| (vec_strategy(n), vec_strategy(n)))
            .prop_filter("not parallel", |(a, b)| cosine(a, b).abs() < 1.0 - 1e-9)
    }

    proptest! {
        #[test]
        fn descent_identity((gf, gg) in pair_strategy(), zeta in 0.0..0.999f64) {
            let d = direction_single(&gf, &gg, &params(zeta)).unwrap();
            let cos = d.cos_theta.unwrap();
            let lhs = d.s.dot(&gf);
            let rhs = -gf.norm() * (1.0 + zeta * cos);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + gf.norm()));
            prop_assert!(lhs <= -gf.norm() * (1.0 - zeta) + 1e-10 * (1.0 + gf.norm()));
            prop_assert!(lhs < 0.0);
        }

        #[test]
        fn constraint_deformation_sign((gf, gg) in pair_strategy(), zeta in 0.0..0.999f64) {
            let d = direction_single(&gf, &gg, &params(zeta)).unwrap();
            let cos = d.cos_theta.unwrap();
            let lhs = d.s.dot(&gg);
            let rhs = -gg.norm() * (zeta + cos);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + gg.norm()));
            if (cos + zeta).abs() > 1e-9 {
                prop_assert_eq!(lhs < 0.0, cos > -zeta);
            }
        }

        #[test]
        fn scale_invariance((gf, gg) in pair_strategy(), a in 0.01..100.0f64, b in 0.01..100.0f64, zeta in 0.0..0.999f64) {
            let p = params(zeta);
            let d0 = direction_single(&gf, &gg, &p).unwrap();
            let d1 = direction_single(&(a * &gf), &(b * &gg), &p).unwrap();
            prop_assert!((d0.s - d1.s).amax() <= 1e-12);
        }

        #[test]
        fn unit_direction_has_unit_or_zero_norm((gf, gg) in pair_strategy(), zeta in 0.0..0.999f64) {
            let d = direction_single(&gf, &gg, &params(zeta)).unwrap();
            let n = d.s_unit.norm();
            prop_assert!((n - 1.0).abs() <= 1e-12 || n == 0.0);
        }

        #[test]
        fn msdm_matches_zeta_form((gf, gg) in pair_strategy(), c in 1.0..100.0f64) {
            let m = msdm_direction(&gf, &gg, c).unwrap();
            let d = direction_single(&gf, &gg, &params(zeta_from_c(c).unwrap())).unwrap();
            prop_assert!(cosine(&m.s_c, &d.s) >= 1.0 - 1e-10);
            prop_assert!(m.svd_deviation <= 1e-8);
        }
    }
}
