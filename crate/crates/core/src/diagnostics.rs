//! Centrality, first-order (KKT) and second-order (relative convexity)
//! analysis, and the closed-form solution of the linearized local model.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::direction::cosine;
use crate::error::{Component, Error, Result};
use crate::problem::{barrier, barrier_hessian, evaluate, BarrierState, Evaluation, Problem};

/// Position of a point relative to the cone neighborhood
/// `{x : cos theta < -mu}` of the central path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralityReport {
    pub cos_theta: f64,
    pub mu: f64,
    pub in_mu_neighborhood: bool,
    /// `1 - zeta`.
    pub epsilon: f64,
}

pub fn centrality(grad_f: &DVector<f64>, grad_dir: &DVector<f64>, zeta: f64, mu: f64) -> Result<CentralityReport> {
    if grad_f.norm() == 0.0 || grad_dir.norm() == 0.0 {
        return Err(Error::InvalidInput("centrality needs nonzero gradients".into()));
    }
    let cos_theta = cosine(grad_f, grad_dir);
    Ok(CentralityReport {
        cos_theta,
        mu,
        in_mu_neighborhood: cos_theta < -mu,
        epsilon: 1.0 - zeta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktReport {
    /// `|grad f| / |grad g|` for one constraint. With several constraints
    /// this is the barrier weight `|grad f| / |grad Phi|`, not a
    /// per-constraint multiplier.
    pub lambda_star: f64,
    /// `|grad f + lambda_star grad g|` (or with `grad Phi`).
    pub residual_norm: f64,
    /// `|grad f/|grad f| + grad g/|grad g||`; equals `sqrt(2 + 2 cos theta)`.
    pub normalized_residual: f64,
    pub cos_theta: f64,
    /// `max_i g_i`.
    pub g_active_value: f64,
}

/// First-order report at an evaluated point. One constraint uses its own
/// gradient (valid on and past the boundary); several constraints use the
/// barrier gradient and need a strictly feasible point.
pub fn kkt_report(evaluation: &Evaluation, barrier: &BarrierState) -> Result<KktReport> {
    let grad_dir = if evaluation.g_values.len() == 1 {
        evaluation.constraint_gradient(0)
    } else {
        if !barrier.defined {
            return Err(Error::InvalidInput(
                "barrier gradient undefined outside the feasible set".into(),
            ));
        }
        barrier.grad_phi.clone()
    };
    let grad_f = &evaluation.grad_f;
    let f_norm = grad_f.norm();
    let d_norm = grad_dir.norm();
    if f_norm == 0.0 || d_norm == 0.0 {
        return Err(Error::InvalidInput("kkt report needs nonzero gradients".into()));
    }
    let lambda_star = f_norm / d_norm;
    let normalized_residual = (grad_f / f_norm + &grad_dir / d_norm).norm();
    Ok(KktReport {
        lambda_star,
        residual_norm: (grad_f + lambda_star * &grad_dir).norm(),
        normalized_residual,
        cos_theta: cosine(grad_f, &grad_dir),
        g_active_value: evaluation.max_g,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    RelativeConvex,
    Degenerate,
    NotRelativeConvex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelativeConvexityReport {
    /// `(n-1) x (n-1)` projection of `hess f/|grad f| + hess g/|grad g|`.
    pub c_matrix: DMatrix<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub classification: Convexity,
    /// Orthonormal columns spanning the complement of `grad f`.
    pub tangent_basis: DMatrix<f64>,
    pub degeneracy_tol: f64,
}

/// Orthonormal basis of the complement of `u` from one Householder
/// reflection that sends `u/|u|` to a multiple of the last axis.
pub fn tangent_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let unit = u / u.norm();
    let sign = if unit[n - 1] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = unit;
    w[n - 1] += sign;
    let h = DMatrix::identity(n, n) - (2.0 / w.norm_squared()) * &w * w.transpose();
    h.columns(0, n - 1).into_owned()
}

/// Projects onto `basis` and classifies. `degeneracy_tol` defaults to
/// `1e-8 * (1 + max |eigenvalue|)`.
pub fn relative_convexity_in_basis(
    grad_f: &DVector<f64>,
    grad_dir: &DVector<f64>,
    hess_f: &DMatrix<f64>,
    hess_dir: &DMatrix<f64>,
    basis: DMatrix<f64>,
    degeneracy_tol: Option<f64>,
) -> Result<RelativeConvexityReport> {
    let n = grad_f.len();
    if grad_dir.len() != n || hess_f.shape() != (n, n) || hess_dir.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: grad_dir.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput("relative convexity needs n >= 2".into()));
    }
    let f_norm = grad_f.norm();
    let d_norm = grad_dir.norm();
    if f_norm == 0.0 || d_norm == 0.0 {
        return Err(Error::InvalidInput("relative convexity needs nonzero gradients".into()));
    }
    let combined = hess_f / f_norm + hess_dir / d_norm;
    let c = basis.transpose() * combined * &basis;
    let c_matrix = 0.5 * (&c + c.transpose());
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(c_matrix.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let scale = eigenvalues.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let tol = degeneracy_tol.unwrap_or(1e-8 * (1.0 + scale));
    let classification = if eigenvalues.iter().any(|e| e.abs() <= tol) {
        Convexity::Degenerate
    } else if eigenvalues[0] > tol {
        Convexity::RelativeConvex
    } else {
        Convexity::NotRelativeConvex
    };
    Ok(RelativeConvexityReport {
        c_matrix,
        eigenvalues,
        classification,
        tangent_basis: basis,
        degeneracy_tol: tol,
    })
}

/// Relative convexity matrix at a (near) central-path point, using the
/// Householder tangent basis.
pub fn relative_convexity(
    grad_f: &DVector<f64>,
    grad_dir: &DVector<f64>,
    hess_f: &DMatrix<f64>,
    hess_dir: &DMatrix<f64>,
    degeneracy_tol: Option<f64>,
) -> Result<RelativeConvexityReport> {
    relative_convexity_in_basis(
        grad_f,
        grad_dir,
        hess_f,
        hess_dir,
        tangent_basis(grad_f),
        degeneracy_tol,
    )
}

/// Relative convexity of `problem` at `x`: one constraint uses `g` directly,
/// several use the barrier. Missing analytic Hessians are replaced by
/// [`hessian_fd`] when `allow_fd` is set.
pub fn relative_convexity_at(
    problem: &Problem,
    x: &DVector<f64>,
    allow_fd: bool,
    degeneracy_tol: Option<f64>,
) -> Result<RelativeConvexityReport> {
    let e = evaluate(problem, x)?;
    let hess = |which: Component| -> Result<DMatrix<f64>> {
        match problem.function(which).and_then(|f| f.hessian(x)) {
            Some(h) => Ok(h),
            None if allow_fd => hessian_fd(problem, which, x, 1e-4 * (1.0 + x.amax())),
            None => Err(Error::MissingHessian(which)),
        }
    };
    let hess_f = hess(Component::Objective)?;
    if problem.n_constraints() == 1 {
        let hess_g = hess(Component::Constraint(0))?;
        return relative_convexity(&e.grad_f, &e.constraint_gradient(0), &hess_f, &hess_g, degeneracy_tol);
    }
    let b = barrier(&e);
    if !b.defined {
        return Err(Error::InvalidInput("barrier undefined outside the feasible set".into()));
    }
    let hess_phi = match barrier_hessian(problem, &e, x) {
        Some(h) => h,
        None if allow_fd => {
            let mut h = DMatrix::zeros(problem.n_dims(), problem.n_dims());
            for i in 0..problem.n_constraints() {
                let g = e.g_values[i];
                let dg = e.constraint_gradient(i);
                h += hess(Component::Constraint(i))? / (-g) + (&dg * dg.transpose()) / (g * g);
            }
            h
        }
        None => return Err(Error::MissingHessian(Component::Barrier)),
    };
    relative_convexity(&e.grad_f, &b.grad_phi, &hess_f, &hess_phi, degeneracy_tol)
}

/// Symmetric central-difference Hessian from gradient differences.
pub fn hessian_fd(problem: &Problem, which: Component, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    problem.check_dims(x)?;
    let func = problem
        .function(which)
        .ok_or_else(|| Error::InvalidInput(format!("no such function: {which}")))?;
    let n = x.len();
    let mut hess = DMatrix::zeros(n, n);
    let mut probe = x.clone();
    for j in 0..n {
        probe[j] = x[j] + h;
        let (_, up) = func.value_and_gradient(&probe);
        probe[j] = x[j] - h;
        let (_, down) = func.value_and_gradient(&probe);
        probe[j] = x[j];
        if up.iter().chain(down.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(which));
        }
        hess.set_column(j, &((up - down) / (2.0 * h)));
    }
    Ok(0.5 * (&hess + hess.transpose()))
}

/// Linearization of the field around a nondegenerate central-path point,
/// in coordinates where the last axis is along `grad f/|grad f|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearLocalModel {
    /// Eigenvalues of the relative convexity matrix.
    pub lambda_diag: DVector<f64>,
    /// Central-path tangent slopes: `x_i = l_i x_n`.
    pub tangent_slopes: DVector<f64>,
    /// Tangential Hessian of `g` over `|grad g|`; symmetric.
    pub a_matrix: DMatrix<f64>,
    pub b_vector: DVector<f64>,
}

impl LinearLocalModel {
    pub fn new(
        lambda_diag: DVector<f64>,
        tangent_slopes: DVector<f64>,
        a_matrix: DMatrix<f64>,
        b_vector: DVector<f64>,
    ) -> Result<Self> {
        let k = lambda_diag.len();
        if tangent_slopes.len() != k || b_vector.len() != k || a_matrix.shape() != (k, k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: tangent_slopes.len(),
            });
        }
        if (&a_matrix - a_matrix.transpose()).amax() > 1e-12 * (1.0 + a_matrix.amax()) {
            return Err(Error::InvalidInput("a_matrix must be symmetric".into()));
        }
        Ok(Self {
            lambda_diag,
            tangent_slopes,
            a_matrix,
            b_vector,
        })
    }

    pub fn reduced_dims(&self) -> usize {
        self.lambda_diag.len()
    }

    /// `diag(lambda) - (1 - zeta) a`.
    pub fn lambda_zeta(&self, zeta: f64) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.lambda_diag) - (1.0 - zeta) * &self.a_matrix
    }

    /// `lambda_i l_i + (1 - zeta) b_i`.
    pub fn b_zeta(&self, zeta: f64) -> DVector<f64> {
        self.lambda_diag.component_mul(&self.tangent_slopes) + (1.0 - zeta) * &self.b_vector
    }

    /// Right-hand side of the linearized system at `x = (x_tilde, x_n)`.
    pub fn rhs(&self, x: &DVector<f64>, zeta: f64) -> DVector<f64> {
        let k = self.reduced_dims();
        let xt = x.rows(0, k).into_owned();
        let xn = x[k];
        let dxt = -self.lambda_zeta(zeta) * xt + xn * self.b_zeta(zeta);
        let mut out = DVector::zeros(k + 1);
        out.rows_mut(0, k).copy_from(&dxt);
        out[k] = -(1.0 - zeta);
        out
    }
}

/// Closed-form solution of the linearized system:
///
/// ```text
/// x_tilde(t) = e^{-L t} C0 + L^{-1} B x_n(t) + (1 - zeta) L^{-2} B
/// x_n(t)     = x_n0 - (1 - zeta) t
/// ```
///
/// with `L = Lambda_zeta`, `B = B_zeta` and `C0` fixed by `x0`.
pub fn linear_local_model_solution(
    model: &LinearLocalModel,
    x0: &DVector<f64>,
    zeta: f64,
    t: f64,
) -> Result<DVector<f64>> {
    let k = model.reduced_dims();
    if x0.len() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            got: x0.len(),
        });
    }
    let eig = SymmetricEigen::new(model.lambda_zeta(zeta));
    let scale = eig.eigenvalues.amax();
    let min_abs = eig.eigenvalues.iter().fold(f64::INFINITY, |a, e| a.min(e.abs()));
    if min_abs <= 1e-12 * (1.0 + scale) {
        return Err(Error::Singular {
            min_abs_eigenvalue: min_abs,
        });
    }
    let q = &eig.eigenvectors;
    let spectral = |f: &dyn Fn(f64) -> f64| -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
        q * d * q.transpose()
    };
    let inv = spectral(&|l| 1.0 / l);
    let inv2 = spectral(&|l| 1.0 / (l * l));
    let decay = spectral(&|l| (-l * t).exp());

    let eps = 1.0 - zeta;
    let b = model.b_zeta(zeta);
    let xt0 = x0.rows(0, k).into_owned();
    let xn0 = x0[k];
    let xn = xn0 - eps * t;
    let c0 = &xt0 - &inv * &b * xn0 - eps * (&inv2 * &b);
    let xt = &decay * c0 + &inv * &b * xn + eps * (&inv2 * &b);

    let mut out = DVector::zeros(k + 1);
    if t == 0.0 {
        out.copy_from(x0);
        return Ok(out);
    }
    out.rows_mut(0, k).copy_from(&xt);
    out[k] = xn;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SmoothFn;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn centrality_cases() {
        let c = centrality(&v(&[0.0, 1.0]), &v(&[0.0, -1.0]), 0.9, 0.999).unwrap();
        assert_eq!(c.cos_theta, -1.0);
        assert!(c.in_mu_neighborhood);
        assert_relative_eq!(c.epsilon, 0.1, epsilon = 1e-15);

        let c = centrality(&v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 0.5, 0.1).unwrap();
        assert_eq!(c.cos_theta, 0.0);
        assert!(!c.in_mu_neighborhood);

        // linear toy at (0, 15): on the central path.
        let c = centrality(&v(&[0.0, 15.0]), &v(&[0.0, -1.0]), 0.98, 0.98).unwrap();
        assert_eq!(c.cos_theta, -1.0);

        assert!(centrality(&v(&[0.0, 0.0]), &v(&[0.0, -1.0]), 0.5, 0.5).is_err());
    }

    fn single_eval(grad_f: &[f64], g: f64, grad_g: &[f64]) -> (Evaluation, BarrierState) {
        let n = grad_f.len();
        let e = Evaluation {
            f_value: 0.0,
            grad_f: v(grad_f),
            g_values: v(&[g]),
            grad_g: DMatrix::from_fn(1, n, |_, j| grad_g[j]),
            feasible: g < 0.0,
            max_g: g,
        };
        let b = barrier(&e);
        (e, b)
    }

    #[test]
    fn kkt_at_linear_toy_optimum() {
        let (e, b) = single_eval(&[0.0, 10.0], 0.0, &[0.0, -1.0]);
        let k = kkt_report(&e, &b).unwrap();
        assert_eq!(k.lambda_star, 10.0);
        assert_eq!(k.residual_norm, 0.0);
        assert_eq!(k.normalized_residual, 0.0);
        assert_eq!(k.g_active_value, 0.0);
    }

    #[test]
    fn kkt_boundary_of_zeta_neighborhood() {
        // cos theta = -0.98
        let zeta: f64 = 0.98;
        let s = (1.0 - zeta * zeta).sqrt();
        let (e, b) = single_eval(&[s, -zeta], -0.1, &[0.0, 1.0]);
        let k = kkt_report(&e, &b).unwrap();
        assert_relative_eq!(k.normalized_residual, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn kkt_orthogonal_gradients() {
        let (e, b) = single_eval(&[3.0, 0.0], -1.0, &[0.0, 2.0]);
        let k = kkt_report(&e, &b).unwrap();
        assert_relative_eq!(k.normalized_residual, 2f64.sqrt(), epsilon = 1e-15);
        let (e, b) = single_eval(&[0.0, 0.0], -1.0, &[0.0, 2.0]);
        assert!(kkt_report(&e, &b).is_err());
    }

    #[test]
    fn relative_convexity_on_linear_toy_central_path() {
        for x2 in [10.0, 12.5, 30.0] {
            let r = relative_convexity(
                &v(&[0.0, x2]),
                &v(&[0.0, -1.0]),
                &DMatrix::identity(2, 2),
                &DMatrix::zeros(2, 2),
                None,
            )
            .unwrap();
            assert_eq!(r.c_matrix.shape(), (1, 1));
            assert_relative_eq!(r.c_matrix[(0, 0)], 1.0 / x2, epsilon = 1e-15);
            assert_eq!(r.classification, Convexity::RelativeConvex);
        }
    }

    #[test]
    fn relative_convexity_zero_hessians_is_degenerate() {
        let r = relative_convexity(
            &v(&[1.0, 2.0, 3.0]),
            &v(&[-1.0, -2.0, -3.0]),
            &DMatrix::zeros(3, 3),
            &DMatrix::zeros(3, 3),
            None,
        )
        .unwrap();
        assert_eq!(r.eigenvalues, vec![0.0, 0.0]);
        assert_eq!(r.classification, Convexity::Degenerate);
    }

    #[test]
    fn tangent_basis_is_orthonormal_complement() {
        for u in [v(&[0.0, 0.0, 1.0]), v(&[0.0, 0.0, -2.0]), v(&[1.0, -2.0, 0.5, 3.0])] {
            let p = tangent_basis(&u);
            let n = u.len();
            assert_eq!(p.shape(), (n, n - 1));
            assert_relative_eq!(p.transpose() * &p, DMatrix::identity(n - 1, n - 1), epsilon = 1e-14);
            assert!((p.transpose() * &u).amax() < 1e-14);
        }
    }

    fn toy_nonconvex() -> Problem {
        let f = SmoothFn::new(|x: &DVector<f64>| {
            let (a, b) = (x[0] - 2.0, x[1] - 2.0);
            (a * a + b * b, v(&[2.0 * a, 2.0 * b]))
        });
        let g = SmoothFn::new(|x: &DVector<f64>| {
            let a = x[0] - 3.0;
            (-0.1 * a * a - x[1] + 3.0, v(&[-0.2 * a, -1.0]))
        });
        Problem::new("nonconvex", 2, f, vec![g]).unwrap()
    }

    #[test]
    fn hessian_fd_cases() {
        let quad = SmoothFn::new(|x: &DVector<f64>| (0.5 * x.norm_squared(), x.clone()));
        let lin = SmoothFn::affine(v(&[1.0, -3.0, 2.0]), 4.0);
        let p = Problem::new("q", 3, quad, vec![lin]).unwrap();
        let x = v(&[0.3, -1.2, 2.0]);
        let h = hessian_fd(&p, Component::Objective, &x, 1e-4).unwrap();
        assert!((h - DMatrix::identity(3, 3)).amax() <= 1e-6);
        let h = hessian_fd(&p, Component::Constraint(0), &x, 1e-4).unwrap();
        assert!(h.amax() <= 1e-6);

        let q = toy_nonconvex();
        let h = hessian_fd(&q, Component::Constraint(0), &v(&[1.0, 4.0]), 1e-4).unwrap();
        assert!((h - DMatrix::from_diagonal(&v(&[-0.2, 0.0]))).amax() <= 1e-5);
    }

    #[test]
    fn relative_convexity_at_requires_hessians_or_fd() {
        let q = toy_nonconvex();
        let x = v(&[8.0, 8.0]);
        assert_eq!(
            relative_convexity_at(&q, &x, false, None).unwrap_err(),
            Error::MissingHessian(Component::Objective)
        );
        let r = relative_convexity_at(&q, &x, true, None).unwrap();
        // right central-path branch at k = 6: positive.
        assert_eq!(r.classification, Convexity::RelativeConvex);
    }

    #[test]
    fn linear_model_scalar_decay() {
        let m = LinearLocalModel::new(v(&[1.0]), v(&[0.0]), DMatrix::zeros(1, 1), v(&[0.0])).unwrap();
        for zeta in [0.0, 0.5, 0.99] {
            for t in [0.0, 0.3, 2.0, 7.5] {
                let x = linear_local_model_solution(&m, &v(&[1.0, 4.0]), zeta, t).unwrap();
                assert_relative_eq!(x[0], (-t).exp(), epsilon = 1e-14);
                assert_relative_eq!(x[1], 4.0 - (1.0 - zeta) * t, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn linear_model_t_zero_returns_start() {
        let m = LinearLocalModel::new(
            v(&[2.0, 0.5]),
            v(&[0.3, -1.0]),
            DMatrix::from_row_slice(2, 2, &[0.2, 0.1, 0.1, -0.4]),
            v(&[0.7, 0.2]),
        )
        .unwrap();
        let x0 = v(&[0.25, -0.5, 3.0]);
        assert_eq!(linear_local_model_solution(&m, &x0, 0.7, 0.0).unwrap(), x0);
    }

    #[test]
    fn linear_model_singular_and_asymmetric_inputs() {
        let m = LinearLocalModel::new(v(&[0.0]), v(&[1.0]), DMatrix::zeros(1, 1), v(&[0.0])).unwrap();
        assert!(matches!(
            linear_local_model_solution(&m, &v(&[1.0, 1.0]), 0.5, 1.0),
            Err(Error::Singular { .. })
        ));
        assert!(LinearLocalModel::new(
            v(&[1.0, 1.0]),
            v(&[0.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            v(&[0.0, 0.0]),
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn normalized_residual_identity(
            gf in prop::collection::vec(-5.0..5.0f64, 3),
            gg in prop::collection::vec(-5.0..5.0f64, 3),
            g in -3.0..-0.01f64,
        ) {
            prop_assume!(gf.iter().any(|x| x.abs() > 1e-3) && gg.iter().any(|x| x.abs() > 1e-3));
            let (e, b) = single_eval(&gf, g, &gg);
            let k = kkt_report(&e, &b).unwrap();
            let lhs = k.normalized_residual.powi(2) - 2.0 * k.cos_theta;
            prop_assert!((lhs - 2.0).abs() <= 1e-10);
        }

        #[test]
        fn eigenvalues_invariant_under_basis_and_scaling(
            seed in prop::collection::vec(-2.0..2.0f64, 4 + 16 + 16),
            angle in 0.0..std::f64::consts::TAU,
            a in 0.1..10.0f64,
            b in 0.1..10.0f64,
        ) {
            let n = 4;
            let gf = DVector::from_column_slice(&seed[0..n]);
            prop_assume!(gf.norm() > 0.1);
            let gg = -&gf + 0.1 * DVector::from_element(n, 1.0);
            let hf = DMatrix::from_column_slice(n, n, &seed[n..n + 16]);
            let hg = DMatrix::from_column_slice(n, n, &seed[n + 16..]);
            let hf = &hf + hf.transpose();
            let hg = &hg + hg.transpose();

            let base = relative_convexity(&gf, &gg, &hf, &hg, None).unwrap();
            // rotate the basis within the tangent space
            let p = tangent_basis(&gf);
            let mut rot = DMatrix::identity(n - 1, n - 1);
            rot[(0, 0)] = angle.cos();
            rot[(0, 1)] = -angle.sin();
            rot[(1, 0)] = angle.sin();
            rot[(1, 1)] = angle.cos();
            let rotated = relative_convexity_in_basis(&gf, &gg, &hf, &hg, p * rot, None).unwrap();
            let scaled = relative_convexity(&(a * &gf), &(b * &gg), &(a * &hf), &(b * &hg), None).unwrap();
            for ((x, y), z) in base.eigenvalues.iter().zip(&rotated.eigenvalues).zip(&scaled.eigenvalues) {
                prop_assert!((x - y).abs() <= 1e-8);
                prop_assert!((x - z).abs() <= 1e-8);
            }
            prop_assert!((&base.c_matrix - base.c_matrix.transpose()).amax() <= 1e-10);
        }

        #[test]
        fn linear_model_solution_satisfies_ode(
            lam in prop::collection::vec(0.2..3.0f64, 2),
            slopes in prop::collection::vec(-1.0..1.0f64, 2),
            a in prop::collection::vec(-0.5..0.5f64, 3),
            b in prop::collection::vec(-1.0..1.0f64, 2),
            x0 in prop::collection::vec(-1.0..1.0f64, 2),
            zeta in 0.5..0.99f64,
            t in 0.1..5.0f64,
        ) {
            let m = LinearLocalModel::new(
                DVector::from_vec(lam),
                DVector::from_vec(slopes),
                DMatrix::from_row_slice(2, 2, &[a[0], a[1], a[1], a[2]]),
                DVector::from_vec(b),
            ).unwrap();
            let start = DVector::from_vec(vec![x0[0], x0[1], 2.0]);
            let h = 1e-5;
            let up = linear_local_model_solution(&m, &start, zeta, t + h).unwrap();
            let down = linear_local_model_solution(&m, &start, zeta, t - h).unwrap();
            let fd = (up - down) / (2.0 * h);
            let at = linear_local_model_solution(&m, &start, zeta, t).unwrap();
            let rhs = m.rhs(&at, zeta);
            prop_assert!((&fd - &rhs).norm() <= 1e-6 * (1.0 + rhs.norm()));
        }
    }
}
