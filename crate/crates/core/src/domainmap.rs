//! Domain transformations Phi: B -> Omega, their Jacobian machinery, and the
//! pulled-back elliptic coefficients det(J) K A K^T.

use crate::error::{Error, Result};
use crate::linalg::{det_small, inv_small, mat_mul_small, sym_eigen_min_small, transpose_small};
use crate::quadrature::BallRule;
use crate::scalar::{fl, Real};
use std::sync::Arc;

pub type PointFn<T, const D: usize> = Arc<dyn Fn([T; D]) -> [T; D] + Send + Sync>;
pub type MatFn<T, const D: usize> = Arc<dyn Fn([T; D]) -> [[T; D]; D] + Send + Sync>;
pub type ScalarFn<T, const D: usize> = Arc<dyn Fn([T; D]) -> T + Send + Sync>;

/// A smooth bijection from the closed unit ball onto the target domain,
/// with its Jacobian, determinant, and (optionally) the inverse map.
#[derive(Clone)]
pub struct DomainMap<T, const D: usize> {
    pub phi: PointFn<T, D>,
    pub jacobian: MatFn<T, D>,
    pub det_j: ScalarFn<T, D>,
    pub psi_inverse: Option<PointFn<T, D>>,
}

/// Pulled-back data of an elliptic problem at one ball point.
#[derive(Debug, Clone, Copy)]
pub struct PullbackEval<T, const D: usize> {
    /// det(J) * K A(Phi(x)) K^T, symmetric.
    pub a_scaled: [[T; D]; D],
    /// det(J) * gamma(Phi(x))
    pub gamma_scaled: T,
    /// det(J) * f(Phi(x))
    pub f_scaled: T,
    pub det_j: T,
    pub s: [T; D],
}

/// Certificate from scanning the quadrature nodes: lambda_star is the
/// minimum over nodes of the smallest eigenvalue of K^T K, and
/// c0_tilde = c0 * lambda_star with c0 the nodewise minimum of
/// lambda_min(A).
#[derive(Debug, Clone, Copy)]
pub struct EllipticityReport<T> {
    pub lambda_star: T,
    pub c0_tilde: T,
}

impl<T: Real, const D: usize> DomainMap<T, D> {
    pub fn identity() -> Self {
        DomainMap {
            phi: Arc::new(|x| x),
            jacobian: Arc::new(|_| {
                let mut j = [[T::zero(); D]; D];
                for (i, row) in j.iter_mut().enumerate() {
                    row[i] = T::one();
                }
                j
            }),
            det_j: Arc::new(|_| T::one()),
            psi_inverse: Some(Arc::new(|s| s)),
        }
    }

    /// Wrap a user map given only by phi; the Jacobian is approximated by
    /// central differences with step 1e-6, capping attainable accuracy near
    /// 1e-10. Supply an analytic Jacobian for production runs.
    pub fn from_phi_fd<F>(phi: F, psi_inverse: Option<PointFn<T, D>>) -> Self
    where
        F: Fn([T; D]) -> [T; D] + Send + Sync + 'static,
    {
        let phi: PointFn<T, D> = Arc::new(phi);
        let phi_j = phi.clone();
        let jacobian: MatFn<T, D> = Arc::new(move |x| {
            let h = fl::<T>(1e-6);
            let mut j = [[T::zero(); D]; D];
            for col in 0..D {
                let mut xp = x;
                let mut xm = x;
                xp[col] = xp[col] + h;
                xm[col] = xm[col] - h;
                let (sp, sm) = (phi_j(xp), phi_j(xm));
                for row in 0..D {
                    j[row][col] = (sp[row] - sm[row]) / (fl::<T>(2.0) * h);
                }
            }
            j
        });
        let jac = jacobian.clone();
        let det_j: ScalarFn<T, D> = Arc::new(move |x| det_small(&jac(x)));
        DomainMap {
            phi,
            jacobian,
            det_j,
            psi_inverse,
        }
    }

    /// K = J(x)^(-1), failing on a numerically singular Jacobian.
    pub fn inverse_jacobian(&self, x: [T; D]) -> Result<([[T; D]; D], T)> {
        let j = (self.jacobian)(x);
        let det = det_small(&j);
        if det.abs() < fl::<T>(1e-12) {
            return Err(Error::SingularJacobian {
                point: format!("{x:?}"),
                det: det.to_f64().unwrap_or(0.0),
            });
        }
        Ok((inv_small(&j, det), det))
    }

    /// Pull back the coefficients A, gamma, f of the Omega problem to the
    /// ball point x, scaled by det J.
    pub fn pullback_at(
        &self,
        x: [T; D],
        coeff_a: &dyn Fn([T; D]) -> [[T; D]; D],
        gamma: &dyn Fn([T; D]) -> T,
        rhs_f: &dyn Fn([T; D]) -> T,
    ) -> Result<PullbackEval<T, D>> {
        let (k, det) = self.inverse_jacobian(x)?;
        let s = (self.phi)(x);
        let a = coeff_a(s);
        let kak = mat_mul_small(&mat_mul_small(&k, &a), &transpose_small(&k));
        let mut a_scaled = [[T::zero(); D]; D];
        for i in 0..D {
            for j in 0..D {
                a_scaled[i][j] = det * kak[i][j];
            }
        }
        Ok(PullbackEval {
            a_scaled,
            gamma_scaled: det * gamma(s),
            f_scaled: det * rhs_f(s),
            det_j: det,
            s,
        })
    }

    /// Ellipticity certificate at the discretization level: inspects the
    /// quadrature nodes only.
    pub fn ellipticity_report(
        &self,
        coeff_a: &dyn Fn([T; D]) -> [[T; D]; D],
        rule: &BallRule<T, D>,
    ) -> Result<EllipticityReport<T>> {
        let mut lambda_star = T::infinity();
        let mut c0 = T::infinity();
        for &x in &rule.nodes {
            let (k, _) = self.inverse_jacobian(x)?;
            let ktk = mat_mul_small(&transpose_small(&k), &k);
            lambda_star = lambda_star.min(sym_eigen_min_small(&ktk));
            let a = coeff_a((self.phi)(x));
            c0 = c0.min(sym_eigen_min_small(&a));
        }
        Ok(EllipticityReport {
            lambda_star,
            c0_tilde: c0 * lambda_star,
        })
    }
}

fn check_param(name: &'static str, v: f64) -> Result<()> {
    if v <= 0.0 || v >= 1.0 {
        return Err(Error::MapParamOutOfRange { name, value: v });
    }
    Ok(())
}

/// Planar map (s, t) = (x - y + a x^2, x + y), 0 < a < 1, with closed-form
/// Jacobian det J = 2 (1 + a x) and explicit inverse.
pub fn planar_quadratic<T: Real>(a: f64) -> Result<DomainMap<T, 2>> {
    check_param("a", a)?;
    let a = fl::<T>(a);
    let two = fl::<T>(2.0);
    Ok(DomainMap {
        phi: Arc::new(move |[x, y]| [x - y + a * x * x, x + y]),
        jacobian: Arc::new(move |[x, _]| {
            [[T::one() + two * a * x, -T::one()], [T::one(), T::one()]]
        }),
        det_j: Arc::new(move |[x, _]| two * (T::one() + a * x)),
        psi_inverse: Some(Arc::new(move |[s, t]| {
            let x = (-T::one() + (T::one() + a * (s + t)).sqrt()) / a;
            [x, t - x]
        })),
    })
}

/// 3D map (s, t, u) = (x - y + a x^2, x + y, 2 z + b z^2), 0 < a, b < 1,
/// with det J = 4 (1 + a x)(1 + b z) and explicit inverse.
pub fn ball_quadratic<T: Real>(a: f64, b: f64) -> Result<DomainMap<T, 3>> {
    check_param("a", a)?;
    check_param("b", b)?;
    let a = fl::<T>(a);
    let b = fl::<T>(b);
    let two = fl::<T>(2.0);
    let four = fl::<T>(4.0);
    Ok(DomainMap {
        phi: Arc::new(move |[x, y, z]| [x - y + a * x * x, x + y, two * z + b * z * z]),
        jacobian: Arc::new(move |[x, _, z]| {
            [
                [T::one() + two * a * x, -T::one(), T::zero()],
                [T::one(), T::one(), T::zero()],
                [T::zero(), T::zero(), two + two * b * z],
            ]
        }),
        det_j: Arc::new(move |[x, _, z]| four * (T::one() + a * x) * (T::one() + b * z)),
        psi_inverse: Some(Arc::new(move |[s, t, u]| {
            let x = (-T::one() + (T::one() + a * (s + t)).sqrt()) / a;
            let z = (-T::one() + (T::one() + b * u).sqrt()) / b;
            [x, t - x, z]
        })),
    })
}

/// Identity coefficient matrix A = I.
pub fn identity_coeff<T: Real, const D: usize>(
) -> impl Fn([T; D]) -> [[T; D]; D] + Send + Sync + Copy {
    |_| {
        let mut a = [[T::zero(); D]; D];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = T::one();
        }
        a
    }
}
