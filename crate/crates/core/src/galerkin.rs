//! Assembly and solution of the spectral Galerkin system, solution
//! evaluation, error grids, and condition numbers.

use crate::ballbasis::{BasisEval, BasisSet};
use crate::domainmap::{DomainMap, MatFn, ScalarFn};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, lu_solve, sym_eigenvalues};
use crate::quadrature::BallRule;
use crate::scalar::{fl, us, Real};
use rayon::prelude::*;

/// The Dirichlet problem -div(A grad u) + gamma u = f on Omega = Phi(B),
/// with zero boundary values, plus (optionally) the exact solution for
/// convergence studies. All coefficient functions take Omega coordinates.
#[derive(Clone)]
pub struct EllipticProblem<T, const D: usize> {
    pub map: DomainMap<T, D>,
    pub coeff_a: MatFn<T, D>,
    pub gamma: ScalarFn<T, D>,
    pub rhs_f: ScalarFn<T, D>,
    pub true_solution: Option<ScalarFn<T, D>>,
}

/// Assembled (and possibly solved) Galerkin system of degree n.
#[derive(Debug, Clone)]
pub struct GalerkinSystem<T> {
    pub dim: usize,
    pub degree: usize,
    /// N = dim Pi_n
    pub size: usize,
    /// Symmetric N x N matrix, row-major.
    pub matrix: Vec<T>,
    pub load: Vec<T>,
    pub coeffs: Option<Vec<T>>,
    pub quad_q: usize,
    /// Max |M - M^T| entry before symmetrization (quadrature-consistency
    /// diagnostic).
    pub presym_deviation: T,
    /// Set when the Cholesky factorization hit a non-positive pivot and the
    /// solve fell back to pivoted elimination.
    pub non_pd: bool,
}

/// Coordinate frame for solution evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Points are given in the unit ball.
    Ball,
    /// Points are given in Omega and pulled back through the inverse map.
    Omega,
}

/// Assemble the stiffness matrix and load vector of the transformed weak
/// form over the given quadrature rule. Deterministic: every entry is a
/// fixed-order sum over nodes, independent of thread count.
pub fn assemble<T: Real, const D: usize, B: BasisSet<T, D> + ?Sized>(
    problem: &EllipticProblem<T, D>,
    basis: &B,
    rule: &BallRule<T, D>,
) -> Result<GalerkinSystem<T>> {
    let nb = basis.len();
    let nq = rule.len();

    // Pull back coefficients at every node, premultiplied by the weight.
    let mut a_w: Vec<[[T; D]; D]> = Vec::with_capacity(nq);
    let mut gamma_w: Vec<T> = Vec::with_capacity(nq);
    let mut f_w: Vec<T> = Vec::with_capacity(nq);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let pb = problem.map.pullback_at(
            x,
            problem.coeff_a.as_ref(),
            problem.gamma.as_ref(),
            problem.rhs_f.as_ref(),
        )?;
        let mut aw = pb.a_scaled;
        for row in aw.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * w;
            }
        }
        if !pb.gamma_scaled.is_finite() || !pb.f_scaled.is_finite() {
            return Err(Error::NonFiniteValue {
                point: format!("{x:?}"),
                basis: String::new(),
            });
        }
        a_w.push(aw);
        gamma_w.push(w * pb.gamma_scaled);
        f_w.push(w * pb.f_scaled);
    }

    // Cache psi values and gradients, column-major (basis-contiguous over
    // nodes).
    let mut tables: Vec<Vec<T>> = vec![vec![T::zero(); nb * nq]; D + 1];
    {
        let cols: Vec<(usize, Vec<T>)> = (0..nb)
            .into_par_iter()
            .map(|l| {
                let mut col = vec![T::zero(); (D + 1) * nq];
                for (ni, &x) in rule.nodes.iter().enumerate() {
                    let BasisEval { value, gradient } = basis.eval_psi(l, x);
                    col[ni] = value;
                    for d in 0..D {
                        col[(d + 1) * nq + ni] = gradient[d];
                    }
                }
                (l, col)
            })
            .collect();
        for (l, col) in cols {
            for t in 0..=D {
                tables[t][l * nq..(l + 1) * nq].copy_from_slice(&col[t * nq..(t + 1) * nq]);
            }
        }
    }
    for (l, chunk) in tables[0].chunks(nq).enumerate() {
        if chunk.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                point: "quadrature node".into(),
                basis: format!(", basis index {l}"),
            });
        }
    }

    // matrix rows in parallel; each entry is a fixed-order reduction
    let values = &tables[0];
    let grads = &tables[1..];
    let rows: Vec<Vec<T>> = (0..nb)
        .into_par_iter()
        .map(|row| {
            // t_j(node) = sum_i (w det J A~)_{ij} d_i psi_row(node)
            let mut weighted = vec![T::zero(); D * nq];
            for ni in 0..nq {
                let a = &a_w[ni];
                for j in 0..D {
                    let mut s = T::zero();
                    for (i, g) in grads.iter().enumerate() {
                        s = s + a[i][j] * g[row * nq + ni];
                    }
                    weighted[j * nq + ni] = s;
                }
            }
            let row_vals = &values[row * nq..(row + 1) * nq];
            let mut out = vec![T::zero(); nb];
            for (col, slot) in out.iter_mut().enumerate() {
                let mut s = T::zero();
                for ni in 0..nq {
                    let mut grad_part = T::zero();
                    for (j, g) in grads.iter().enumerate() {
                        grad_part = grad_part + weighted[j * nq + ni] * g[col * nq + ni];
                    }
                    s = s + grad_part + gamma_w[ni] * row_vals[ni] * values[col * nq + ni];
                }
                *slot = s;
            }
            out
        })
        .collect();

    let mut matrix = vec![T::zero(); nb * nb];
    let mut presym_deviation = T::zero();
    for r in 0..nb {
        for c in 0..nb {
            let m_rc = rows[r][c];
            let m_cr = rows[c][r];
            presym_deviation = presym_deviation.max((m_rc - m_cr).abs());
            matrix[r * nb + c] = fl::<T>(0.5) * (m_rc + m_cr);
        }
    }

    let mut load = vec![T::zero(); nb];
    for (l, slot) in load.iter_mut().enumerate() {
        let mut s = T::zero();
        for ni in 0..nq {
            s = s + f_w[ni] * values[l * nq + ni];
        }
        *slot = s;
    }

    Ok(GalerkinSystem {
        dim: D,
        degree: basis.degree(),
        size: nb,
        matrix,
        load,
        coeffs: None,
        quad_q: rule.q,
        presym_deviation,
        non_pd: false,
    })
}

impl<T: Real> GalerkinSystem<T> {
    /// Solve M alpha = b by Cholesky, falling back to pivoted elimination
    /// (flagging the system as numerically non-PD) if a pivot fails.
    pub fn solve(&mut self) -> Result<&[T]> {
        let n = self.size;
        let alpha = match cholesky_solve(&self.matrix, n, &self.load) {
            Ok(a) => a,
            Err(()) => {
                self.non_pd = true;
                lu_solve(&self.matrix, n, &self.load)
            }
        };
        // residual check in the infinity norm
        let mut res = T::zero();
        let mut bmax = T::zero();
        for i in 0..n {
            let mut s = T::zero();
            for j in 0..n {
                s = s + self.matrix[i * n + j] * alpha[j];
            }
            res = res.max((s - self.load[i]).abs());
            bmax = bmax.max(self.load[i].abs());
        }
        if bmax > T::zero() && res / bmax > fl::<T>(1e-10) {
            return Err(Error::ResidualTooLarge {
                residual: (res / bmax).to_f64().unwrap_or(f64::NAN),
            });
        }
        self.coeffs = Some(alpha);
        Ok(self.coeffs.as_deref().unwrap())
    }

    /// 2-norm condition number of the assembled matrix. The matrix is
    /// symmetric, so the singular values are the eigenvalue magnitudes.
    pub fn condition_number(&self) -> T {
        let vals = sym_eigenvalues(&self.matrix, self.size);
        let mut smin = T::infinity();
        let mut smax = T::zero();
        for v in vals {
            smin = smin.min(v.abs());
            smax = smax.max(v.abs());
        }
        smax / smin
    }
}

/// u_n(x) = sum alpha_j psi_j(x) at each point.
pub fn evaluate_solution<T: Real, const D: usize, B: BasisSet<T, D> + ?Sized>(
    system: &GalerkinSystem<T>,
    basis: &B,
    map: &DomainMap<T, D>,
    points: &[[T; D]],
    frame: Frame,
) -> Result<Vec<T>> {
    let alpha = system.coeffs.as_deref().ok_or(Error::NotSolved)?;
    let tol = T::one() + fl::<T>(1e-12);
    let mut out = Vec::with_capacity(points.len());
    for &p in points {
        let x = match frame {
            Frame::Ball => p,
            Frame::Omega => {
                let inv = map.psi_inverse.as_ref().ok_or(Error::MissingInverseMap)?;
                inv(p)
            }
        };
        let mut r2 = T::zero();
        for &xi in x.iter() {
            r2 = r2 + xi * xi;
        }
        if r2.sqrt() > tol {
            return Err(Error::PointOutsideBall {
                point: format!("{x:?}"),
            });
        }
        let mut s = T::zero();
        for (j, &aj) in alpha.iter().enumerate() {
            s = s + aj * basis.eval_psi(j, x).value;
        }
        out.push(s);
    }
    Ok(out)
}

/// Evaluation grid on the unit disk: circles r = i/10 with 20 azimuths,
/// plus the de-duplicated center. 201 points.
pub fn error_grid2<T: Real>() -> Vec<[T; 2]> {
    let mut out = Vec::with_capacity(201);
    out.push([T::zero(); 2]);
    for i in 1..=10usize {
        let r = us::<T>(i) / fl::<T>(10.0);
        for j in 1..=20usize {
            let theta = us::<T>(j) * T::pi() / fl::<T>(10.0);
            out.push([r * theta.cos(), r * theta.sin()]);
        }
    }
    out
}

/// Evaluation lattice on the unit ball: radii i/21, polar angles k pi/21,
/// azimuths j pi/10 for i, k = 1..20 and j = 1..40. 16000 points.
pub fn error_grid3<T: Real>() -> Vec<[T; 3]> {
    let mut out = Vec::with_capacity(16000);
    for i in 1..=20usize {
        let r = us::<T>(i) / fl::<T>(21.0);
        for j in 1..=40usize {
            let az = us::<T>(j) * T::pi() / fl::<T>(10.0);
            for k in 1..=20usize {
                let polar = us::<T>(k) * T::pi() / fl::<T>(21.0);
                out.push([
                    r * polar.sin() * az.cos(),
                    r * polar.sin() * az.sin(),
                    r * polar.cos(),
                ]);
            }
        }
    }
    out
}

/// Max-norm error of the computed solution against the problem's exact
/// solution over a grid of ball points.
pub fn max_grid_error<T: Real, const D: usize, B: BasisSet<T, D> + ?Sized>(
    problem: &EllipticProblem<T, D>,
    system: &GalerkinSystem<T>,
    basis: &B,
    grid: &[[T; D]],
) -> Result<T> {
    let exact = problem
        .true_solution
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("problem has no exact solution".into()))?;
    let approx = evaluate_solution(system, basis, &problem.map, grid, Frame::Ball)?;
    let mut worst = T::zero();
    for (&x, &u_n) in grid.iter().zip(&approx) {
        let s = (problem.map.phi)(x);
        worst = worst.max((exact(s) - u_n).abs());
    }
    Ok(worst)
}
