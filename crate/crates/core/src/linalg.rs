//! Dense linear algebra kernels: symmetric tridiagonal eigensolver (for
//! Golub-Welsch), cyclic Jacobi eigenvalues, Cholesky and pivoted LU solves,
//! and closed-form inverses for the d x d Jacobian blocks.

use crate::error::{Error, Result};
use crate::scalar::{fl, Real};

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each (normalized) eigenvector.
///
/// `diag` has length n, `off` length n-1 (`off[i]` couples rows i and i+1).
/// Returns `(eigenvalues, first_components)` sorted ascending by eigenvalue.
pub fn sym_tridiag_eigen<T: Real>(
    mut diag: Vec<T>,
    off: Vec<T>,
    context: &'static str,
) -> Result<(Vec<T>, Vec<T>)> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    // QL with implicit shifts, carrying only the first row of the
    // accumulated rotation product.
    let mut e = off;
    e.push(T::zero());
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::QuadratureNoConverge { context, q: n });
            }
            let two = fl::<T>(2.0);
            let mut g = (diag[l + 1] - diag[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sign_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (T::one(), T::one());
            let mut p = T::zero();
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] = diag[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap());
    let vals = order.iter().map(|&i| diag[i]).collect();
    let firsts = order.iter().map(|&i| z[i]).collect();
    Ok((vals, firsts))
}

/// All eigenvalues of a dense symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations. Returns them in ascending order.
pub fn sym_eigenvalues<T: Real>(a: &[T], n: usize) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let off = |m: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + m[i * n + j] * m[i * n + j];
            }
        }
        s
    };
    let norm: T = m.iter().map(|&x| x * x).sum();
    let tol = T::epsilon() * T::epsilon() * norm.max(T::min_positive_value());
    for _sweep in 0..60 {
        if off(&m) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (fl::<T>(2.0) * apq);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<T> = (0..n).map(|i| m[i * n + i]).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Attempt an LL^T factorization and solve. `Err(())` on a non-positive
/// pivot; the only failure mode is "not positive definite", so the caller
/// switches solvers rather than inspecting an error value.
#[allow(clippy::result_unit_err)]
pub fn cholesky_solve<T: Real>(a: &[T], n: usize, b: &[T]) -> std::result::Result<Vec<T>, ()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= T::zero() {
                    return Err(());
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // forward then back substitution
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s = s - l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s = s - l[k * n + i] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    Ok(y)
}

/// Gaussian elimination with partial pivoting; fallback for systems that are
/// not numerically positive definite.
pub fn lu_solve<T: Real>(a: &[T], n: usize, b: &[T]) -> Vec<T> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for r in (col + 1)..n {
            let factor = m[r * n + col] / d;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                m[r * n + k] = m[r * n + k] - factor * m[col * n + k];
            }
            x[r] = x[r] - factor * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in (i + 1)..n {
            s = s - m[i * n + k] * x[k];
        }
        x[i] = s / m[i * n + i];
    }
    x
}

pub fn det_small<T: Real, const D: usize>(m: &[[T; D]; D]) -> T {
    match D {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("only d <= 3 supported"),
    }
}

/// Closed-form inverse of a d x d matrix, d in {1, 2, 3}.
pub fn inv_small<T: Real, const D: usize>(m: &[[T; D]; D], det: T) -> [[T; D]; D] {
    let mut out = [[T::zero(); D]; D];
    match D {
        1 => out[0][0] = T::one() / det,
        2 => {
            out[0][0] = m[1][1] / det;
            out[0][1] = -m[0][1] / det;
            out[1][0] = -m[1][0] / det;
            out[1][1] = m[0][0] / det;
        }
        3 => {
            let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
                m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
            };
            out[0][0] = cof(1, 1, 2, 2) / det;
            out[0][1] = -cof(0, 1, 2, 2) / det;
            out[0][2] = cof(0, 1, 1, 2) / det;
            out[1][0] = -cof(1, 0, 2, 2) / det;
            out[1][1] = cof(0, 0, 2, 2) / det;
            out[1][2] = -cof(0, 0, 1, 2) / det;
            out[2][0] = cof(1, 0, 2, 1) / det;
            out[2][1] = -cof(0, 0, 2, 1) / det;
            out[2][2] = cof(0, 0, 1, 1) / det;
        }
        _ => unreachable!("only d <= 3 supported"),
    }
    out
}

/// Smallest eigenvalue of a small symmetric matrix.
pub fn sym_eigen_min_small<T: Real, const D: usize>(m: &[[T; D]; D]) -> T {
    let mut flat = Vec::with_capacity(D * D);
    for row in m.iter() {
        flat.extend_from_slice(row);
    }
    sym_eigenvalues(&flat, D)[0]
}

pub fn mat_mul_small<T: Real, const D: usize>(a: &[[T; D]; D], b: &[[T; D]; D]) -> [[T; D]; D] {
    let mut out = [[T::zero(); D]; D];
    for i in 0..D {
        for j in 0..D {
            let mut s = T::zero();
            for k in 0..D {
                s = s + a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn transpose_small<T: Real, const D: usize>(a: &[[T; D]; D]) -> [[T; D]; D] {
    let mut out = [[T::zero(); D]; D];
    for i in 0..D {
        for j in 0..D {
            out[i][j] = a[j][i];
        }
    }
    out
}
