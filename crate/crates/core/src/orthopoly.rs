//! Univariate building blocks: Chebyshev U_n, normalized Jacobi polynomials,
//! associated Legendre functions, and the two Gauss rules used by the disk
//! and ball quadratures.

use crate::error::Result;
use crate::linalg::sym_tridiag_eigen;
use crate::scalar::{fl, us, Real};

/// Weight function of a one-dimensional Gauss rule on [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// w(t) = 1
    Legendre,
    /// w(t) = (1 + t)^2
    Jacobi02,
}

/// One-dimensional Gauss rule on (-1, 1).
#[derive(Debug, Clone)]
pub struct GaussRule1D<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub weight_kind: WeightKind,
    pub point_count: usize,
}

impl<T: Real> GaussRule1D<T> {
    /// Affine image of the rule on (0, 1). Only meaningful for the Legendre
    /// weight, where it integrates plain dx.
    pub fn to_unit_interval(&self) -> (Vec<T>, Vec<T>) {
        let half = fl::<T>(0.5);
        let nodes = self.nodes.iter().map(|&t| half * (t + T::one())).collect();
        let weights = self.weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }

    /// Radial weights nu_k = nu'_k / 8 paired with nodes (zeta_k + 1)/2,
    /// so that sum nu_k v((zeta_k+1)/2) approximates int_0^1 r^2 v(r) dr.
    pub fn radial_form(&self) -> (Vec<T>, Vec<T>) {
        debug_assert_eq!(self.weight_kind, WeightKind::Jacobi02);
        let half = fl::<T>(0.5);
        let eighth = fl::<T>(0.125);
        let nodes = self.nodes.iter().map(|&t| half * (t + T::one())).collect();
        let weights = self.weights.iter().map(|&w| eighth * w).collect();
        (nodes, weights)
    }
}

/// Monic three-term recurrence coefficients for the Jacobi weight
/// (1-t)^0 (1+t)^beta on [-1, 1]:
///   p_{n+1} = (t - a_n) p_n - b_n p_{n-1},   b_0 = integral of the weight.
fn jacobi_0b_recurrence<T: Real>(n: usize, beta: T) -> (T, T) {
    let nf = us::<T>(n);
    let two = fl::<T>(2.0);
    let a = if beta == T::zero() {
        T::zero()
    } else {
        beta * beta / ((two * nf + beta) * (two * nf + beta + two))
    };
    let b = if n == 0 {
        // 2^(beta+1) / (beta+1)
        two.powf(beta + T::one()) / (beta + T::one())
    } else {
        let s = two * nf + beta;
        let four = fl::<T>(4.0);
        four * nf * nf * (nf + beta) * (nf + beta) / (s * s * (s + T::one()) * (s - T::one()))
    };
    (a, b)
}

/// Golub-Welsch: nodes and weights from the recurrence coefficients.
fn golub_welsch<T: Real>(q: usize, beta: T, context: &'static str) -> Result<(Vec<T>, Vec<T>)> {
    let mut diag = Vec::with_capacity(q);
    let mut off = Vec::with_capacity(q.saturating_sub(1));
    let (a0, b0) = jacobi_0b_recurrence(0, beta);
    diag.push(a0);
    for n in 1..q {
        let (a, b) = jacobi_0b_recurrence(n, beta);
        diag.push(a);
        off.push(b.sqrt());
    }
    let (nodes, firsts) = sym_tridiag_eigen(diag, off, context)?;
    let weights = firsts.iter().map(|&z| b0 * z * z).collect();
    Ok((nodes, weights))
}

/// q-node Gauss-Legendre rule on (-1, 1), exact for polynomials of degree
/// <= 2q - 1.
pub fn gauss_legendre<T: Real>(q: usize) -> Result<GaussRule1D<T>> {
    assert!(q >= 1);
    let (nodes, weights) = golub_welsch(q, T::zero(), "gauss-legendre")?;
    Ok(GaussRule1D {
        nodes,
        weights,
        weight_kind: WeightKind::Legendre,
        point_count: q,
    })
}

/// q-node Gauss rule for the weight (1+t)^2 on (-1, 1), exact for
/// int (1+t)^2 p(t) dt with deg p <= 2q - 1.
pub fn gauss_jacobi_02<T: Real>(q: usize) -> Result<GaussRule1D<T>> {
    assert!(q >= 1);
    let (nodes, weights) = golub_welsch(q, fl::<T>(2.0), "gauss-jacobi-(0,2)")?;
    Ok(GaussRule1D {
        nodes,
        weights,
        weight_kind: WeightKind::Jacobi02,
        point_count: q,
    })
}

/// Chebyshev polynomial of the second kind and its derivative, by the
/// coupled triple recursions. Valid for any real t (it is a polynomial),
/// exact at the endpoints.
pub fn chebyshev_u<T: Real>(n: usize, t: T) -> (T, T) {
    let two = fl::<T>(2.0);
    if n == 0 {
        return (T::one(), T::zero());
    }
    let mut um1 = T::one();
    let mut dm1 = T::zero();
    let mut u = two * t;
    let mut d = two;
    for _ in 1..n {
        let u_next = two * t * u - um1;
        let d_next = two * u + two * t * d - dm1;
        um1 = u;
        dm1 = d;
        u = u_next;
        d = d_next;
    }
    (u, d)
}

/// Jacobi polynomial p_j^(0,b), normalized so that
/// int_{-1}^{1} (1+t)^b p_i p_j dt = delta_ij, together with its derivative.
pub fn jacobi_normalized<T: Real>(j: usize, b: T, t: T) -> (T, T) {
    let (_, b0) = jacobi_0b_recurrence(0, b);
    let mut p = T::one() / b0.sqrt();
    let mut dp = T::zero();
    if j == 0 {
        return (p, dp);
    }
    let mut pm1 = T::zero();
    let mut dpm1 = T::zero();
    let mut sqrt_bn = T::zero(); // sqrt(b_0) never multiplies p_{-1}
    for n in 0..j {
        let (an, _) = jacobi_0b_recurrence(n, b);
        let (_, bn1) = jacobi_0b_recurrence(n + 1, b);
        let sqrt_bn1 = bn1.sqrt();
        let p_next = ((t - an) * p - sqrt_bn * pm1) / sqrt_bn1;
        let dp_next = (p + (t - an) * dp - sqrt_bn * dpm1) / sqrt_bn1;
        pm1 = p;
        dpm1 = dp;
        p = p_next;
        dp = dp_next;
        sqrt_bn = sqrt_bn1;
    }
    (p, dp)
}

/// Associated Legendre function T_k^l(t) = (1-t^2)^(l/2) d^l/dt^l P_k(t),
/// without the Condon-Shortley phase. Returns 0 when l > k.
pub fn assoc_legendre<T: Real>(k: usize, l: usize, t: T) -> T {
    if l > k {
        return T::zero();
    }
    let two = fl::<T>(2.0);
    // P_l^l = (2l-1)!! (1-t^2)^(l/2)
    let somx2 = ((T::one() - t) * (T::one() + t)).sqrt();
    let mut pll = T::one();
    let mut fact = T::one();
    for _ in 0..l {
        pll = pll * fact * somx2;
        fact = fact + two;
    }
    if k == l {
        return pll;
    }
    // P_{l+1}^l = (2l+1) t P_l^l
    let lf = us::<T>(l);
    let mut pkm1 = pll;
    let mut pk = (two * lf + T::one()) * t * pll;
    for kk in (l + 2)..=k {
        let kf = us::<T>(kk);
        let p_next = ((two * kf - T::one()) * t * pk - (kf + lf - T::one()) * pkm1) / (kf - lf);
        pkm1 = pk;
        pk = p_next;
    }
    pk
}
