//! Orthonormal polynomial bases of Pi_n on the unit disk and unit ball,
//! the trial functions psi = (1 - |x|^2) phi, and their Cartesian gradients.
//!
//! The 3D basis functions are products of a radial Jacobi factor and a real
//! spherical harmonic. Instead of the spherical chain rule we evaluate the
//! angular factor as a solid harmonic, i.e. the homogeneous polynomial
//! r^k S_{beta,k}(x/r), through Cartesian recurrences. Values and gradients
//! are then finite everywhere on the closed ball, including the origin and
//! the polar axis.

use crate::error::{Error, Result};
use crate::orthopoly::{assoc_legendre, chebyshev_u, jacobi_normalized};
use crate::scalar::{fl, us, Real};

/// Identifies one trial/test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisIndex {
    /// Disk ridge polynomial phi_{n,k}, 0 <= k <= n.
    Disk { n: usize, k: usize },
    /// Ball polynomial phi_{m,j,beta}, 0 <= j <= m/2, 0 <= beta <= 2(m-2j).
    Ball { m: usize, j: usize, beta: usize },
}

impl BasisIndex {
    pub fn dim(&self) -> usize {
        match self {
            BasisIndex::Disk { .. } => 2,
            BasisIndex::Ball { .. } => 3,
        }
    }

    /// 0-based lexicographic rank: (n, k) ordered by n then k for the disk;
    /// (m, j, beta) by m, then j, then beta for the ball.
    pub fn position(&self) -> usize {
        match *self {
            BasisIndex::Disk { n, k } => n * (n + 1) / 2 + k,
            BasisIndex::Ball { m, j, beta } => {
                let below_m = m * (m + 1) * (m + 2) / 6; // sum of binom(m'+2, 2)
                let within: usize = (0..j).map(|jp| 2 * (m - 2 * jp) + 1).sum();
                below_m + within + beta
            }
        }
    }
}

/// Value and Cartesian gradient of a basis function at one point.
#[derive(Debug, Clone, Copy)]
pub struct BasisEval<T, const D: usize> {
    pub value: T,
    pub gradient: [T; D],
}

/// dim Pi_n in d variables (d = 2 or 3).
pub fn dim_pi(n: usize, d: usize) -> usize {
    match d {
        2 => (n + 1) * (n + 2) / 2,
        3 => (n + 1) * (n + 2) * (n + 3) / 6,
        _ => panic!("only d = 2 or 3 supported"),
    }
}

/// All disk indices of leading degree <= n in lexicographic order.
pub fn disk_indices(n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(dim_pi(n, 2));
    for deg in 0..=n {
        for k in 0..=deg {
            out.push(BasisIndex::Disk { n: deg, k });
        }
    }
    out
}

/// All ball indices of leading degree <= n in lexicographic order.
pub fn ball_indices(n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(dim_pi(n, 3));
    for m in 0..=n {
        for j in 0..=(m / 2) {
            for beta in 0..=(2 * (m - 2 * j)) {
                out.push(BasisIndex::Ball { m, j, beta });
            }
        }
    }
    out
}

/// Ridge polynomial phi_{n,k}(x, y) = U_n(x cos kh + y sin kh) / sqrt(pi),
/// h = pi / (n + 1), with its exact gradient.
pub fn ridge_phi<T: Real>(n: usize, k: usize, x: [T; 2]) -> BasisEval<T, 2> {
    debug_assert!(k <= n);
    let h = T::pi() / us::<T>(n + 1);
    let angle = h * us::<T>(k);
    let (c, s) = (angle.cos(), angle.sin());
    let t = x[0] * c + x[1] * s;
    let (u, du) = chebyshev_u(n, t);
    let inv_sqrt_pi = T::one() / T::pi().sqrt();
    BasisEval {
        value: u * inv_sqrt_pi,
        gradient: [du * c * inv_sqrt_pi, du * s * inv_sqrt_pi],
    }
}

/// Normalizer of the real spherical harmonic of degree k and order l
/// (with the sin/cos doubling for l >= 1).
fn sph_norm<T: Real>(k: usize, l: usize) -> T {
    let two_k1 = us::<T>(2 * k + 1);
    let four_pi = fl::<T>(4.0) * T::pi();
    let mut ratio = T::one(); // (k-l)! / (k+l)!
    for i in (k - l + 1)..=(k + l) {
        ratio = ratio / us::<T>(i);
    }
    let doubling = if l == 0 { T::one() } else { fl::<T>(2.0) };
    (doubling * two_k1 / four_pi * ratio).sqrt()
}

/// Azimuthal order and trig parity encoded by beta: even beta pairs with
/// cos(l phi), odd beta with sin(l phi).
#[inline]
fn beta_order(beta: usize) -> (usize, bool) {
    if beta.is_multiple_of(2) {
        (beta / 2, true)
    } else {
        (beta.div_ceil(2), false)
    }
}

/// Real spherical harmonic S_{beta,k}(azimuth, polar), orthonormal over the
/// unit sphere with the surface measure. Requires beta <= 2k.
pub fn sph_harm<T: Real>(beta: usize, k: usize, azimuth: T, polar: T) -> Result<T> {
    if beta > 2 * k {
        return Err(Error::HarmonicOrderOutOfRange { beta, max: 2 * k });
    }
    let (l, is_cos) = beta_order(beta);
    let lf = us::<T>(l);
    let trig = if is_cos {
        (lf * azimuth).cos()
    } else {
        (lf * azimuth).sin()
    };
    Ok(sph_norm::<T>(k, l) * trig * assoc_legendre(k, l, polar.cos()))
}

/// Solid harmonic H(x) = r^k S_{beta,k}(x/r) and its gradient, evaluated as
/// a polynomial in Cartesian coordinates.
///
/// Decomposition: H = norm * R(z, r^2) * ReIm[(x+iy)^l], where
/// R = r^(k-l) P_k^l(cos polar) / sin^l(polar) satisfies the degree
/// recurrence (k-l) R_k = (2k-1) z R_{k-1} - (k+l-1) r^2 R_{k-2}.
fn solid_harmonic<T: Real>(beta: usize, k: usize, x: [T; 3]) -> (T, [T; 3]) {
    let (l, is_cos) = beta_order(beta);
    debug_assert!(l <= k);
    let two = fl::<T>(2.0);
    let q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let z = x[2];

    // (x + iy)^l and (x + iy)^(l-1)
    let (mut cl, mut sl) = (T::one(), T::zero());
    let (mut cl_prev, mut sl_prev) = (T::zero(), T::zero());
    for _ in 0..l {
        cl_prev = cl;
        sl_prev = sl;
        let c_new = x[0] * cl - x[1] * sl;
        let s_new = x[0] * sl + x[1] * cl;
        cl = c_new;
        sl = s_new;
    }
    let (az, daz_dx, daz_dy) = if is_cos {
        (cl, us::<T>(l) * cl_prev, -(us::<T>(l)) * sl_prev)
    } else {
        (sl, us::<T>(l) * sl_prev, us::<T>(l) * cl_prev)
    };

    // R_k^l(z, q) with partials wrt z and q, seeded at R_l^l = (2l-1)!!.
    let mut dfact = T::one();
    let mut odd = T::one();
    for _ in 0..l {
        dfact = dfact * odd;
        odd = odd + two;
    }
    let (mut r, mut rz, mut rq) = (dfact, T::zero(), T::zero());
    if k > l {
        let (mut rm1, mut rzm1, mut rqm1) = (r, rz, rq);
        let lf = us::<T>(l);
        r = (two * lf + T::one()) * z * rm1;
        rz = (two * lf + T::one()) * rm1;
        rq = T::zero();
        for kk in (l + 2)..=k {
            let kf = us::<T>(kk);
            let c1 = two * kf - T::one();
            let c2 = kf + lf - T::one();
            let denom = kf - lf;
            let r_new = (c1 * z * r - c2 * q * rm1) / denom;
            let rz_new = (c1 * (r + z * rz) - c2 * q * rzm1) / denom;
            let rq_new = (c1 * z * rq - c2 * (rm1 + q * rqm1)) / denom;
            rm1 = r;
            rzm1 = rz;
            rqm1 = rq;
            r = r_new;
            rz = rz_new;
            rq = rq_new;
        }
    }

    let norm = sph_norm::<T>(k, l);
    let value = norm * r * az;
    let grad = [
        norm * (rq * two * x[0] * az + r * daz_dx),
        norm * (rq * two * x[1] * az + r * daz_dy),
        norm * ((rz + rq * two * x[2]) * az),
    ];
    (value, grad)
}

/// Ball basis function phi_{m,j,beta} and its Cartesian gradient, finite at
/// every point of the closed ball.
pub fn ball_phi<T: Real>(m: usize, j: usize, beta: usize, x: [T; 3]) -> BasisEval<T, 3> {
    debug_assert!(j <= m / 2);
    let k = m - 2 * j;
    debug_assert!(beta <= 2 * k);
    let two = fl::<T>(2.0);
    let four = fl::<T>(4.0);
    let q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let b = us::<T>(k) + fl::<T>(0.5);
    let (p, dp) = jacobi_normalized(j, b, two * q - T::one());
    let (h, dh) = solid_harmonic(beta, k, x);
    let c = two.powf(fl::<T>(1.25) + us::<T>(m) * fl::<T>(0.5) - us::<T>(j));
    let mut gradient = [T::zero(); 3];
    for i in 0..3 {
        gradient[i] = c * (dp * four * x[i] * h + p * dh[i]);
    }
    BasisEval {
        value: c * p * h,
        gradient,
    }
}

/// psi = (1 - |x|^2) phi from an already evaluated phi (product rule).
pub fn trial_from_phi<T: Real, const D: usize>(phi: BasisEval<T, D>, x: [T; D]) -> BasisEval<T, D> {
    let two = fl::<T>(2.0);
    let mut r2 = T::zero();
    for &xi in x.iter() {
        r2 = r2 + xi * xi;
    }
    let bump = T::one() - r2;
    let mut gradient = [T::zero(); D];
    for i in 0..D {
        gradient[i] = bump * phi.gradient[i] - two * phi.value * x[i];
    }
    BasisEval {
        value: bump * phi.value,
        gradient,
    }
}

/// A full orthonormal basis of Pi_n, evaluable per member.
pub trait BasisSet<T: Real, const D: usize>: Sync {
    fn degree(&self) -> usize;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn index(&self, pos: usize) -> BasisIndex;
    fn eval_phi(&self, pos: usize, x: [T; D]) -> BasisEval<T, D>;

    /// Trial function psi_pos = (1 - |x|^2) phi_pos.
    fn eval_psi(&self, pos: usize, x: [T; D]) -> BasisEval<T, D> {
        trial_from_phi(self.eval_phi(pos, x), x)
    }
}

/// Ridge polynomial basis of Pi_n on the unit disk.
pub struct DiskBasis {
    degree: usize,
    indices: Vec<BasisIndex>,
}

impl DiskBasis {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            indices: disk_indices(degree),
        }
    }
}

impl<T: Real> BasisSet<T, 2> for DiskBasis {
    fn degree(&self) -> usize {
        self.degree
    }

    fn len(&self) -> usize {
        self.indices.len()
    }

    fn index(&self, pos: usize) -> BasisIndex {
        self.indices[pos]
    }

    fn eval_phi(&self, pos: usize, x: [T; 2]) -> BasisEval<T, 2> {
        match self.indices[pos] {
            BasisIndex::Disk { n, k } => ridge_phi(n, k, x),
            BasisIndex::Ball { .. } => unreachable!(),
        }
    }
}

/// Jacobi-radial times spherical-harmonic basis of Pi_n on the unit ball.
pub struct BallBasis {
    degree: usize,
    indices: Vec<BasisIndex>,
}

impl BallBasis {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            indices: ball_indices(degree),
        }
    }
}

impl<T: Real> BasisSet<T, 3> for BallBasis {
    fn degree(&self) -> usize {
        self.degree
    }

    fn len(&self) -> usize {
        self.indices.len()
    }

    fn index(&self, pos: usize) -> BasisIndex {
        self.indices[pos]
    }

    fn eval_phi(&self, pos: usize, x: [T; 3]) -> BasisEval<T, 3> {
        match self.indices[pos] {
            BasisIndex::Ball { m, j, beta } => ball_phi(m, j, beta, x),
            BasisIndex::Disk { .. } => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{ball_rule, disk_rule};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn dim_pi_table_values() {
        assert_eq!(dim_pi(2, 2), 6);
        assert_eq!(dim_pi(25, 2), 351);
        assert_eq!(dim_pi(4, 3), 35);
        assert_eq!(dim_pi(0, 2), 1);
        assert_eq!(dim_pi(0, 3), 1);
    }

    #[test]
    fn index_positions_are_lexicographic() {
        for (pos, idx) in disk_indices(7).iter().enumerate() {
            assert_eq!(idx.position(), pos);
        }
        for (pos, idx) in ball_indices(6).iter().enumerate() {
            assert_eq!(idx.position(), pos);
        }
        assert_eq!(disk_indices(10).len(), dim_pi(10, 2));
        assert_eq!(ball_indices(6).len(), dim_pi(6, 3));
    }

    #[test]
    fn ridge_phi_constant_and_odd() {
        let e = ridge_phi(0, 0, [0.3f64, -0.2]);
        assert!((e.value - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert_eq!(e.gradient, [0.0, 0.0]);
        for n in [1usize, 3, 5, 9] {
            let e = ridge_phi(n, n / 2, [0.0f64, 0.0]);
            assert_eq!(e.value, 0.0);
        }
    }

    #[test]
    fn disk_basis_orthonormal() {
        let n = 10;
        let basis = DiskBasis::new(n);
        let rule = disk_rule::<f64>(n + 1).unwrap();
        let nn = BasisSet::<f64, 2>::len(&basis);
        // cache values at nodes
        let mut vals = vec![0.0; rule.len() * nn];
        for (ni, &node) in rule.nodes.iter().enumerate() {
            for l in 0..nn {
                vals[ni * nn + l] = basis.eval_phi(l, node).value;
            }
        }
        let mut worst: f64 = 0.0;
        for a in 0..nn {
            for b in a..nn {
                let mut s = 0.0;
                for (ni, &w) in rule.weights.iter().enumerate() {
                    s += w * vals[ni * nn + a] * vals[ni * nn + b];
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).abs());
            }
        }
        assert!(worst < 1e-12, "max Gram deviation {worst}");
    }

    #[test]
    fn ball_phi_constant_mode() {
        let e = ball_phi(0, 0, 0, [0.2f64, -0.1, 0.4]);
        assert!((e.value - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-14);
        for g in e.gradient {
            assert!(g.abs() < 1e-14);
        }
    }

    #[test]
    fn ball_phi_vanishes_at_origin_for_positive_harmonic_degree() {
        for (m, j, beta) in [(1usize, 0usize, 0usize), (3, 1, 2), (4, 1, 1), (5, 2, 0)] {
            let e = ball_phi(m, j, beta, [0.0f64, 0.0, 0.0]);
            assert_eq!(e.value, 0.0, "({m},{j},{beta})");
            assert!(e.gradient.iter().all(|g| g.is_finite()));
        }
    }

    #[test]
    fn ball_basis_orthonormal() {
        let n = 6;
        let basis = BallBasis::new(n);
        let rule = ball_rule::<f64>(10).unwrap();
        let nn = BasisSet::<f64, 3>::len(&basis);
        let mut vals = vec![0.0; rule.len() * nn];
        for (ni, &node) in rule.nodes.iter().enumerate() {
            for l in 0..nn {
                vals[ni * nn + l] = basis.eval_phi(l, node).value;
            }
        }
        let mut worst: f64 = 0.0;
        for a in 0..nn {
            for b in a..nn {
                let mut s = 0.0;
                for (ni, &w) in rule.weights.iter().enumerate() {
                    s += w * vals[ni * nn + a] * vals[ni * nn + b];
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).abs());
            }
        }
        assert!(worst < 1e-11, "max Gram deviation {worst}");
    }

    #[test]
    fn sph_harm_basics() {
        let v = sph_harm(0, 0, 1.0f64, 2.0).unwrap();
        assert!((v - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        // (beta=1, k=1) at polar pi/2, azimuth pi/2: sqrt(3/(4 pi))
        let v = sph_harm(1, 1, PI / 2.0, PI / 2.0).unwrap();
        assert!((v - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-14);
        assert!(sph_harm(5, 2, 0.0f64, 0.0).is_err());
    }

    #[test]
    fn sph_harm_orthonormal_on_sphere() {
        // product rule: Gauss-Legendre in cos(polar) x trapezoid in azimuth
        let q = 16usize;
        let gl = crate::orthopoly::gauss_legendre::<f64>(q).unwrap();
        let m_az = 2 * q;
        let kmax = 6usize;
        let mut items = Vec::new();
        for k in 0..=kmax {
            for beta in 0..=(2 * k) {
                items.push((beta, k));
            }
        }
        for (a, &(b1, k1)) in items.iter().enumerate() {
            for &(b2, k2) in items.iter().skip(a) {
                let mut s = 0.0;
                for (&xi, &w) in gl.nodes.iter().zip(&gl.weights) {
                    let polar = xi.acos();
                    for i in 0..m_az {
                        let az = 2.0 * PI * i as f64 / m_az as f64;
                        s += w
                            * (2.0 * PI / m_az as f64)
                            * sph_harm(b1, k1, az, polar).unwrap()
                            * sph_harm(b2, k2, az, polar).unwrap();
                    }
                }
                let expect = if (b1, k1) == (b2, k2) { 1.0 } else { 0.0 };
                assert!(
                    (s - expect).abs() < 1e-12,
                    "({b1},{k1}) vs ({b2},{k2}): {s}"
                );
            }
        }
    }

    #[test]
    fn ball_phi_matches_spherical_form() {
        // away from poles/origin the Cartesian route must reproduce
        // c r^k p_j(2r^2-1) S(azimuth, polar)
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let m = rng.gen_range(0usize..=7);
            let j = rng.gen_range(0usize..=(m / 2));
            let beta = rng.gen_range(0usize..=(2 * (m - 2 * j)));
            let r: f64 = rng.gen_range(0.1..0.95);
            let polar: f64 = rng.gen_range(0.2..(PI - 0.2));
            let az: f64 = rng.gen_range(0.0..(2.0 * PI));
            let x = [
                r * polar.sin() * az.cos(),
                r * polar.sin() * az.sin(),
                r * polar.cos(),
            ];
            let k = m - 2 * j;
            let c = 2.0f64.powf(1.25 + m as f64 / 2.0 - j as f64);
            let expect = c
                * r.powi(k as i32)
                * jacobi_normalized(j, k as f64 + 0.5, 2.0 * r * r - 1.0).0
                * sph_harm(beta, k, az, polar).unwrap();
            let got = ball_phi(m, j, beta, x).value;
            assert!(
                (got - expect).abs() < 1e-11 * (1.0 + expect.abs()),
                "({m},{j},{beta}) at r={r}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn ball_phi_gradient_matches_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = 1e-6;
        for _ in 0..100 {
            let m = rng.gen_range(0usize..=6);
            let j = rng.gen_range(0usize..=(m / 2));
            let beta = rng.gen_range(0usize..=(2 * (m - 2 * j)));
            let r: f64 = rng.gen_range(0.1..0.9);
            let polar: f64 = rng.gen_range(0.1..(PI - 0.1));
            let az: f64 = rng.gen_range(0.0..(2.0 * PI));
            let x = [
                r * polar.sin() * az.cos(),
                r * polar.sin() * az.sin(),
                r * polar.cos(),
            ];
            let e = ball_phi(m, j, beta, x);
            for dir in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[dir] += h;
                xm[dir] -= h;
                let fd =
                    (ball_phi(m, j, beta, xp).value - ball_phi(m, j, beta, xm).value) / (2.0 * h);
                assert!(
                    (e.gradient[dir] - fd).abs() <= 1e-6 * (1.0 + e.gradient[dir].abs()),
                    "({m},{j},{beta}) dir {dir}: {} vs {fd}",
                    e.gradient[dir]
                );
            }
        }
    }

    #[test]
    fn trial_psi_boundary_and_center() {
        let basis = DiskBasis::new(4);
        let e = BasisSet::<f64, 2>::eval_psi(&basis, 0, [0.0, 0.0]);
        assert!((e.value - 1.0 / PI.sqrt()).abs() < 1e-15);
        for i in 0..200 {
            let theta = 2.0 * PI * i as f64 / 200.0;
            let x = [theta.cos(), theta.sin()];
            for l in 0..BasisSet::<f64, 2>::len(&basis) {
                let e = BasisSet::<f64, 2>::eval_psi(&basis, l, x);
                // (1 - r^2) does not cancel exactly for cos/sin points
                assert!(e.value.abs() < 1e-15);
                assert!(e.gradient.iter().all(|g| g.is_finite()));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn trial_psi_vanishes_on_boundary(theta in 0.0f64..(2.0 * PI), n in 0usize..6, seed in 0usize..100) {
            let basis = DiskBasis::new(n);
            let l = seed % dim_pi(n, 2);
            let e = BasisSet::<f64, 2>::eval_psi(&basis, l, [theta.cos(), theta.sin()]);
            proptest::prop_assert!(e.value.abs() < 1e-15);
        }
    }

    #[test]
    fn trial_psi_gradient_matches_fd() {
        let basis = BallBasis::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let h = 1e-6;
        for _ in 0..20 {
            let l = rng.gen_range(0..BasisSet::<f64, 3>::len(&basis));
            let x = [
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
            ];
            let e = BasisSet::<f64, 3>::eval_psi(&basis, l, x);
            for dir in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[dir] += h;
                xm[dir] -= h;
                let fd = (BasisSet::<f64, 3>::eval_psi(&basis, l, xp).value
                    - BasisSet::<f64, 3>::eval_psi(&basis, l, xm).value)
                    / (2.0 * h);
                assert!((e.gradient[dir] - fd).abs() <= 1e-6 * (1.0 + e.gradient[dir].abs()));
            }
        }
    }
}
