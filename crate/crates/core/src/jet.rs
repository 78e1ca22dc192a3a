//! Second-order forward-mode dual numbers ("jets") in D variables.
//!
//! A `Jet` carries a value, the full gradient, and the full Hessian, so a
//! manufactured right-hand side f = -lap(u) + gamma u can be produced from a
//! closed-form u exactly to rounding, with no finite-difference floor.

use crate::scalar::{fl, Real};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy)]
pub struct Jet<T, const D: usize> {
    pub v: T,
    pub g: [T; D],
    pub h: [[T; D]; D],
}

impl<T: Real, const D: usize> Jet<T, D> {
    /// Constant (zero derivatives).
    pub fn constant(v: T) -> Self {
        Jet {
            v,
            g: [T::zero(); D],
            h: [[T::zero(); D]; D],
        }
    }

    /// Independent variable number `index` seeded at `v`.
    pub fn variable(v: T, index: usize) -> Self {
        let mut g = [T::zero(); D];
        g[index] = T::one();
        Jet {
            v,
            g,
            h: [[T::zero(); D]; D],
        }
    }

    /// Seed the full variable vector at a point.
    pub fn seed(point: [T; D]) -> [Self; D] {
        std::array::from_fn(|i| Jet::variable(point[i], i))
    }

    pub fn laplacian(&self) -> T {
        let mut s = T::zero();
        for i in 0..D {
            s = s + self.h[i][i];
        }
        s
    }

    /// Chain rule for a scalar function with derivatives f', f''.
    fn unary(self, f0: T, f1: T, f2: T) -> Self {
        let mut g = [T::zero(); D];
        let mut h = [[T::zero(); D]; D];
        for i in 0..D {
            g[i] = f1 * self.g[i];
            for j in 0..D {
                h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        Jet { v: f0, g, h }
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.unary(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.unary(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.unary(e, e, e)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let f1 = fl::<T>(0.5) / r;
        let f2 = -fl::<T>(0.25) / (r * self.v);
        self.unary(r, f1, f2)
    }

    pub fn recip(self) -> Self {
        let inv = T::one() / self.v;
        self.unary(inv, -inv * inv, fl::<T>(2.0) * inv * inv * inv)
    }

    pub fn scale(self, c: T) -> Self {
        self.unary(self.v * c, c, T::zero())
    }
}

impl<T: Real, const D: usize> Add for Jet<T, D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out.v = self.v + rhs.v;
        for i in 0..D {
            out.g[i] = self.g[i] + rhs.g[i];
            for j in 0..D {
                out.h[i][j] = self.h[i][j] + rhs.h[i][j];
            }
        }
        out
    }
}

impl<T: Real, const D: usize> Sub for Jet<T, D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real, const D: usize> Neg for Jet<T, D> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        out.v = -self.v;
        for i in 0..D {
            out.g[i] = -self.g[i];
            for j in 0..D {
                out.h[i][j] = -self.h[i][j];
            }
        }
        out
    }
}

impl<T: Real, const D: usize> Mul for Jet<T, D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut g = [T::zero(); D];
        let mut h = [[T::zero(); D]; D];
        for i in 0..D {
            g[i] = self.g[i] * rhs.v + self.v * rhs.g[i];
            for j in 0..D {
                h[i][j] = self.h[i][j] * rhs.v
                    + self.v * rhs.h[i][j]
                    + self.g[i] * rhs.g[j]
                    + self.g[j] * rhs.g[i];
            }
        }
        Jet {
            v: self.v * rhs.v,
            g,
            h,
        }
    }
}

impl<T: Real, const D: usize> Div for Jet<T, D> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // division via reciprocal chain rule
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J2 = Jet<f64, 2>;

    #[test]
    fn polynomial_derivatives_exact() {
        // u(x, y) = x^2 y + 3 y
        let [x, y] = J2::seed([1.5, -0.7]);
        let u = x * x * y + y.scale(3.0);
        assert!((u.v - (1.5 * 1.5 * -0.7 + 3.0 * -0.7)).abs() < 1e-15);
        assert!((u.g[0] - 2.0 * 1.5 * -0.7).abs() < 1e-15);
        assert!((u.g[1] - (1.5 * 1.5 + 3.0)).abs() < 1e-15);
        assert!((u.h[0][0] - 2.0 * -0.7).abs() < 1e-15);
        assert!((u.h[0][1] - 2.0 * 1.5).abs() < 1e-15);
        assert!((u.laplacian() - 2.0 * -0.7).abs() < 1e-15);
    }

    #[test]
    fn transcendental_laplacian() {
        // u = sin(x) exp(y): lap u = (-1 + 1) u = 0
        let [x, y] = J2::seed([0.4, 0.9]);
        let u = x.sin() * y.exp();
        assert!(u.laplacian().abs() < 1e-14);
    }

    #[test]
    fn sqrt_and_division_hessians() {
        // u = sqrt(1 + x + y) has u_xx = -1/(4 (1+x+y)^(3/2))
        let [x, y] = J2::seed([0.3, 0.2]);
        let u = (Jet::constant(1.0) + x + y).sqrt();
        let expect = -0.25 / (1.5f64).powf(1.5);
        assert!((u.h[0][0] - expect).abs() < 1e-15);
        assert!((u.h[0][1] - expect).abs() < 1e-15);

        // u = x / y
        let u = x / y;
        assert!((u.v - 1.5).abs() < 1e-14);
        assert!((u.g[0] - 1.0 / 0.2).abs() < 1e-12);
        assert!((u.g[1] + 0.3 / 0.04).abs() < 1e-11);
        assert!((u.h[1][1] - 2.0 * 0.3 / 0.008).abs() < 1e-10);
    }

    #[test]
    fn hessian_symmetric() {
        let [x, y, z] = Jet::<f64, 3>::seed([0.2, -0.4, 0.7]);
        let u = (x * y).sin() * z.exp() + (x * z).cos();
        for i in 0..3 {
            for j in 0..3 {
                assert!((u.h[i][j] - u.h[j][i]).abs() < 1e-14);
            }
        }
    }
}
