//! Product quadrature rules over the unit disk and unit ball.

use crate::error::{Error, Result};
use crate::orthopoly::{gauss_jacobi_02, gauss_legendre};
use crate::scalar::{fl, us, Real};

/// Quadrature rule over the unit disk (D = 2) or unit ball (D = 3).
/// Nodes are stored in Cartesian coordinates and lie strictly inside the
/// ball; weights are positive and sum to the ball volume.
#[derive(Debug, Clone)]
pub struct BallRule<T, const D: usize> {
    pub q: usize,
    pub nodes: Vec<[T; D]>,
    pub weights: Vec<T>,
    /// Total polynomial degree up to which the rule is exact.
    pub exact_degree: usize,
}

impl<T: Real, const D: usize> BallRule<T, D> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of w_i g(x_i). Fails on a non-finite integrand value, reporting
    /// the offending node.
    pub fn integrate<F>(&self, g: F) -> Result<T>
    where
        F: Fn([T; D]) -> T,
    {
        let mut sum = T::zero();
        for (node, &w) in self.nodes.iter().zip(&self.weights) {
            let v = g(*node);
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    point: format!("{node:?}"),
                    basis: String::new(),
                });
            }
            sum = sum + w * v;
        }
        Ok(sum)
    }
}

/// Product rule on the unit disk: (q+1)-point Gauss-Legendre radially on
/// [0,1] against r dr, trapezoid with 2q+1 subdivisions in the azimuth.
/// Exact for all polynomials of total degree <= 2q.
pub fn disk_rule<T: Real>(q: usize) -> Result<BallRule<T, 2>> {
    assert!(q >= 1);
    let (r_nodes, r_weights) = gauss_legendre::<T>(q + 1)?.to_unit_interval();
    let m_count = 2 * q + 1;
    let dtheta = fl::<T>(2.0) * T::pi() / us::<T>(m_count);
    let mut nodes = Vec::with_capacity((q + 1) * m_count);
    let mut weights = Vec::with_capacity((q + 1) * m_count);
    for (&r, &wr) in r_nodes.iter().zip(&r_weights) {
        for m in 0..m_count {
            let theta = dtheta * us::<T>(m);
            nodes.push([r * theta.cos(), r * theta.sin()]);
            weights.push(wr * dtheta * r);
        }
    }
    Ok(BallRule {
        q,
        nodes,
        weights,
        exact_degree: 2 * q,
    })
}

/// Product rule on the unit ball: full-period trapezoid (2q points) in the
/// azimuth, q-point Gauss-Legendre in the polar cosine, and the rescaled
/// (1+t)^2 Gauss rule radially. 2q^3 nodes, exact through degree 2q - 1.
pub fn ball_rule<T: Real>(q: usize) -> Result<BallRule<T, 3>> {
    assert!(q >= 1);
    let polar = gauss_legendre::<T>(q)?;
    let (r_nodes, r_weights) = gauss_jacobi_02::<T>(q)?.radial_form();
    let az_weight = T::pi() / us::<T>(q);
    let mut nodes = Vec::with_capacity(2 * q * q * q);
    let mut weights = Vec::with_capacity(2 * q * q * q);
    for i in 1..=(2 * q) {
        let theta = T::pi() * us::<T>(i) / us::<T>(q);
        let (ct, st) = (theta.cos(), theta.sin());
        for (&xi, &w_polar) in polar.nodes.iter().zip(&polar.weights) {
            // cos(phi) = xi with phi the polar angle
            let sin_phi = ((T::one() - xi) * (T::one() + xi)).sqrt();
            for (&r, &nu) in r_nodes.iter().zip(&r_weights) {
                nodes.push([r * sin_phi * ct, r * sin_phi * st, r * xi]);
                weights.push(az_weight * w_polar * nu);
            }
        }
    }
    Ok(BallRule {
        q,
        nodes,
        weights,
        exact_degree: 2 * q - 1,
    })
}
