//! Spectral Galerkin solver for Dirichlet problems on smooth deformations
//! of the unit disk and unit ball.
//!
//! The elliptic problem -div(A grad u) + gamma u = f on Omega = Phi(B) is
//! pulled back to the unit ball B and solved in the polynomial trial space
//! X_n = (1 - ||x||^2) Pi_n, where the Galerkin method converges
//! exponentially in n for smooth data.
//!
//! Everything is generic over the scalar type through [`scalar::Real`]
//! (implemented for `f32` and `f64`); concrete aliases for the common
//! types live at the crate root.

// Index-symmetric matrix kernels (A[i][j] with both sides indexed) read
// better with explicit indices than with iterator adapters.
#![allow(clippy::needless_range_loop)]

pub mod ballbasis;
pub mod domainmap;
pub mod error;
pub mod galerkin;
pub mod jet;
pub mod linalg;
pub mod orthopoly;
pub mod problems;
pub mod quadrature;
pub mod scalar;
pub mod study;

pub use error::{Error, Result};
pub use scalar::Real;

/// Quadrature rule over the unit disk, `f64` scalars.
pub type DiskRule64 = quadrature::BallRule<f64, 2>;
/// Quadrature rule over the unit ball, `f64` scalars.
pub type BallRule64 = quadrature::BallRule<f64, 3>;
pub type DiskRule32 = quadrature::BallRule<f32, 2>;
pub type BallRule32 = quadrature::BallRule<f32, 3>;

/// Planar domain map, `f64` scalars.
pub type DomainMap64 = domainmap::DomainMap<f64, 2>;
/// Solid domain map, `f64` scalars.
pub type BallMap64 = domainmap::DomainMap<f64, 3>;

/// Planar elliptic problem, `f64` scalars.
pub type Problem2d64 = galerkin::EllipticProblem<f64, 2>;
/// Solid elliptic problem, `f64` scalars.
pub type Problem3d64 = galerkin::EllipticProblem<f64, 3>;
pub type Problem2d32 = galerkin::EllipticProblem<f32, 2>;
pub type Problem3d32 = galerkin::EllipticProblem<f32, 3>;

/// Assembled Galerkin system, `f64` scalars.
pub type System64 = galerkin::GalerkinSystem<f64>;
pub type System32 = galerkin::GalerkinSystem<f32>;
