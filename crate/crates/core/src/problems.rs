//! Built-in test problems and the config-file problem loader.
//!
//! Every problem manufactures its right-hand side f = -lap(u) + gamma u
//! from the closed-form solution by hyper-dual (jet) evaluation in target
//! coordinates, so f is exact to rounding.

use crate::domainmap::{ball_quadratic, identity_coeff, planar_quadratic, DomainMap};
use crate::error::{Error, Result};
use crate::galerkin::EllipticProblem;
use crate::jet::Jet;
use crate::scalar::{fl, Real};
use serde::Deserialize;
use std::sync::Arc;

pub const BUILTIN_NAMES: &[&str] = &["planar_a05", "ball_a07_b09", "disk_poisson", "ball_poisson"];

/// A problem of either spatial dimension.
#[derive(Clone)]
pub enum AnyProblem<T> {
    D2(EllipticProblem<T, 2>),
    D3(EllipticProblem<T, 3>),
}

impl<T> AnyProblem<T> {
    pub fn dim(&self) -> usize {
        match self {
            AnyProblem::D2(_) => 2,
            AnyProblem::D3(_) => 3,
        }
    }
}

/// Which built-in map a catalog problem transforms through, with its
/// parameters. Carries enough to invert the map on jets.
#[derive(Clone, Copy, Debug)]
enum MapKind {
    Identity,
    PlanarQuadratic { a: f64 },
    BallQuadratic { a: f64, b: f64 },
}

impl MapKind {
    /// Psi = Phi^{-1} on 2-variable jets: x = (sqrt(1 + a(s+t)) - 1)/a,
    /// y = t - x.
    fn inverse2<T: Real>(self, [s, t]: [Jet<T, 2>; 2]) -> [Jet<T, 2>; 2] {
        match self {
            MapKind::Identity => [s, t],
            MapKind::PlanarQuadratic { a } => {
                let one = Jet::constant(T::one());
                let x = ((one + (s + t).scale(fl::<T>(a))).sqrt() - one).scale(fl::<T>(1.0 / a));
                [x, t - x]
            }
            MapKind::BallQuadratic { .. } => unreachable!("3D map in a 2D problem"),
        }
    }

    /// Psi on 3-variable jets; the third coordinate maps independently as
    /// z = (sqrt(1 + b w) - 1)/b.
    fn inverse3<T: Real>(self, [s, t, w]: [Jet<T, 3>; 3]) -> [Jet<T, 3>; 3] {
        match self {
            MapKind::Identity => [s, t, w],
            MapKind::BallQuadratic { a, b } => {
                let one = Jet::constant(T::one());
                let x = ((one + (s + t).scale(fl::<T>(a))).sqrt() - one).scale(fl::<T>(1.0 / a));
                let z = ((one + w.scale(fl::<T>(b))).sqrt() - one).scale(fl::<T>(1.0 / b));
                [x, t - x, z]
            }
            MapKind::PlanarQuadratic { .. } => unreachable!("2D map in a 3D problem"),
        }
    }

    fn build2<T: Real>(self) -> Result<DomainMap<T, 2>> {
        match self {
            MapKind::Identity => Ok(DomainMap::identity()),
            MapKind::PlanarQuadratic { a } => planar_quadratic(a),
            MapKind::BallQuadratic { .. } => unreachable!(),
        }
    }

    fn build3<T: Real>(self) -> Result<DomainMap<T, 3>> {
        match self {
            MapKind::Identity => Ok(DomainMap::identity()),
            MapKind::BallQuadratic { a, b } => ball_quadratic(a, b),
            MapKind::PlanarQuadratic { .. } => unreachable!(),
        }
    }
}

/// Reaction coefficient catalog. Evaluated in target coordinates.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum GammaKind {
    Zero,
    One,
    /// gamma(s, t, ...) = e^{s - t}
    ExpSMinusT,
}

impl GammaKind {
    fn eval<T: Real, const D: usize>(self, p: [T; D]) -> T {
        match self {
            GammaKind::Zero => T::zero(),
            GammaKind::One => T::one(),
            GammaKind::ExpSMinusT => (p[0] - p[1]).exp(),
        }
    }
}

/// Solution catalog. Every entry includes the factor 1 - ||Psi||^2, which
/// vanishes on the boundary of the target domain by construction.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    /// u = 1 - ||Psi||^2
    Bubble,
    /// u = (1 - ||Psi||^2) cos(pi s), 2D only
    BubbleCosPiS,
    /// u = sin((s - t)/2) (1 - ||Psi||^2), 3D only
    BubbleSinHalfDiff,
}

impl SolutionKind {
    fn eval2<T: Real>(self, p: [Jet<T, 2>; 2]) -> Jet<T, 2> {
        let [s, _t] = p;
        match self {
            SolutionKind::Bubble => Jet::constant(T::one()),
            SolutionKind::BubbleCosPiS => s.scale(T::pi()).cos(),
            SolutionKind::BubbleSinHalfDiff => unreachable!(),
        }
    }

    fn eval3<T: Real>(self, p: [Jet<T, 3>; 3]) -> Jet<T, 3> {
        let [s, t, _w] = p;
        match self {
            SolutionKind::Bubble => Jet::constant(T::one()),
            SolutionKind::BubbleSinHalfDiff => (s - t).scale(fl::<T>(0.5)).sin(),
            SolutionKind::BubbleCosPiS => unreachable!(),
        }
    }
}

fn bubble<T: Real, const D: usize>(x: &[Jet<T, D>; D]) -> Jet<T, D> {
    let mut r2 = Jet::constant(T::zero());
    for &xi in x.iter() {
        r2 = r2 + xi * xi;
    }
    Jet::constant(T::one()) - r2
}

fn make_problem2<T: Real>(
    map_kind: MapKind,
    gamma: GammaKind,
    solution: SolutionKind,
) -> Result<EllipticProblem<T, 2>> {
    let u_jet = move |p: [T; 2]| -> Jet<T, 2> {
        let j = Jet::seed(p);
        let x = map_kind.inverse2(j);
        bubble(&x) * solution.eval2(j)
    };
    Ok(EllipticProblem {
        map: map_kind.build2()?,
        coeff_a: Arc::new(identity_coeff::<T, 2>()),
        gamma: Arc::new(move |p| gamma.eval(p)),
        rhs_f: Arc::new(move |p| {
            let u = u_jet(p);
            -u.laplacian() + gamma.eval(p) * u.v
        }),
        true_solution: Some(Arc::new(move |p| u_jet(p).v)),
    })
}

fn make_problem3<T: Real>(
    map_kind: MapKind,
    gamma: GammaKind,
    solution: SolutionKind,
) -> Result<EllipticProblem<T, 3>> {
    let u_jet = move |p: [T; 3]| -> Jet<T, 3> {
        let j = Jet::seed(p);
        let x = map_kind.inverse3(j);
        bubble(&x) * solution.eval3(j)
    };
    Ok(EllipticProblem {
        map: map_kind.build3()?,
        coeff_a: Arc::new(identity_coeff::<T, 3>()),
        gamma: Arc::new(move |p| gamma.eval(p)),
        rhs_f: Arc::new(move |p| {
            let u = u_jet(p);
            -u.laplacian() + gamma.eval(p) * u.v
        }),
        true_solution: Some(Arc::new(move |p| u_jet(p).v)),
    })
}

/// The planar test problem: Omega = Phi(B_2) with the quadratic map at
/// a = 0.5, A = I, gamma = e^{s-t}, u(s,t) = (1 - x^2 - y^2) cos(pi s)
/// where (x, y) = Psi(s, t).
pub fn planar_a05<T: Real>() -> Result<EllipticProblem<T, 2>> {
    make_problem2(
        MapKind::PlanarQuadratic { a: 0.5 },
        GammaKind::ExpSMinusT,
        SolutionKind::BubbleCosPiS,
    )
}

/// The 3D test problem: Omega = Phi(B_3) with the quadratic map at
/// a = 0.7, b = 0.9, A = I, gamma = e^{s-t},
/// u = sin((s - t)/2)(1 - ||Psi(s, t, w)||^2).
pub fn ball_a07_b09<T: Real>() -> Result<EllipticProblem<T, 3>> {
    make_problem3(
        MapKind::BallQuadratic { a: 0.7, b: 0.9 },
        GammaKind::ExpSMinusT,
        SolutionKind::BubbleSinHalfDiff,
    )
}

/// Poisson on the unit disk: -lap u = 1, u = (1 - r^2)/4.
pub fn disk_poisson<T: Real>() -> EllipticProblem<T, 2> {
    EllipticProblem {
        map: DomainMap::identity(),
        coeff_a: Arc::new(identity_coeff::<T, 2>()),
        gamma: Arc::new(|_| T::zero()),
        rhs_f: Arc::new(|_| T::one()),
        true_solution: Some(Arc::new(|p: [T; 2]| {
            (T::one() - p[0] * p[0] - p[1] * p[1]) / fl::<T>(4.0)
        })),
    }
}

/// Poisson on the unit ball: -lap u = 1, u = (1 - r^2)/6.
pub fn ball_poisson<T: Real>() -> EllipticProblem<T, 3> {
    EllipticProblem {
        map: DomainMap::identity(),
        coeff_a: Arc::new(identity_coeff::<T, 3>()),
        gamma: Arc::new(|_| T::zero()),
        rhs_f: Arc::new(|_| T::one()),
        true_solution: Some(Arc::new(|p: [T; 3]| {
            (T::one() - p[0] * p[0] - p[1] * p[1] - p[2] * p[2]) / fl::<T>(6.0)
        })),
    }
}

/// Look up a built-in problem by name.
pub fn builtin_problem<T: Real>(name: &str) -> Result<AnyProblem<T>> {
    match name {
        "planar_a05" => Ok(AnyProblem::D2(planar_a05()?)),
        "ball_a07_b09" => Ok(AnyProblem::D3(ball_a07_b09()?)),
        "disk_poisson" => Ok(AnyProblem::D2(disk_poisson())),
        "ball_poisson" => Ok(AnyProblem::D3(ball_poisson())),
        other => Err(Error::UnknownProblem(
            other.to_string(),
            BUILTIN_NAMES.join(", "),
        )),
    }
}

/// Problem description read from a TOML file: a built-in map with its
/// parameters plus catalog names for gamma and the true solution. The
/// right-hand side is always manufactured.
#[derive(Debug, Deserialize)]
pub struct ProblemConfig {
    /// identity2 | identity3 | planar_quadratic | ball_quadratic
    pub map: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub gamma: GammaKind,
    pub solution: SolutionKind,
}

impl ProblemConfig {
    pub fn build<T: Real>(&self) -> Result<AnyProblem<T>> {
        let require = |param: Option<f64>, name: &str| {
            param.ok_or_else(|| {
                Error::InvalidConfig(format!("map `{}` needs parameter `{name}`", self.map))
            })
        };
        let (kind, dim) = match self.map.as_str() {
            "identity2" => (MapKind::Identity, 2),
            "identity3" => (MapKind::Identity, 3),
            "planar_quadratic" => (
                MapKind::PlanarQuadratic {
                    a: require(self.a, "a")?,
                },
                2,
            ),
            "ball_quadratic" => (
                MapKind::BallQuadratic {
                    a: require(self.a, "a")?,
                    b: require(self.b, "b")?,
                },
                3,
            ),
            other => return Err(Error::UnknownMap(other.to_string())),
        };
        match (dim, self.solution) {
            (2, SolutionKind::BubbleSinHalfDiff) | (3, SolutionKind::BubbleCosPiS) => {
                return Err(Error::InvalidConfig(format!(
                    "solution {:?} is not defined in {dim}D",
                    self.solution
                )))
            }
            _ => {}
        }
        if dim == 2 {
            Ok(AnyProblem::D2(make_problem2(
                kind,
                self.gamma,
                self.solution,
            )?))
        } else {
            Ok(AnyProblem::D3(make_problem3(
                kind,
                self.gamma,
                self.solution,
            )?))
        }
    }
}

/// Resolve a `--problem` argument: a built-in name, or a path to a TOML
/// problem config.
pub fn resolve_problem<T: Real>(spec: &str) -> Result<AnyProblem<T>> {
    match builtin_problem(spec) {
        Ok(p) => Ok(p),
        Err(unknown) => {
            if !std::path::Path::new(spec).exists() {
                return Err(unknown);
            }
            let text = std::fs::read_to_string(spec)?;
            let config: ProblemConfig =
                toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{spec}: {e}")))?;
            config.build()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planar_solution_at_center_and_boundary() {
        let p = planar_a05::<f64>().unwrap();
        let u = p.true_solution.as_ref().unwrap();
        // Phi(0, 0) = (0, 0): u = (1 - 0) cos(0) = 1
        let s0 = (p.map.phi)([0.0, 0.0]);
        assert!((u(s0) - 1.0).abs() < 1e-14);
        // boundary factor kills u on the image of the unit circle
        for k in 0..8 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            let s = (p.map.phi)([th.cos(), th.sin()]);
            assert!(u(s).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_solution_properties() {
        let p = ball_a07_b09::<f64>().unwrap();
        let u = p.true_solution.as_ref().unwrap();
        let g = &p.gamma;
        // gamma = 1 whenever s = t
        assert!((g([0.3, 0.3, -0.2]) - 1.0).abs() < 1e-15);
        // u vanishes on the image of the unit sphere
        for k in 0..8 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            let x = [th.cos() * 0.6, th.sin() * 0.6, 0.8];
            let s = (p.map.phi)(x);
            assert!(u(s).abs() < 1e-13, "u = {}", u(s));
        }
        // sin factor: u = 0 where s = t (pick interior ball points and
        // check the sign structure instead of roots -- s=t is not easy to
        // hit exactly through the map, so verify via the formula directly)
        let inv = p.map.psi_inverse.as_ref().unwrap();
        let s = [0.4, 0.4, 0.1];
        let x = inv(s);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 < 1.0 {
            assert!(u(s).abs() < 1e-14);
        }
    }

    #[test]
    fn manufactured_rhs_matches_fd_laplacian_2d() {
        // f = -lap u + gamma u, checked against a central-difference
        // Laplacian of the closed-form u at interior target points.
        let p = planar_a05::<f64>().unwrap();
        let u = p.true_solution.as_ref().unwrap().clone();
        let f = &p.rhs_f;
        let g = &p.gamma;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-4;
        for _ in 0..50 {
            let r = 0.6 * rng.gen::<f64>();
            let th = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let s = (p.map.phi)([r * th.cos(), r * th.sin()]);
            let mut lap = -4.0 * u(s);
            for d in 0..2 {
                let mut sp = s;
                let mut sm = s;
                sp[d] += h;
                sm[d] -= h;
                lap += u(sp) + u(sm);
            }
            lap /= h * h;
            let expect = -lap + g(s) * u(s);
            assert!(
                (f(s) - expect).abs() < 1e-6 * (1.0 + expect.abs()),
                "f = {} vs {}",
                f(s),
                expect
            );
        }
    }

    #[test]
    fn manufactured_rhs_matches_fd_laplacian_3d() {
        let p = ball_a07_b09::<f64>().unwrap();
        let u = p.true_solution.as_ref().unwrap().clone();
        let f = &p.rhs_f;
        let g = &p.gamma;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = 1e-4;
        for _ in 0..50 {
            let x: [f64; 3] = std::array::from_fn(|_| 0.4 * (2.0 * rng.gen::<f64>() - 1.0));
            let s = (p.map.phi)(x);
            let mut lap = -6.0 * u(s);
            for d in 0..3 {
                let mut sp = s;
                let mut sm = s;
                sp[d] += h;
                sm[d] -= h;
                lap += u(sp) + u(sm);
            }
            lap /= h * h;
            let expect = -lap + g(s) * u(s);
            assert!(
                (f(s) - expect).abs() < 1e-6 * (1.0 + expect.abs()),
                "f = {} vs {}",
                f(s),
                expect
            );
        }
    }

    #[test]
    fn unknown_problem_lists_available() {
        let Err(err) = builtin_problem::<f64>("nope") else {
            panic!("expected an error");
        };
        let msg = err.to_string();
        assert!(msg.contains("planar_a05") && msg.contains("ball_a07_b09"));
    }

    #[test]
    fn config_roundtrip_matches_builtin() {
        let cfg: ProblemConfig = toml::from_str(
            r#"
            map = "planar_quadratic"
            a = 0.5
            gamma = "exp_s_minus_t"
            solution = "bubble_cos_pi_s"
            "#,
        )
        .unwrap();
        let from_cfg = cfg.build::<f64>().unwrap();
        let builtin = planar_a05::<f64>().unwrap();
        let AnyProblem::D2(pc) = from_cfg else {
            panic!("expected 2D")
        };
        let s = (builtin.map.phi)([0.3, -0.2]);
        let ub = builtin.true_solution.as_ref().unwrap()(s);
        let uc = pc.true_solution.as_ref().unwrap()(s);
        assert_eq!(ub, uc);
        assert_eq!((builtin.rhs_f)(s), (pc.rhs_f)(s));
    }

    #[test]
    fn config_rejects_bad_combinations() {
        let cfg: ProblemConfig = toml::from_str(
            r#"
            map = "ball_quadratic"
            a = 0.7
            b = 0.9
            gamma = "zero"
            solution = "bubble_cos_pi_s"
            "#,
        )
        .unwrap();
        assert!(cfg.build::<f64>().is_err());

        let cfg: ProblemConfig = toml::from_str(
            r#"
            map = "planar_quadratic"
            gamma = "zero"
            solution = "bubble"
            "#,
        )
        .unwrap();
        assert!(matches!(cfg.build::<f64>(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn poisson_rhs_and_solutions() {
        let p = disk_poisson::<f64>();
        assert_eq!((p.rhs_f)([0.2, 0.3]), 1.0);
        assert!((p.true_solution.as_ref().unwrap()([0.0, 0.0]) - 0.25).abs() < 1e-16);
        let p = ball_poisson::<f64>();
        assert!((p.true_solution.as_ref().unwrap()([0.0, 0.0, 0.0]) - 1.0 / 6.0).abs() < 1e-16);
    }
}
