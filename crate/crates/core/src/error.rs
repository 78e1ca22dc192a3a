use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("eigenvalue iteration for the {context} rule with {q} nodes did not converge")]
    QuadratureNoConverge { context: &'static str, q: usize },

    #[error("Jacobian is numerically singular at node ({point}): |det J| = {det:e}")]
    SingularJacobian { point: String, det: f64 },

    #[error("non-finite integrand value at node ({point}){basis}")]
    NonFiniteValue { point: String, basis: String },

    #[error("point ({point}) lies outside the closed unit ball")]
    PointOutsideBall { point: String },

    #[error("spherical harmonic order out of range: beta = {beta} > 2k = {max}")]
    HarmonicOrderOutOfRange { beta: usize, max: usize },

    #[error("map parameter {name} = {value} must lie in (0, 1)")]
    MapParamOutOfRange { name: &'static str, value: f64 },

    #[error("unknown built-in map `{0}`; available: identity2, identity3, planar_quadratic, ball_quadratic")]
    UnknownMap(String),

    #[error("unknown built-in problem `{0}`; available: {1}")]
    UnknownProblem(String, String),

    #[error("system has no solution coefficients; call solve first")]
    NotSolved,

    #[error("solution evaluation in the omega frame needs the inverse map")]
    MissingInverseMap,

    #[error("solve residual {residual:e} exceeds tolerance")]
    ResidualTooLarge { residual: f64 },

    #[error("invalid study config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
