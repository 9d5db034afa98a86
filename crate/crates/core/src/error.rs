use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "point {re} + {im}i lies outside the admissible disk (|z| = {modulus}, limit {limit})"
    )]
    PointOutsideDisk {
        re: f64,
        im: f64,
        modulus: f64,
        limit: f64,
    },

    #[error("quadrature did not converge for {what}: {subdivisions} subintervals, error estimate {error_estimate:e}")]
    QuadratureNonconvergence {
        what: &'static str,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("map is not sense-preserving: Jacobian {jacobian:e} at {re} + {im}i")]
    NotSensePreserving { re: f64, im: f64, jacobian: f64 },

    #[error("crosscut of radius {rho} around the given boundary point is empty")]
    EmptyCrosscut { rho: f64 },

    #[error("arc set measure {measure} outside (0, 2π)")]
    DegenerateE { measure: f64 },

    #[error("invalid arc set: {0}")]
    InvalidArcSet(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("polygon is self-intersecting (segments {first} and {second})")]
    SelfIntersecting { first: usize, second: usize },

    #[error("no interior path found between sampled points; raster grid {grid} too coarse")]
    PathNotFound { grid: usize },

    #[error("‖D_f‖ = {value:e} at radius {radius} is too small to divide by")]
    DivisionDegenerate { radius: f64, value: f64 },

    #[error("normalized radial integral A({radius}) = {value} exceeds 1")]
    NormalizationViolation { radius: f64, value: f64 },

    #[error("map is not a self-map of the disk: |f| = {modulus} at {re} + {im}i")]
    NotSelfMap { re: f64, im: f64, modulus: f64 },

    #[error("declared K = {declared} is below the empirical lower bound {lower}")]
    KBelowLowerBound { declared: f64, lower: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("map spec: {0}")]
    Spec(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
