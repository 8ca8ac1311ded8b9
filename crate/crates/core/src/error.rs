use thiserror::Error;

use crate::su2loop::PotentialCase;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic parameter m = {0} is outside [0, 1]")]
    ParameterDomain(f64),

    #[error("F(phi | 1) diverges at |phi| = pi/2 (phi = {0})")]
    LogarithmicSingularity(f64),

    #[error("complete elliptic integral K(m) diverges at m = 1")]
    Divergent,

    #[error("matrix is not traceless (|trace| = {0:e})")]
    NotTraceless(f64),

    #[error("product ab = {0} is not real; the potential does not generate a surface of revolution at lambda = 1")]
    NonRealProduct(num_complex::Complex64),

    #[error("gauge normalization requires a != 0")]
    ZeroCoefficient,

    #[error("mean curvature H must be nonzero and finite")]
    ZeroMeanCurvature,

    #[error("operation not available for the {0:?} case")]
    DegenerateCase(PotentialCase),

    #[error("extended frame is singular at y = {y}, t = {t} (fourth root of unity)")]
    SingularFrame { y: f64, t: f64 },

    #[error("translation part F'F^-1 is not anti-Hermitian (residual {0:e})")]
    BadDerivative(f64),

    #[error("generator has no rotational part (pure translation)")]
    PureTranslation,

    #[error("spectral parameter t = {0} lies at a pole of L (fourth root of unity)")]
    NearPole(f64),

    #[error("spectral parameter t = {0} is a fourth root of unity")]
    FourthRootOfUnity(f64),

    #[error("mu(lambda) vanishes at t = {0}")]
    ZeroMu(f64),

    #[error("conformal factor is negative (v0 = {0}); orientation not normalized")]
    Orientation(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
