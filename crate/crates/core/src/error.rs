use core::fmt;

/// Errors reported by geometry, lifting, sampling, and scan operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that needs at least one point received none.
    EmptyPointSet,
    /// Operands live in different ambient dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// The ambient dimension is outside the supported range.
    UnsupportedDimension(usize),
    /// A convex-combination weight was outside its admissible interval.
    InvalidLambda(f64),
    /// The concavity parameter is at or below the integrability threshold
    /// `-1/n` for the given base dimension.
    InvalidSRange { s: f64, dim: usize },
    /// A sampled height was not strictly positive and cannot be lifted.
    NonPositiveSample(f64),
    /// A hypograph generator carried a negative height.
    NegativeHeight(f64),
    /// The body kind does not match the sign of the concavity parameter.
    KindMismatch,
    /// Grid functions with different spacing or dimension were combined.
    GridMismatch,
    /// A parameter failed validation; the message names it.
    InvalidParameter(&'static str),
    /// The region under the function graph has zero measure; rejection
    /// sampling from it cannot terminate.
    ZeroMeasureSupport,
    /// Rejection sampling exceeded its attempt cap.
    SamplingStalled,
    /// A scan parameter fell outside the declared range.
    TOutsideRange { t: f64, lo: f64, hi: f64 },
    /// A coefficient body had a vertex outside the closed positive orthant.
    CoefficientsOutsidePositiveOrthant,
    /// Panel quadrature failed to converge within its depth budget.
    QuadratureNoConvergence,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPointSet => write!(f, "operation requires at least one point"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}"),
            Error::InvalidLambda(l) => write!(f, "combination weight {l} outside admissible interval"),
            Error::InvalidSRange { s, dim } => {
                write!(f, "concavity parameter {s} not above -1/{dim}")
            }
            Error::NonPositiveSample(z) => write!(f, "sample height {z} is not strictly positive"),
            Error::NegativeHeight(z) => write!(f, "hypograph generator height {z} is negative"),
            Error::KindMismatch => write!(f, "body kind does not match the sign of s"),
            Error::GridMismatch => write!(f, "grid functions are not compatible"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ZeroMeasureSupport => write!(f, "region under the graph has zero measure"),
            Error::SamplingStalled => write!(f, "rejection sampling exceeded its attempt cap"),
            Error::TOutsideRange { t, lo, hi } => {
                write!(f, "parameter t = {t} outside scan range [{lo}, {hi}]")
            }
            Error::CoefficientsOutsidePositiveOrthant => {
                write!(f, "coefficient body leaves the closed positive orthant")
            }
            Error::QuadratureNoConvergence => write!(f, "panel quadrature did not converge"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
