use thiserror::Error;

/// Errors raised by the geometric constructions, solvers and renderers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line has a zero normal (a = b = 0) or non-finite coefficients")]
    InvalidLine,
    #[error("points coincide within {tolerance:e}")]
    DegeneratePoints { tolerance: f64 },
    #[error("reference point lies on the line")]
    ReferenceOnLine,
    #[error("point is not on the conic (residual {residual:e})")]
    PointNotOnConic { residual: f64 },
    #[error("conic gradient vanishes at the point")]
    SingularPoint,
    #[error("lambda must lie strictly inside (0, 1), got {0}")]
    InvalidLambda(f64),
    #[error("sample point is not on the conic (residual {residual:e})")]
    SampleNotOnConic { residual: f64 },
    #[error("sample point lies on a tangent line")]
    SampleOnTangent,
    #[error("lines do not reproduce the conic (relative mismatch {mismatch:e})")]
    NotReproducible { mismatch: f64 },
    #[error("no usable sample point found on the conic")]
    NoSamplePoint,
    #[error("denominator zero")]
    ZeroDenominator,
    #[error("patch needs n >= 1 ribbons, boundings and weights of equal length")]
    ShapeMismatch,
    #[error("tangency point p{index} is not on its tangent line (residual {residual:e})")]
    TangencyViolation { index: usize, residual: f64 },
    #[error("secant {index} is degenerate: its two tangency points coincide")]
    DegenerateSecant { index: usize },
    #[error("secant c{secant} passes through the foreign tangency point p{point}")]
    SecantThroughForeignPoint { secant: usize, point: usize },
    #[error("line l{index} is not tangent to the conic at p{index}")]
    NotTangent { index: usize },
    #[error("weight recovery failed: {0}")]
    RecoveryFailed(String),
    #[error("degenerate constraint input: {0}")]
    DegenerateInput(&'static str),
    #[error("constraint system is rank deficient (sigma5/sigma1 = {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("fitted conic failed validation: {0}")]
    FitValidation(String),
    #[error("polynomial expansion requires the raw form")]
    NotRawForm,
    #[error("invalid bounds: need xmin < xmax and ymin < ymax")]
    InvalidBounds,
    #[error("grid resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
}

impl Error {
    /// Stable identifier used in `error[CODE]:` diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidLine => "InvalidLine",
            Error::DegeneratePoints { .. } => "DegeneratePoints",
            Error::ReferenceOnLine => "ReferenceOnLine",
            Error::PointNotOnConic { .. } => "PointNotOnConic",
            Error::SingularPoint => "SingularPoint",
            Error::InvalidLambda(_) => "InvalidLambda",
            Error::SampleNotOnConic { .. } => "SampleNotOnConic",
            Error::SampleOnTangent => "SampleOnTangent",
            Error::NotReproducible { .. } => "NotReproducible",
            Error::NoSamplePoint => "NoSamplePoint",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::ShapeMismatch => "ShapeMismatch",
            Error::TangencyViolation { .. } => "TangencyViolation",
            Error::DegenerateSecant { .. } => "DegenerateSecant",
            Error::SecantThroughForeignPoint { .. } => "SecantThroughForeignPoint",
            Error::NotTangent { .. } => "NotTangent",
            Error::RecoveryFailed(_) => "RecoveryFailed",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::FitValidation(_) => "FitValidation",
            Error::NotRawForm => "NotRawForm",
            Error::InvalidBounds => "InvalidBounds",
            Error::InvalidResolution(_) => "InvalidResolution",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
