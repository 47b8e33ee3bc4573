use thiserror::Error;

/// Errors raised by the cohomology pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("composition of differentials is not zero")]
    CompositionNotZero,
    #[error("direct system has no groups")]
    EmptySystem,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not a cocycle")]
    NotACocycle,
    #[error("alpha is rational")]
    RationalAlpha,
    #[error("comparison could not be certified at the available precision: {0}")]
    UncertifiedComparison(String),
    #[error("substitution is not primitive")]
    NonPrimitive,
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("sample too short to certify: {0}")]
    InsufficientSample(String),
    #[error("degree {degree} out of range 1..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("face index {index} out of range for a {dim}-simplex")]
    FaceOutOfRange { index: usize, dim: usize },
    #[error("pattern does not occur in the sample")]
    PatternNotFound,
    #[error("patch spaces are not built from the same sample")]
    NotComparable,
    #[error("no connecting map from level to base")]
    MissingConnectingMap,
    #[error("resolution {0} not available")]
    ResolutionUnavailable(usize),
    #[error("exact couple is not exact at {0}")]
    NotExact(String),
    #[error("not a morphism of exact couples: square {0} fails")]
    NotAMorphism(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid cellular map: {0}")]
    InvalidMap(String),
    #[error("zoom condition violated: {0}")]
    NotZoomedOut(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CompositionNotZero => "CompositionNotZero",
            Error::EmptySystem => "EmptySystem",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotACocycle => "NotACocycle",
            Error::RationalAlpha => "RationalAlpha",
            Error::UncertifiedComparison(_) => "UncertifiedComparison",
            Error::NonPrimitive => "NonPrimitive",
            Error::TooFewPoints => "TooFewPoints",
            Error::InsufficientSample(_) => "InsufficientSample",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::FaceOutOfRange { .. } => "FaceOutOfRange",
            Error::PatternNotFound => "PatternNotFound",
            Error::NotComparable => "NotComparable",
            Error::MissingConnectingMap => "MissingConnectingMap",
            Error::ResolutionUnavailable(_) => "ResolutionUnavailable",
            Error::NotExact(_) => "NotExact",
            Error::NotAMorphism(_) => "NotAMorphism",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::InvalidMap(_) => "InvalidMap",
            Error::NotZoomedOut(_) => "NotZoomedOut",
            Error::Parse(_) => "Parse",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
