use thiserror::Error;

/// Errors raised by state construction, projection and the interferometer models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EraserError {
    #[error("state has zero norm")]
    ZeroNorm,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("amplitude or value is not finite: {0}")]
    NonFinite(String),

    #[error("state carries no marker degree of freedom")]
    NoMarker,

    #[error("conditioning outcome has probability {0:e}, below the 1e-15 threshold")]
    ZeroProbability(f64),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("vector is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("phase is not finite: {0}")]
    NonFinitePhase(f64),

    #[error("the default alternating configuration needs an even channel count, got {0}")]
    OddChannelCount(usize),

    #[error("phase vectors have different lengths ({thetas} vs {phis})")]
    LengthMismatch { thetas: usize, phis: usize },

    #[error("invalid phase configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid screen geometry: {0}")]
    InvalidGeometry(String),

    #[error("pattern is degenerate: {0}")]
    DegeneratePattern(String),

    #[error("invalid event count: {0}")]
    InvalidCount(usize),

    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),
}

pub type Result<T> = std::result::Result<T, EraserError>;
