use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed layer: {0}")]
    MalformedLayer(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not physical: {0}")]
    NonPhysical(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("fit did not converge: {message}")]
    NonConvergence { message: String, best: Vec<f64> },

    #[error("decay unidentifiable: {0}")]
    Unidentifiable(String),

    #[error("confusion matrix is singular (condition number {0:.3e})")]
    SingularConfusion(f64),

    #[error("acceptance probability {got:.4} below floor {floor:.4}")]
    LowAcceptance { got: f64, floor: f64 },

    #[error("calibration scan contrast {contrast:.4} below threshold {threshold:.4}")]
    LowContrast { contrast: f64, threshold: f64 },

    #[error("unknown noise preset `{0}`")]
    UnknownPreset(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("record error: {0}")]
    Record(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
