use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown or unsupported root system type `{0}`")]
    UnknownType(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("stabilization failed for {pair} within translate cap {cap}")]
    NoStabilization { pair: String, cap: usize },

    #[error("non-triangular periodic system: {0}")]
    NonTriangular(String),

    #[error("GKM condition fails: {0}")]
    GkmFailure(String),

    #[error("edge label reduces to zero over {0}")]
    ZeroLabel(String),

    #[error("stalk at {0} is indeterminate; rerun with a larger degree bound")]
    IndeterminateStalk(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("internal error (this is a bug): {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
