use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible partition: {cells} cells of S^{sphere_dim} reach diameter {achieved:.6}, requested {requested:.6}")]
    InfeasiblePartition {
        sphere_dim: usize,
        cells: usize,
        achieved: f64,
        requested: f64,
    },

    #[error("instance exceeds desk-scale limit: {0}")]
    SizeLimit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
