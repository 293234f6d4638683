use thiserror::Error;

/// Errors produced by planning, scenario handling and the oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("SamplingExhausted: informed sampling gave up after {rejections} consecutive rejections ({accepted} of {requested} samples accepted)")]
    SamplingExhausted {
        accepted: usize,
        requested: usize,
        rejections: usize,
    },

    #[error("StartGoalDisconnected: no start to goal path in the roadmap ({nodes} nodes, {edges} edges)")]
    StartGoalDisconnected { nodes: usize, edges: usize },

    #[error("InvalidQuery: {0}")]
    InvalidQuery(String),

    #[error("EndpointMismatch: paths do not share endpoints (gap {gap:.3e} m)")]
    EndpointMismatch { gap: f64 },

    #[error("TooLarge: {0}")]
    TooLarge(String),

    #[error("BadSpec: {0}")]
    BadSpec(String),

    #[error("InvalidParams: {0}")]
    InvalidParams(String),

    #[error("malformed voxel map: {0}")]
    VoxelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable name of the variant, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SamplingExhausted { .. } => "SamplingExhausted",
            Error::StartGoalDisconnected { .. } => "StartGoalDisconnected",
            Error::InvalidQuery(_) => "InvalidQuery",
            Error::EndpointMismatch { .. } => "EndpointMismatch",
            Error::TooLarge(_) => "TooLarge",
            Error::BadSpec(_) => "BadSpec",
            Error::InvalidParams(_) => "InvalidParams",
            Error::VoxelFormat(_) => "VoxelFormat",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
