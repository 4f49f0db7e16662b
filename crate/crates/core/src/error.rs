use crate::agents::AgentError;
use crate::assets::AssetError;
use crate::geometry::GeometryError;
use crate::pool::PoolError;
use crate::scene_graph::{DecodeError, ParseError, ValidationReport};
use crate::supervision::SupervisionError;

/// Any failure surfaced by the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("invalid scene graph: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Asset(#[from] AssetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Supervision(#[from] SupervisionError),
    #[error("config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// Machine-readable kind used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Decode(_) => "decode",
            Error::Invalid(_) => "validation",
            Error::Asset(_) => "asset",
            Error::Geometry(_) => "geometry",
            Error::Pool(_) => "pool",
            Error::Agent(_) => "agent",
            Error::Supervision(_) => "supervision",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
