//! Stage-one layout: relation database, size scaling, bounding-box tangency
//! placement, the contact magnet and whole-scene duplication.

mod config;
mod layout;
mod magnet;
mod place;
mod relation;
mod special;

pub use config::{PoolConfig, SizeScale};
pub use layout::{Layout, Provenance};
pub use magnet::{magnet_step, run_magnet, MagnetStepResult};
pub use place::{apply_relation, canonicalize, coarse_place, scale_assets};
pub(crate) use place::relation_gap;
pub use relation::CanonicalRelation;
pub use special::{apply_special, scene_aabb};

#[derive(Debug, thiserror::Error)]
pub enum PoolError {
    #[error("no mesh for asset id {0}")]
    MissingMesh(u32),
    #[error("relation of asset {subject} is not canonical: '{phrase}'")]
    NotCanonical { subject: u32, phrase: String },
    #[error("cannot classify relation '{phrase}' of asset {subject}: {source}")]
    Classification {
        subject: u32,
        phrase: String,
        #[source]
        source: Box<crate::agents::AgentError>,
    },
    #[error("asset {0} has an empty contour")]
    DegenerateContour(u32),
    #[error("invalid pool config: {0}")]
    Config(String),
}
