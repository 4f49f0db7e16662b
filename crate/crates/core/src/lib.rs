//! Physics-guided compositional 3D scene layout.
//!
//! A scene description is parsed into a [`SceneGraph`], each asset is backed by a
//! triangle mesh, and a two-stage layout places them:
//!
//! 1. the physical pool snaps bounding boxes together according to canonical
//!    spatial relations, then a contact magnet pulls related assets together
//!    along their nearest contour vertices;
//! 2. a supervision loop measures physical violations, asks a critic for
//!    per-asset moves and keeps a candidate only when the layout score does not
//!    regress.
//!
//! Language-model agents are optional. Every agent call goes through an
//! [`agents::AgentClient`] that can record and replay transcripts, and every
//! stage has an offline rule-based default.
//!
//! The world frame is right-handed and Z-up; the ground is the plane `z = 0`.

pub mod agents;
pub mod assets;
pub mod error;
pub mod geometry;
pub mod math;
pub mod pool;
pub mod scene_graph;
pub mod scene_io;
pub mod supervision;

pub use assets::{Mesh, PlacedAsset};
pub use error::{Error, Result};
pub use geometry::{Aabb, ContourCloud, NearestPair};
pub use pool::{CanonicalRelation, Layout, PoolConfig};
pub use scene_graph::{SceneGraph, SizeClass, SpecialRelation};
pub use scene_io::{GroundKind, GroundPlane, PipelineConfig};
pub use supervision::{LayoutScore, ScoreConfig};
