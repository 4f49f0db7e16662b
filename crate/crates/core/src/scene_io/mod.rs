//! Ground selection, layout files, configuration and the end-to-end pipeline.

mod config;
mod ground;
mod layout_io;
mod pipeline;

pub use config::{AgentConfig, AssetSource, CriticKind, PipelineConfig};
pub use ground::{ground_from_keywords, place_ground, select_ground, GroundKind, GroundPlane};
pub use layout_io::{decode_layout, encode_layout, parse_provenance, provenance_str, LayoutExtras};
pub use pipeline::{
    load_graph, load_meshes, run_pipeline, stage_one, PipelineInput, PipelineOutcome, EXIT_FAILURE, EXIT_INPUT,
    EXIT_NOT_CONVERGED, EXIT_OK,
};
