//! Stage-two layout: violation measurement, the layout score, snapshot
//! rendering, the rule critic and the accept/reject refinement loop.

mod config;
mod critic;
mod refine;
mod score;
mod snapshot;
mod violations;

pub use config::ScoreConfig;
pub use critic::{apply_guidance, rule_critic, Critic, CritiqueInput, RuleCritic};
pub use refine::{layout_digest, refine, RefineTrace, TerminalReason, TraceEntry};
pub use score::{score_layout, LayoutScore};
pub use snapshot::{asset_color, render_snapshots, Raster, SnapshotConfig, SnapshotSet, ViewAxis};
pub use violations::{measure_violations, AssetViolation, ViolationReport, CONTACT_EPS};

#[derive(Debug, thiserror::Error)]
pub enum SupervisionError {
    #[error("invalid score config: {0}")]
    Config(String),
    #[error("layouts have different asset ids: {current:?} vs {previous:?}")]
    IdMismatch { current: Vec<u32>, previous: Vec<u32> },
    #[error("critic failed after {} iterations: {source}", trace.iterations.len())]
    Critic {
        #[source]
        source: crate::agents::AgentError,
        trace: Box<RefineTrace>,
    },
}
