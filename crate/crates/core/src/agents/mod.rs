//! Language-agent clients: scene extraction, relation classification and
//! layout supervision, with transcript record and replay.

mod client;
mod ops;
pub mod prompts;
mod transcript;
mod types;

pub use client::{chat_response, network_disabled, AgentClient, HttpTransport, Mode, Transport};
pub use ops::{
    classify_ground, classify_relation, critique_layout, extract_scene_graph, lookup_synonym, parse_critique, SYNONYMS,
};
pub use transcript::{request_hash, Transcript, TranscriptEntry};
pub use types::{CritiqueResult, Label, LayoutGuidance, Move};

use crate::scene_graph::{DecodeError, SceneDescription, ValidationReport};
use crate::supervision::{Critic, CritiqueInput};

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("no recorded response for request {0}")]
    ReplayMiss(String),
    #[error("transcript: {0}")]
    Transcript(String),
    #[error("environment variable {0} with the api key is not set")]
    MissingApiKey(String),
    #[error("response is not the expected JSON object: {0}")]
    BadResponse(String),
    #[error("scene graph response: {0}")]
    Schema(#[from] DecodeError),
    #[error("scene graph response fails validation: {0}")]
    InvalidGraph(ValidationReport),
    #[error("cannot classify relation '{0}' without an agent")]
    Unclassifiable(String),
    #[error("agent answered '{0}', which is not in the relation database")]
    OutsideDatabase(String),
    #[error("malformed critique: {0}")]
    MalformedLabels(String),
    #[error("critique gives a move for positive asset {0}")]
    GuidanceForPositive(u32),
    #[error("the language critic needs snapshots")]
    MissingSnapshots,
}

/// The supervisor agent as a refinement critic.
#[derive(Debug, Clone)]
pub struct LlmCritic {
    pub client: AgentClient,
    pub description: SceneDescription,
}

impl Critic for LlmCritic {
    fn needs_snapshots(&self) -> bool {
        true
    }

    fn critique(&mut self, input: &CritiqueInput<'_>, attempt: u32) -> Result<CritiqueResult, AgentError> {
        let snaps = input.snapshots.ok_or(AgentError::MissingSnapshots)?;
        critique_layout(
            snaps,
            &self.description,
            &input.layout.graph,
            input.layout,
            &self.client,
            input.score.delta_max,
            attempt,
        )
    }
}
