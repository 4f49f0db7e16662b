//! The language-model critic without a network: a stub transport answers
//! once in record mode, then the same exchange is served from the transcript.

use std::sync::Arc;

use physlayout::agents::{chat_response, AgentClient, AgentError, LlmCritic, Mode, Transport};
use physlayout::scene_graph::parse_dsl;
use physlayout::scene_io::{load_meshes, stage_one, AssetSource};
use physlayout::supervision::{measure_violations, refine};
use physlayout::{PoolConfig, ScoreConfig};
use serde_json::Value;

/// Answers every request with the same critique.
struct Canned;

impl Transport for Canned {
    fn send(&self, _endpoint: &str, _api_key: Option<&str>, _body: &Value) -> Result<Value, AgentError> {
        Ok(chat_response(
            r#"{"labels": {"1": "negative", "2": "positive"}, "moves": {"1": {"displacement": [0, 0, -0.3]}}, "rationale": "the bird hovers; lower it"}"#,
        ))
    }

    fn uses_network(&self) -> bool {
        false
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_dsl(include_str!("scenes/bird_chair.scene"))?;
    let meshes = load_meshes(&graph, &AssetSource::Primitives, std::path::Path::new("."))?;
    let (pool, score) = (PoolConfig::default(), ScoreConfig::default());
    let mut layout = stage_one(&graph, &meshes, &pool, None)?;
    layout.asset_mut(1).unwrap().translation.z += 0.3;

    let dir = std::env::temp_dir().join(format!("physlayout-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let transcript = dir.join("critic.jsonl");
    let _ = std::fs::remove_file(&transcript);

    for mode in [Mode::Record, Mode::Replay] {
        let client = AgentClient::new("http://stub.invalid", "stub", "UNUSED_KEY", mode, Some(transcript.clone()))
            .with_transport(Arc::new(Canned));
        let mut critic = LlmCritic { client, description: graph.description.clone() };
        let (out, trace) = refine(&layout, &mut critic, &score, &pool)?;
        let clean = measure_violations(&out, &score, &pool).is_clean();
        println!("{mode:?}: {} -> {:.3}, clean {clean}", trace.initial_score, trace.final_score());
    }
    println!("transcript at {}", transcript.display());
    Ok(())
}
