mod common;

use std::sync::atomic::Ordering;

use common::*;
use physlayout::agents::{
    chat_response, classify_relation, critique_layout, extract_scene_graph, AgentClient, AgentError, Label, LlmCritic,
    Mode,
};
use physlayout::math::Vec3;
use physlayout::pool::{CanonicalRelation, PoolConfig};
use physlayout::scene_graph::{SceneDescription, SizeClass};
use physlayout::supervision::{refine, render_snapshots, ScoreConfig, SnapshotConfig, TerminalReason};

#[test]
#[ignore = "rewrites the transcript fixtures; run after changing a prompt"]
fn regenerate_transcripts() {
    record_fixtures(&fixture(""));
}

#[test]
fn fixtures_are_current() {
    // recording into a scratch directory must reproduce the checked-in files
    let dir = tempfile::tempdir().unwrap();
    record_fixtures(dir.path());
    for name in ["extract_bird_chair.jsonl", "classify_hovering_beside.jsonl", "critique_floating_bird.jsonl"] {
        let fresh = std::fs::read(dir.path().join(name)).unwrap();
        let stored = std::fs::read(fixture(name)).unwrap();
        assert!(fresh == stored, "{name} is stale; run the ignored regenerate_transcripts test");
    }
}

#[test]
fn replayed_extraction() {
    let (client, net) = replay_client("extract_bird_chair.jsonl");
    let g = extract_scene_graph(&SceneDescription::new("A bird standing on a chair").unwrap(), &client).unwrap();
    assert_eq!(g.assets.len(), 2);
    assert_eq!((g.assets[0].name.as_str(), g.assets[0].size), ("bird", SizeClass::Small));
    assert_eq!((g.assets[1].name.as_str(), g.assets[1].size), ("chair", SizeClass::Medium));
    assert_eq!(g.core_id(), 2);
    assert_eq!(g.relation_of(1).unwrap().relation.canonical(), Some(CanonicalRelation::On));
    assert_eq!(net.calls.load(Ordering::SeqCst), 0);
}

#[test]
fn replay_miss_is_an_error() {
    let (client, net) = replay_client("extract_bird_chair.jsonl");
    let err = extract_scene_graph(&SceneDescription::new("A cat under a table").unwrap(), &client).unwrap_err();
    assert!(matches!(err, AgentError::ReplayMiss(_)), "{err}");
    assert_eq!(net.calls.load(Ordering::SeqCst), 0);
}

#[test]
fn extraction_with_bad_core_relation_is_rejected() {
    let answer = r#"{"description": "five things", "assets": [
        {"id": 1, "name": "a", "enriched_desc": "a", "size": "small"},
        {"id": 2, "name": "b", "enriched_desc": "b", "size": "large"},
        {"id": 3, "name": "c", "enriched_desc": "c", "size": "small"},
        {"id": 4, "name": "d", "enriched_desc": "d", "size": "small"},
        {"id": 5, "name": "e", "enriched_desc": "e", "size": "small"}],
      "relations": [{"subject": 1, "relation": "on", "target": 2}, {"subject": 2, "relation": "left", "target": 1},
        {"subject": 3, "relation": "left"}, {"subject": 4, "relation": "right"}, {"subject": 5, "relation": "front"}],
      "special": "none"}"#;
    let t = scripted(move |_| chat_response(answer));
    let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t);
    let err = extract_scene_graph(&SceneDescription::new("five things").unwrap(), &client).unwrap_err();
    match err {
        AgentError::InvalidGraph(r) => assert!(r.violations.iter().any(|v| v.field == "relations[1]"), "{r}"),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn fenced_answers_are_not_repaired() {
    let t = scripted(|_| chat_response("```json\n{\"relation\": \"on\"}\n```"));
    let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t);
    assert!(matches!(classify_relation("balanced atop of", Some(&client)), Err(AgentError::BadResponse(_))));
}

#[test]
fn classification_table_then_agent() {
    assert_eq!(classify_relation("on", None).unwrap(), CanonicalRelation::On);
    assert_eq!(classify_relation("on top of", None).unwrap(), CanonicalRelation::On);
    assert_eq!(classify_relation("Perched   upon", None).unwrap(), CanonicalRelation::On);
    assert_eq!(classify_relation("leaning against", None).unwrap(), CanonicalRelation::LeaningOn);
    assert!(matches!(classify_relation("quantum-entangled with", None), Err(AgentError::Unclassifiable(_))));

    let (client, net) = replay_client("classify_hovering_beside.jsonl");
    assert_eq!(classify_relation("hovering beside", Some(&client)).unwrap(), CanonicalRelation::Near);
    // table hits never reach the client
    assert_eq!(classify_relation("next to", Some(&client)).unwrap(), CanonicalRelation::Near);
    assert_eq!(net.calls.load(Ordering::SeqCst), 0);
}

#[test]
fn classification_outside_database_fails() {
    let t = scripted(|_| chat_response(r#"{"relation": "inside"}"#));
    let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t);
    assert!(matches!(classify_relation("tucked into", Some(&client)), Err(AgentError::OutsideDatabase(_))));
}

#[test]
fn replayed_critique_lowers_the_bird() {
    let layout = floating_bird();
    let snaps = render_snapshots(&layout, &SnapshotConfig::default());
    let (client, net) = replay_client("critique_floating_bird.jsonl");
    let c = critique_layout(&snaps, &layout.graph.description, &layout.graph, &layout, &client, 0.5, 0).unwrap();
    assert_eq!(c.labels[&1], Label::Negative);
    assert_eq!(c.labels[&2], Label::Positive);
    assert_eq!(c.guidance.moves[&1].displacement, Vec3::new(0.0, 0.0, -0.3));
    assert!(c.guidance.moves[&1].displacement.norm() <= 0.5);
    assert_eq!(net.calls.load(Ordering::SeqCst), 0);
}

#[test]
fn critique_moves_are_clamped() {
    let layout = floating_bird();
    let snaps = render_snapshots(&layout, &SnapshotConfig::default());
    let t = scripted(|_| {
        chat_response(r#"{"labels": {"1": "negative", "2": "positive"}, "moves": {"1": {"displacement": [2, 0, 0]}}}"#)
    });
    let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t);
    let c = critique_layout(&snaps, &layout.graph.description, &layout.graph, &layout, &client, 0.5, 0).unwrap();
    assert_eq!(c.guidance.moves[&1].displacement, Vec3::new(0.5, 0.0, 0.0));
}

#[test]
fn critique_contract_violations() {
    let layout = floating_bird();
    let snaps = render_snapshots(&layout, &SnapshotConfig::default());
    let ask = |answer: &'static str| {
        let t = scripted(move |_| chat_response(answer));
        let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t);
        critique_layout(&snaps, &layout.graph.description, &layout.graph, &layout, &client, 0.5, 0)
    };
    let r = ask(r#"{"labels": {"1": "positive", "2": "positive"}, "moves": {"2": {"displacement": [0, 0, 1]}}}"#);
    assert!(matches!(r, Err(AgentError::GuidanceForPositive(2))));
    let r = ask(r#"{"labels": {"1": "negative"}}"#);
    assert!(matches!(r, Err(AgentError::MalformedLabels(_))));
    let r = ask(r#"{"labels": {"1": "good", "2": "positive"}}"#);
    assert!(matches!(r, Err(AgentError::MalformedLabels(_))));
    let r = ask(r#"{"labels": {"1": "positive", "2": "positive"}}"#).unwrap();
    assert!(r.guidance.is_empty());
}

#[test]
fn record_appends_and_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let t = scripted(|_| chat_response(r#"{"relation": "far"}"#));
    let rec = AgentClient::new("http://stub.invalid", "m", "", Mode::Record, Some(path.clone())).with_transport(t.clone());
    assert_eq!(classify_relation("miles from", Some(&rec)).unwrap(), CanonicalRelation::Far);
    assert_eq!(t.calls.load(Ordering::SeqCst), 1);
    let client = AgentClient::replay("m", &path).with_transport(forbidden());
    assert_eq!(classify_relation("miles from", Some(&client)).unwrap(), CanonicalRelation::Far);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
}

#[test]
fn live_transport_failures_retry_three_times() {
    use std::sync::atomic::AtomicUsize;
    use std::sync::Arc;
    struct Failing(AtomicUsize);
    impl physlayout::agents::Transport for Failing {
        fn send(&self, _: &str, _: Option<&str>, _: &serde_json::Value) -> Result<serde_json::Value, AgentError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            Err(AgentError::Transport("down".into()))
        }
        fn uses_network(&self) -> bool {
            false
        }
    }
    let t = Arc::new(Failing(AtomicUsize::new(0)));
    let client = AgentClient::new("http://stub.invalid", "m", "", Mode::Live, None).with_transport(t.clone());
    assert!(matches!(classify_relation("miles from", Some(&client)), Err(AgentError::Transport(_))));
    assert_eq!(t.0.load(Ordering::SeqCst), 3);
}

#[test]
fn llm_critic_refines_from_transcript() {
    let layout = floating_bird();
    let (client, net) = replay_client("critique_floating_bird.jsonl");
    let mut critic = LlmCritic { client, description: layout.graph.description.clone() };
    let (out, trace) = refine(&layout, &mut critic, &ScoreConfig::default(), &PoolConfig::default()).unwrap();
    assert_eq!(trace.terminal_reason, Some(TerminalReason::ThresholdReached));
    assert_eq!(trace.iterations.len(), 1);
    let bird = oracle_box(out.asset(1).unwrap());
    let chair = oracle_box(out.asset(2).unwrap());
    assert!((bird.min.z - chair.max.z).abs() < 1e-9);
    assert_eq!(net.calls.load(Ordering::SeqCst), 0);
}
