use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::prompts;
use super::{AgentClient, AgentError, CritiqueResult, Label, LayoutGuidance, Move};
use crate::geometry::compute_aabb;
use crate::math::Vec3;
use crate::pool::{CanonicalRelation, Layout};
use crate::scene_graph::{decode_graph, encode_graph, validate_graph, SceneDescription, SceneGraph};
use crate::scene_io::GroundKind;
use crate::supervision::{SnapshotSet, ViewAxis};

/// Phrases mapped without asking an agent. Lookups are on the lowercased,
/// whitespace-collapsed phrase.
pub const SYNONYMS: &[(&str, &str)] = &[
    ("on top of", "on"),
    ("atop", "on"),
    ("upon", "on"),
    ("perched on", "on"),
    ("perched upon", "on"),
    ("standing on", "on"),
    ("sitting on", "on"),
    ("resting on", "on"),
    ("lying on", "on"),
    ("placed on", "on"),
    ("above", "on"),
    ("over", "on"),
    ("beneath", "under"),
    ("below", "under"),
    ("underneath", "under"),
    ("to the left of", "left"),
    ("left of", "left"),
    ("on the left of", "left"),
    ("to the right of", "right"),
    ("right of", "right"),
    ("on the right of", "right"),
    ("in front of", "front"),
    ("before", "front"),
    ("behind of", "behind"),
    ("in back of", "behind"),
    ("at the back of", "behind"),
    ("far from", "far"),
    ("far away from", "far"),
    ("distant from", "far"),
    ("near to", "near"),
    ("next to", "near"),
    ("beside", "near"),
    ("close to", "near"),
    ("by", "near"),
    ("centered on", "center-aligned"),
    ("center aligned", "center-aligned"),
    ("centre aligned", "center-aligned"),
    ("aligned with", "center-aligned"),
    ("leaning against", "leaning-on"),
    ("leaning on", "leaning-on"),
    ("propped against", "leaning-on"),
    ("resting against", "leaning-on"),
    ("faces", "facing"),
    ("facing toward", "facing"),
    ("facing towards", "facing"),
    ("looking at", "facing"),
    ("rotated", "rotation"),
    ("turned", "rotation"),
];

fn normalize_phrase(phrase: &str) -> String {
    phrase.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

/// Database member for a table phrase, if any.
pub fn lookup_synonym(phrase: &str) -> Option<CanonicalRelation> {
    let p = normalize_phrase(phrase);
    if let Some(r) = CanonicalRelation::from_token(&p, None) {
        return Some(r);
    }
    SYNONYMS.iter().find(|(k, _)| *k == p).and_then(|(_, t)| CanonicalRelation::from_token(t, None))
}

/// Parses a strict JSON object answer; fenced or chatty answers are errors.
fn parse_object(content: &str) -> Result<serde_json::Map<String, Value>, AgentError> {
    match serde_json::from_str::<Value>(content.trim()) {
        Ok(Value::Object(m)) => Ok(m),
        _ => Err(AgentError::BadResponse(content.to_string())),
    }
}

/// Maps a relation phrase to the database, consulting the client only when
/// the synonym table has no entry.
pub fn classify_relation(phrase: &str, client: Option<&AgentClient>) -> Result<CanonicalRelation, AgentError> {
    if normalize_phrase(phrase).is_empty() {
        return Err(AgentError::Unclassifiable(phrase.to_string()));
    }
    if let Some(r) = lookup_synonym(phrase) {
        return Ok(r);
    }
    let client = client.ok_or_else(|| AgentError::Unclassifiable(phrase.to_string()))?;
    let body = client.chat_body(&prompts::classifier_system(), &prompts::classifier_user(phrase), &[]);
    let content = client.complete(&body)?;
    let obj = parse_object(&content)?;
    let token = obj.get("relation").and_then(Value::as_str).ok_or_else(|| AgentError::BadResponse(content.clone()))?;
    let angle = obj.get("angle_deg").and_then(Value::as_f64);
    let token_norm = token.trim().to_lowercase();
    if !CanonicalRelation::TOKENS.contains(&token_norm.as_str()) {
        return Err(AgentError::OutsideDatabase(token.to_string()));
    }
    Ok(CanonicalRelation::from_token(&token_norm, angle).expect("token checked against the database"))
}

/// Asks the extractor agent for a scene graph.
pub fn extract_scene_graph(description: &SceneDescription, client: &AgentClient) -> Result<SceneGraph, AgentError> {
    let body = client.chat_body(prompts::EXTRACTOR_SYSTEM, &prompts::extractor_user(description.as_str()), &[]);
    let content = client.complete(&body)?;
    let doc: Value = serde_json::from_str(content.trim()).map_err(|_| AgentError::BadResponse(content.clone()))?;
    let graph = decode_graph(&doc)?;
    let report = validate_graph(&graph);
    if !report.is_valid() {
        return Err(AgentError::InvalidGraph(report));
    }
    Ok(graph)
}

/// Asks the extractor agent which ground suits the scene.
pub fn classify_ground(description: &SceneDescription, client: &AgentClient) -> Result<GroundKind, AgentError> {
    let body = client.chat_body(prompts::GROUND_SYSTEM, &format!("Scene description: {description}"), &[]);
    let content = client.complete(&body)?;
    let obj = parse_object(&content)?;
    obj.get("ground")
        .and_then(Value::as_str)
        .and_then(GroundKind::parse)
        .ok_or(AgentError::BadResponse(content))
}

fn layout_summary(layout: &Layout) -> Value {
    let assets: Vec<Value> = layout
        .assets
        .iter()
        .map(|a| {
            let b = compute_aabb(a);
            json!({
                "id": a.spec_id,
                "name": layout.name_of(a.spec_id),
                "translation": [a.translation.x, a.translation.y, a.translation.z],
                "yaw_deg": a.yaw_deg,
                "aabb_min": [b.min.x, b.min.y, b.min.z],
                "aabb_max": [b.max.x, b.max.y, b.max.z],
            })
        })
        .collect();
    Value::Array(assets)
}

/// Asks the supervisor agent to label and correct the layout.
///
/// `attempt` > 0 tells the agent its previous suggestion was rejected, which
/// also makes the request distinct for replay.
pub fn critique_layout(
    snapshots: &SnapshotSet,
    description: &SceneDescription,
    graph: &SceneGraph,
    layout: &Layout,
    client: &AgentClient,
    delta_max: f64,
    attempt: u32,
) -> Result<CritiqueResult, AgentError> {
    let mut user = format!(
        "Scene description: {description}\nScene graph: {}\nAssets: {}\nMaximum move length: {delta_max}\n\
Images in order: camera on +x, camera on +y, camera on +z.",
        encode_graph(graph),
        layout_summary(layout),
    );
    if attempt > 0 {
        user.push_str(&format!(
            "\nAttempt {attempt}: the previous suggestion made the layout worse. Propose smaller or different moves."
        ));
    }
    let images: Vec<Vec<u8>> = ViewAxis::ALL.iter().filter_map(|a| snapshots.images.get(a)).map(|r| r.to_png()).collect();
    let body = client.chat_body(prompts::SUPERVISOR_SYSTEM, &user, &images);
    let content = client.complete(&body)?;
    parse_critique(&content, layout, delta_max)
}

fn parse_id(key: &str, what: &str) -> Result<u32, AgentError> {
    key.trim().parse().map_err(|_| AgentError::MalformedLabels(format!("{what} key '{key}' is not an asset id")))
}

/// Validates a supervisor answer against the layout and clamps its moves.
pub fn parse_critique(content: &str, layout: &Layout, delta_max: f64) -> Result<CritiqueResult, AgentError> {
    let obj = parse_object(content)?;
    let raw_labels = obj
        .get("labels")
        .and_then(Value::as_object)
        .ok_or_else(|| AgentError::MalformedLabels("missing 'labels' object".into()))?;
    let mut labels = BTreeMap::new();
    for (k, v) in raw_labels {
        let id = parse_id(k, "label")?;
        if layout.asset(id).is_none() {
            return Err(AgentError::MalformedLabels(format!("label for unknown asset {id}")));
        }
        let label = v
            .as_str()
            .and_then(Label::parse)
            .ok_or_else(|| AgentError::MalformedLabels(format!("label of asset {id} is {v}")))?;
        labels.insert(id, label);
    }
    for id in layout.ids() {
        if !labels.contains_key(&id) {
            return Err(AgentError::MalformedLabels(format!("asset {id} has no label")));
        }
    }
    let mut guidance = LayoutGuidance::default();
    if let Some(moves) = obj.get("moves") {
        let moves = moves.as_object().ok_or_else(|| AgentError::MalformedLabels("'moves' is not an object".into()))?;
        for (k, v) in moves {
            let id = parse_id(k, "move")?;
            match labels.get(&id) {
                None => return Err(AgentError::MalformedLabels(format!("move for unknown asset {id}"))),
                Some(Label::Positive) => return Err(AgentError::GuidanceForPositive(id)),
                Some(Label::Negative) => {}
            }
            let d: Vec<f64> = v
                .get("displacement")
                .and_then(Value::as_array)
                .map(|a| a.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_default();
            if d.len() != 3 || d.iter().any(|c| !c.is_finite()) {
                return Err(AgentError::MalformedLabels(format!("move of asset {id} needs a finite [dx, dy, dz]")));
            }
            let yaw_deg = v.get("yaw_deg").and_then(Value::as_f64);
            guidance.moves.insert(id, Move { displacement: Vec3::new(d[0], d[1], d[2]), yaw_deg });
        }
    }
    let rationale = obj.get("rationale").and_then(Value::as_str).unwrap_or_default().to_string();
    Ok(CritiqueResult { labels, guidance: guidance.clamped(delta_max), rationale })
}
