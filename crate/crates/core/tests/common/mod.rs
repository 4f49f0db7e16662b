#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use physlayout::agents::{chat_response, AgentClient, AgentError, Mode, Transport};
use physlayout::assets::{primitive_for_name, Mesh};
use physlayout::geometry::Aabb;
use physlayout::math::{Point, Vec3};
use physlayout::pool::{canonicalize, coarse_place, scale_assets, Layout, PoolConfig};
use physlayout::scene_graph::{encode_graph, parse_dsl, SceneGraph};
use physlayout::PlacedAsset;
use serde_json::Value;

pub const STUB_MODEL: &str = "stub-model";

pub const BIRD_CHAIR: &str = include_str!("../../examples/scenes/bird_chair.scene");

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn graph(dsl: &str) -> SceneGraph {
    canonicalize(&parse_dsl(dsl).expect("fixture parses"), None).expect("fixture relations are canonical")
}

pub fn primitive_meshes(graph: &SceneGraph) -> HashMap<u32, Arc<Mesh>> {
    graph.assets.iter().map(|a| (a.id, Arc::new(primitive_for_name(&a.name)))).collect()
}

pub fn coarse(dsl: &str) -> Layout {
    let g = Arc::new(graph(dsl));
    let placed = scale_assets(&g, &primitive_meshes(&g), &PoolConfig::default()).unwrap();
    coarse_place(g, placed, &PoolConfig::default()).unwrap()
}

/// Bird lifted 0.3 above its tangent position on the chair.
pub fn floating_bird() -> Layout {
    let mut l = coarse(BIRD_CHAIR);
    l.asset_mut(1).unwrap().translation.z += 0.3;
    l
}

/// Box of the world vertices, computed without the library's helpers.
pub fn oracle_box(a: &PlacedAsset) -> Aabb {
    let rot = a.rotation();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in &a.mesh.vertices {
        let w = rot * (v.coords * a.scale) + a.translation;
        for k in 0..3 {
            lo[k] = lo[k].min(w[k]);
            hi[k] = hi[k].max(w[k]);
        }
    }
    Aabb { min: Point::new(lo[0], lo[1], lo[2]), max: Point::new(hi[0], hi[1], hi[2]) }
}

/// Answers every request with `respond(request)`; never touches a socket.
pub struct ScriptedTransport<F> {
    pub respond: F,
    pub calls: AtomicUsize,
}

impl<F: Fn(&Value) -> Value + Send + Sync> Transport for ScriptedTransport<F> {
    fn send(&self, _endpoint: &str, _key: Option<&str>, body: &Value) -> Result<Value, AgentError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok((self.respond)(body))
    }

    fn uses_network(&self) -> bool {
        false
    }
}

pub fn scripted<F: Fn(&Value) -> Value + Send + Sync + 'static>(respond: F) -> Arc<ScriptedTransport<F>> {
    Arc::new(ScriptedTransport { respond, calls: AtomicUsize::new(0) })
}

/// Stands in for the network: any call fails the test.
pub struct ForbiddenTransport {
    pub calls: AtomicUsize,
}

impl Transport for ForbiddenTransport {
    fn send(&self, endpoint: &str, _key: Option<&str>, _body: &Value) -> Result<Value, AgentError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        panic!("network access attempted to {endpoint}");
    }
}

pub fn forbidden() -> Arc<ForbiddenTransport> {
    Arc::new(ForbiddenTransport { calls: AtomicUsize::new(0) })
}

/// Replay client over a fixture transcript whose transport panics on use.
pub fn replay_client(name: &str) -> (AgentClient, Arc<ForbiddenTransport>) {
    let t = forbidden();
    (AgentClient::replay(STUB_MODEL, fixture(name)).with_transport(t.clone()), t)
}

pub const CRITIQUE_FLOATING_BIRD: &str = r#"{"labels": {"1": "negative", "2": "positive"}, "moves": {"1": {"displacement": [0, 0, -0.3]}}, "rationale": "the bird hovers above the seat; lower it onto the chair"}"#;

/// Records the transcripts under tests/fixtures with scripted answers.
pub fn record_fixtures(dir: &std::path::Path) {
    use physlayout::agents::{classify_relation, critique_layout, extract_scene_graph};
    use physlayout::scene_graph::SceneDescription;
    use physlayout::supervision::{render_snapshots, SnapshotConfig};

    let record = |name: &str, answer: String| {
        let path = dir.join(name);
        let _ = std::fs::remove_file(&path);
        let t = scripted(move |_| chat_response(&answer));
        AgentClient::new("http://stub.invalid/v1/chat/completions", STUB_MODEL, "", Mode::Record, Some(path))
            .with_transport(t)
    };

    let desc = SceneDescription::new("A bird standing on a chair").unwrap();
    let mut g = parse_dsl(BIRD_CHAIR).unwrap();
    g.description = desc.clone();
    let answer = serde_json::to_string(&encode_graph(&g)).unwrap();
    extract_scene_graph(&desc, &record("extract_bird_chair.jsonl", answer)).unwrap();

    let c = record("classify_hovering_beside.jsonl", r#"{"relation": "near"}"#.into());
    classify_relation("hovering beside", Some(&c)).unwrap();

    let layout = floating_bird();
    let snaps = render_snapshots(&layout, &SnapshotConfig::default());
    let c = record("critique_floating_bird.jsonl", CRITIQUE_FLOATING_BIRD.into());
    critique_layout(&snaps, &layout.graph.description, &layout.graph, &layout, &c, 0.5, 0).unwrap();
}

pub fn vec3(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}
