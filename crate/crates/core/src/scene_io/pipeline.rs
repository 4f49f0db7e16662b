use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use super::{encode_layout, place_ground, select_ground, AssetSource, CriticKind, LayoutExtras, PipelineConfig};
use crate::agents::{extract_scene_graph, AgentClient, LlmCritic};
use crate::assets::{export_glb, normalize_mesh, primitive_for_name, AssetCache, Mesh};
use crate::error::{Error, Result};
use crate::pool::{apply_special, canonicalize, coarse_place, run_magnet, scale_assets, Layout, PoolConfig};
use crate::scene_graph::{decode_graph, encode_graph, parse_dsl, validate_graph, SceneDescription, SceneGraph};
use crate::supervision::{
    measure_violations, refine, render_snapshots, score_layout, Critic, RefineTrace, RuleCritic, SnapshotConfig,
    SupervisionError, TerminalReason,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Clone)]
pub enum PipelineInput {
    Dsl(PathBuf),
    GraphJson(PathBuf),
    /// Free text, extracted by the agent.
    Description(String),
}

impl PipelineInput {
    /// `.json` files are graph documents, anything else is DSL.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            PipelineInput::GraphJson(path)
        } else {
            PipelineInput::Dsl(path)
        }
    }
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub exit_code: i32,
    pub terminal_reason: Option<TerminalReason>,
    pub score: Option<f64>,
    pub layout: Option<Layout>,
    pub artifacts: Vec<PathBuf>,
    pub error: Option<Error>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

/// Reads and validates the scene graph.
pub fn load_graph(input: &PipelineInput, client: Option<&AgentClient>) -> Result<SceneGraph> {
    let graph = match input {
        PipelineInput::Dsl(p) => parse_dsl(&read(p)?)?,
        PipelineInput::GraphJson(p) => decode_graph(&serde_json::from_str(&read(p)?)?)?,
        PipelineInput::Description(text) => {
            let desc = SceneDescription::new(text.as_str()).ok_or_else(|| Error::Config("empty description".into()))?;
            let client = client.ok_or_else(|| Error::Config("free-text input needs an agent".into()))?;
            extract_scene_graph(&desc, client)?
        }
    };
    let report = validate_graph(&graph);
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    Ok(graph)
}

/// Normalized mesh for every scene-graph asset.
pub fn load_meshes(graph: &SceneGraph, source: &AssetSource, cache_dir: &Path) -> Result<HashMap<u32, Arc<Mesh>>> {
    let mut out = HashMap::new();
    let cache = match source {
        AssetSource::Cache => Some(AssetCache::open(cache_dir)?),
        AssetSource::Directory(dir) => {
            if !dir.is_dir() {
                return Err(Error::Config(format!("asset directory {} does not exist", dir.display())));
            }
            Some(AssetCache::open(dir)?)
        }
        AssetSource::Primitives => None,
    };
    for a in &graph.assets {
        let mesh = match (source, &cache) {
            (AssetSource::Primitives, _) | (_, None) => primitive_for_name(&a.name),
            (AssetSource::Cache, Some(c)) => match c.lookup(&a.name)? {
                Some(m) => normalize_mesh(&m)?,
                None => {
                    let m = primitive_for_name(&a.name);
                    c.store(&a.name, &m)?;
                    m
                }
            },
            (AssetSource::Directory(_), Some(c)) => match c.lookup(&a.name)? {
                Some(m) => normalize_mesh(&m)?,
                None => {
                    return Err(Error::Config(format!("no mesh for '{}' at {}", a.name, c.path_for(&a.name).display())))
                }
            },
        };
        out.insert(a.id, Arc::new(mesh));
    }
    Ok(out)
}

/// Canonical relations, scaling, coarse placement, magnet and special
/// relation.
pub fn stage_one(
    graph: &SceneGraph,
    meshes: &HashMap<u32, Arc<Mesh>>,
    pool: &PoolConfig,
    client: Option<&AgentClient>,
) -> Result<Layout> {
    let graph = Arc::new(canonicalize(graph, client)?);
    let placed = scale_assets(&graph, meshes, pool)?;
    let coarse = coarse_place(Arc::clone(&graph), placed, pool)?;
    let (magnetized, _) = run_magnet(&coarse, pool)?;
    Ok(apply_special(&magnetized, graph.special, pool))
}

struct Writer {
    dir: PathBuf,
    artifacts: Vec<PathBuf>,
}

impl Writer {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        if !self.artifacts.contains(&path) {
            self.artifacts.push(path);
        }
        Ok(())
    }

    fn write_json(&mut self, name: &str, v: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Decode(_) | Error::Invalid(_) => EXIT_INPUT,
        _ => EXIT_FAILURE,
    }
}

fn error_record(e: &Error) -> Value {
    let mut v = json!({"kind": e.kind(), "message": e.to_string()});
    match e {
        Error::Parse(p) => {
            v["line"] = json!(p.line);
            v["column"] = json!(p.column);
        }
        Error::Decode(d) => v["pointer"] = json!(d.pointer),
        Error::Invalid(r) => {
            v["violations"] = r.violations.iter().map(|x| json!({"field": x.field, "message": x.message})).collect();
        }
        _ => {}
    }
    v
}

/// Runs every stage and writes the artifacts into `config.output_dir`.
///
/// Exit code 0 means the rationality threshold was reached, 3 that the loop
/// stopped without reaching it, 2 an input error and 1 anything else. On
/// error an `error.json` record is written next to whatever artifacts the
/// stages reached.
pub fn run_pipeline(input: &PipelineInput, config: &PipelineConfig) -> PipelineOutcome {
    let mut w = Writer { dir: config.output_dir.clone(), artifacts: Vec::new() };
    let mut outcome = PipelineOutcome {
        exit_code: EXIT_FAILURE,
        terminal_reason: None,
        score: None,
        layout: None,
        artifacts: Vec::new(),
        error: None,
    };
    if let Err(e) = std::fs::create_dir_all(&w.dir) {
        outcome.error = Some(Error::io(format!("creating {}", w.dir.display()), e));
        return outcome;
    }
    match run_stages(input, config, &mut w, &mut outcome) {
        Ok(()) => {}
        Err(e) => {
            outcome.exit_code = exit_code_for(&e);
            if let Err(we) = w.write_json("error.json", &error_record(&e)) {
                log::error!("could not write error record: {we}");
            }
            outcome.error = Some(e);
        }
    }
    outcome.artifacts = w.artifacts;
    outcome
}

fn run_stages(
    input: &PipelineInput,
    config: &PipelineConfig,
    w: &mut Writer,
    outcome: &mut PipelineOutcome,
) -> Result<()> {
    config.validate()?;
    let client = config.agent_client()?;
    let source = config.asset_source.label();

    let graph = load_graph(input, client.as_ref())?;
    w.write_json("scene_graph.json", &encode_graph(&graph))?;
    let meshes = load_meshes(&graph, &config.asset_source, &config.cache_dir)?;
    let stage1 = stage_one(&graph, &meshes, &config.pool, client.as_ref())?;
    let extras = LayoutExtras { asset_source: Some(source.clone()), ..Default::default() };
    w.write_json("layout.json", &encode_layout(&stage1, &extras))?;

    let mut critic: Box<dyn Critic> = match config.critic {
        CriticKind::Rule => Box::new(RuleCritic),
        CriticKind::Llm => Box::new(LlmCritic {
            client: client.clone().ok_or_else(|| Error::Config("the llm critic needs an agent".into()))?,
            description: graph.description.clone(),
        }),
    };
    let (layout, trace) = match refine(&stage1, critic.as_mut(), &config.score, &config.pool) {
        Ok(r) => r,
        Err(SupervisionError::Critic { source, trace }) => {
            w.write_json("trace.json", &trace.to_json())?;
            return Err(Error::Agent(source));
        }
        Err(e) => return Err(e.into()),
    };

    let kind = select_ground(&graph, client.as_ref());
    let ground = place_ground(&layout, kind).ok_or_else(|| Error::Config("empty layout".into()))?;
    let report = measure_violations(&layout, &config.score, &config.pool);
    let score = score_layout(&layout, None, &report, &config.score)?.value;
    write_outputs(w, &layout, &ground, score, &trace, &source)?;

    let reason = trace.terminal_reason.expect("refine always terminates with a reason");
    outcome.exit_code = if reason == TerminalReason::ThresholdReached { EXIT_OK } else { EXIT_NOT_CONVERGED };
    outcome.terminal_reason = Some(reason);
    outcome.score = Some(score);
    outcome.layout = Some(layout);
    Ok(())
}

fn write_outputs(
    w: &mut Writer,
    layout: &Layout,
    ground: &super::GroundPlane,
    score: f64,
    trace: &RefineTrace,
    source: &str,
) -> Result<()> {
    let extras = LayoutExtras { ground: Some(ground), score: Some(score), trace: Some(trace), asset_source: Some(source.to_string()) };
    w.write_json("layout.json", &encode_layout(layout, &extras))?;
    w.write("scene.glb", &export_glb(&layout.assets, Some(ground))?)?;
    let snaps = render_snapshots(layout, &SnapshotConfig::default());
    for (axis, img) in &snaps.images {
        w.write(&format!("snap_{}.ppm", axis.as_str()), &img.to_ppm())?;
    }
    w.write_json("trace.json", &trace.to_json())
}
