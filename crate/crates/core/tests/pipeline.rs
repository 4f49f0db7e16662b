mod common;

use std::path::Path;

use common::*;
use physlayout::scene_io::{
    run_pipeline, AgentConfig, AssetSource, PipelineConfig, PipelineInput, EXIT_FAILURE, EXIT_INPUT, EXIT_NOT_CONVERGED,
    EXIT_OK,
};
use physlayout::supervision::TerminalReason;
use serde_json::Value;

const ARTIFACTS: [&str; 7] =
    ["scene_graph.json", "layout.json", "scene.glb", "snap_x.ppm", "snap_y.ppm", "snap_z.ppm", "trace.json"];

/// A large box centred on a table cannot avoid it, so the loop runs out of iterations.
const CROWDED: &str = "scene: a box centred on a table\n\
asset: box | size=large | desc=\"a box\"\n\
asset: table | size=medium | desc=\"a table\"\n\
asset: lamp | size=small | desc=\"a lamp\"\n\
rel: box center-aligned\n\
rel: lamp left\n";

fn config(dir: &Path) -> PipelineConfig {
    PipelineConfig { output_dir: dir.join("out"), ..Default::default() }
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn success_writes_every_artifact() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(d.path());
    let out = run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", BIRD_CHAIR)), &cfg);
    assert_eq!(out.exit_code, EXIT_OK, "{:?}", out.error);
    for name in ARTIFACTS {
        assert!(cfg.output_dir.join(name).is_file(), "{name}");
    }
    let layout = json(&cfg.output_dir.join("layout.json"));
    assert_eq!(layout["score"], 1.0);
    assert_eq!(layout["provenance"], "magnetized");
    assert_eq!(layout["ground"]["kind"], "grass");
    for a in layout["assets"].as_array().unwrap() {
        for key in ["id", "name", "scale", "yaw_deg", "translation"] {
            assert!(a.get(key).is_some(), "{key}");
        }
    }
    let ppm = std::fs::read(cfg.output_dir.join("snap_z.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n512 512\n255\n"));
    assert_eq!(ppm.len(), 15 + 512 * 512 * 3);
}

#[test]
fn syntax_error_exits_two_with_position() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(d.path());
    let bad = "scene: broken\nasset: bird | size=small | desc=\"a bird\"\nasset chair\n";
    let out = run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", bad)), &cfg);
    assert_eq!(out.exit_code, EXIT_INPUT);
    let err = json(&cfg.output_dir.join("error.json"));
    assert_eq!(err["kind"], "parse");
    assert_eq!(err["line"], 3);
    assert!(!cfg.output_dir.join("scene_graph.json").exists());
}

#[test]
fn invalid_graph_json_lists_violations() {
    let d = tempfile::tempdir().unwrap();
    let doc = r#"{"description": "a bird on a chair", "special": "none",
        "assets": [{"id": 1, "name": "bird", "enriched_desc": "a bird", "size": "small"},
                   {"id": 2, "name": "chair", "enriched_desc": "a chair", "size": "medium"}],
        "relations": [{"subject": 1, "relation": "on", "target": 2},
                      {"subject": 2, "relation": "on", "target": 1}]}"#;
    let cfg = config(d.path());
    let out = run_pipeline(&PipelineInput::GraphJson(write(d.path(), "g.json", doc)), &cfg);
    assert_eq!(out.exit_code, EXIT_INPUT, "{:?}", out.error);
    let err = json(&cfg.output_dir.join("error.json"));
    assert!(err["violations"].as_array().is_some_and(|v| !v.is_empty()), "{err}");
}

#[test]
fn malformed_graph_json_points_at_field() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(d.path());
    let out = run_pipeline(&PipelineInput::GraphJson(write(d.path(), "g.json", r#"{"description": "x"}"#)), &cfg);
    assert_eq!(out.exit_code, EXIT_INPUT);
    assert_eq!(json(&cfg.output_dir.join("error.json"))["pointer"], "/assets");
}

#[test]
fn unconverged_run_exits_three_with_artifacts() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(d.path());
    let out = run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", CROWDED)), &cfg);
    assert_eq!(out.exit_code, EXIT_NOT_CONVERGED, "{:?}", out.error);
    assert_eq!(out.terminal_reason, Some(TerminalReason::MaxIters));
    for name in ARTIFACTS {
        assert!(cfg.output_dir.join(name).is_file(), "{name}");
    }
    let trace = json(&cfg.output_dir.join("trace.json"));
    assert_eq!(trace["terminal_reason"], "max_iters");
    assert_eq!(trace["iterations"].as_array().unwrap().len(), 10);
}

#[test]
fn graph_json_input_matches_dsl_input() {
    let d = tempfile::tempdir().unwrap();
    let first = config(d.path());
    assert_eq!(run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", BIRD_CHAIR)), &first).exit_code, 0);
    let second = PipelineConfig { output_dir: d.path().join("again"), ..Default::default() };
    let graph = first.output_dir.join("scene_graph.json");
    assert_eq!(run_pipeline(&PipelineInput::from_path(graph), &second).exit_code, 0);
    for name in ["layout.json", "scene.glb", "snap_x.ppm"] {
        assert_eq!(std::fs::read(first.output_dir.join(name)).unwrap(), std::fs::read(second.output_dir.join(name)).unwrap());
    }
}

#[test]
fn free_text_without_agent_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(d.path());
    let out = run_pipeline(&PipelineInput::Description("a bird on a chair".into()), &cfg);
    assert_eq!(out.exit_code, EXIT_FAILURE);
    assert_eq!(json(&cfg.output_dir.join("error.json"))["kind"], "config");
}

#[test]
fn free_text_is_extracted_from_a_transcript() {
    let d = tempfile::tempdir().unwrap();
    let agent = AgentConfig {
        model: STUB_MODEL.into(),
        mode: "replay".into(),
        transcript: Some(fixture("extract_bird_chair.jsonl")),
        ..Default::default()
    };
    let cfg = PipelineConfig { agent: Some(agent), ..config(d.path()) };
    let out = run_pipeline(&PipelineInput::Description("A bird standing on a chair".into()), &cfg);
    assert_eq!(out.exit_code, EXIT_OK, "{:?}", out.error);
    assert_eq!(json(&cfg.output_dir.join("scene_graph.json"))["assets"][1]["name"], "chair");
}

#[test]
fn asset_directory_supplies_meshes() {
    let d = tempfile::tempdir().unwrap();
    let assets = d.path().join("assets");
    std::fs::create_dir(&assets).unwrap();
    for name in ["bird", "chair"] {
        std::fs::copy(fixture("unit_cube.glb"), assets.join(format!("{name}.glb"))).unwrap();
    }
    let cfg = PipelineConfig { asset_source: AssetSource::Directory(assets.clone()), ..config(d.path()) };
    let out = run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", BIRD_CHAIR)), &cfg);
    assert_eq!(out.exit_code, EXIT_OK, "{:?}", out.error);
    let layout = out.layout.unwrap();
    assert_eq!(layout.asset(1).unwrap().mesh.vertices.len(), 8);

    std::fs::remove_file(assets.join("bird.glb")).unwrap();
    let out = run_pipeline(&PipelineInput::Dsl(d.path().join("s.scene")), &cfg);
    assert_eq!(out.exit_code, EXIT_FAILURE);
}

#[test]
fn cache_source_fills_misses() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("cache");
    let cfg = PipelineConfig { asset_source: AssetSource::Cache, cache_dir: cache.clone(), ..config(d.path()) };
    let out = run_pipeline(&PipelineInput::Dsl(write(d.path(), "s.scene", BIRD_CHAIR)), &cfg);
    assert_eq!(out.exit_code, EXIT_OK, "{:?}", out.error);
    assert!(cache.join("bird.glb").is_file() && cache.join("chair.glb").is_file());
}

#[test]
fn example_scenes_lay_out_cleanly() {
    use physlayout::supervision::measure_violations;
    use physlayout::{PoolConfig, ScoreConfig};
    for dsl in [
        include_str!("../examples/scenes/bike_tree.scene"),
        include_str!("../examples/scenes/beach.scene"),
        include_str!("../examples/scenes/reading_corner.scene"),
        BIRD_CHAIR,
    ] {
        let g = graph(dsl);
        let l = physlayout::scene_io::stage_one(&g, &primitive_meshes(&g), &PoolConfig::default(), None).unwrap();
        let report = measure_violations(&l, &ScoreConfig::default(), &PoolConfig::default());
        assert!(report.is_clean(), "{}: {:?}", g.description.as_str(), report);
    }
}
