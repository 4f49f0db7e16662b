use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use physlayout::assets::export_glb;
use physlayout::scene_graph::encode_graph;
use physlayout::scene_io::{
    decode_layout, load_graph, load_meshes, run_pipeline, AssetSource, CriticKind, PipelineConfig, PipelineInput,
    EXIT_FAILURE, EXIT_INPUT,
};
use physlayout::supervision::{measure_violations, render_snapshots, score_layout, SnapshotConfig};
use physlayout::{Error, Layout};

#[derive(Parser)]
#[command(name = "physlayout", version, about = "Physics-guided 3D scene layout")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriticArg {
    Rule,
    Llm,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a scene file, print or write scene_graph.json.
    Parse {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full layout pipeline.
    Layout {
        /// DSL file, or a scene-graph .json document.
        input: PathBuf,
        #[arg(long)]
        critic: Option<CriticArg>,
        /// primitives, cache, or a directory of <name>.glb files.
        #[arg(long)]
        assets: Option<String>,
        #[arg(short, long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print violations and the score of a layout.json.
    Score {
        layout: PathBuf,
        #[arg(short, long)]
        config: Option<PathBuf>,
    },
    /// Write snap_{x,y,z}.ppm for a layout.json.
    Render {
        layout: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a layout.json as a glb scene.
    Export {
        layout: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig, Error> {
    match path {
        Some(p) => PipelineConfig::load(p),
        None => Ok(PipelineConfig::default()),
    }
}

fn read_layout(path: &Path, config: &PipelineConfig) -> Result<(Layout, Option<physlayout::GroundPlane>), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let doc: serde_json::Value = serde_json::from_str(&text)?;
    let source = doc
        .get("asset_source")
        .and_then(|s| s.as_str())
        .and_then(AssetSource::from_label)
        .unwrap_or(AssetSource::Primitives);
    decode_layout(&doc, |g| load_meshes(g, &source, &config.cache_dir))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Parse { input, output } => {
            let graph = load_graph(&PipelineInput::from_path(input), None)?;
            let text = serde_json::to_string_pretty(&encode_graph(&graph))? + "\n";
            match output {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
                    write(&dir.join("scene_graph.json"), text.as_bytes())?;
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Layout { input, critic, assets, config, output } => {
            let mut cfg = load_config(config.as_deref())?;
            if let Some(c) = critic {
                cfg.critic = match c {
                    CriticArg::Rule => CriticKind::Rule,
                    CriticArg::Llm => CriticKind::Llm,
                };
            }
            if let Some(a) = assets {
                cfg.asset_source = match a.as_str() {
                    "primitives" => AssetSource::Primitives,
                    "cache" => AssetSource::Cache,
                    dir => AssetSource::Directory(PathBuf::from(dir)),
                };
            }
            if let Some(o) = output {
                cfg.output_dir = o;
            }
            let outcome = run_pipeline(&PipelineInput::from_path(input), &cfg);
            if let Some(e) = &outcome.error {
                eprintln!("error: {e}");
            } else {
                let reason = outcome.terminal_reason.map(|r| r.as_str()).unwrap_or("-");
                println!("{reason} score={:.4} -> {}", outcome.score.unwrap_or(0.0), cfg.output_dir.display());
            }
            Ok(outcome.exit_code as u8)
        }
        Command::Score { layout, config } => {
            let cfg = load_config(config.as_deref())?;
            let (layout, _) = read_layout(&layout, &cfg)?;
            let report = measure_violations(&layout, &cfg.score, &cfg.pool);
            let score = score_layout(&layout, None, &report, &cfg.score)?;
            let per_asset: serde_json::Map<String, serde_json::Value> = report
                .per_asset
                .iter()
                .map(|(id, v)| {
                    (id.to_string(), json!({
                        "name": layout.name_of(*id),
                        "penetration": v.penetration,
                        "floating": v.floating,
                        "relation_unsat": v.relation_unsat,
                        "total": v.total,
                    }))
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({"score": score.value, "violations": per_asset}))?);
            Ok(0)
        }
        Command::Render { layout, output } => {
            let cfg = PipelineConfig::default();
            let dir = output.unwrap_or_else(|| layout.parent().map(Path::to_path_buf).unwrap_or_default());
            let (layout, _) = read_layout(&layout, &cfg)?;
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
            for (axis, img) in render_snapshots(&layout, &SnapshotConfig::default()).images {
                write(&dir.join(format!("snap_{}.ppm", axis.as_str())), &img.to_ppm())?;
            }
            Ok(0)
        }
        Command::Export { layout, output } => {
            let cfg = PipelineConfig::default();
            let (layout, ground) = read_layout(&layout, &cfg)?;
            write(&output, &export_glb(&layout.assets, ground.as_ref())?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::Decode(_) | Error::Invalid(_) => EXIT_INPUT,
                _ => EXIT_FAILURE,
            };
            ExitCode::from(code as u8)
        }
    }
}
