//! Every stage, every artifact.
//!
//! cargo run --example full_pipeline -- examples/scenes/reading_corner.scene out

use physlayout::scene_io::{run_pipeline, PipelineConfig, PipelineInput};

fn main() {
    let mut args = std::env::args().skip(1);
    let input = args.next().unwrap_or_else(|| "examples/scenes/bird_chair.scene".into());
    let output = args.next().unwrap_or_else(|| "out".into());
    let config = PipelineConfig { output_dir: output.into(), ..Default::default() };

    let outcome = run_pipeline(&PipelineInput::from_path(input), &config);
    match &outcome.error {
        Some(e) => println!("failed: {e}"),
        None => println!(
            "{} with S = {:.4}",
            outcome.terminal_reason.map(|r| r.as_str()).unwrap_or("-"),
            outcome.score.unwrap_or(0.0)
        ),
    }
    for p in &outcome.artifacts {
        println!("  {}", p.display());
    }
    std::process::exit(outcome.exit_code);
}
