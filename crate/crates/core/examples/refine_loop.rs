//! Knock a valid layout about and let the rule critic repair it.

use physlayout::math::Vec3;
use physlayout::scene_graph::parse_dsl;
use physlayout::scene_io::{load_meshes, stage_one, AssetSource};
use physlayout::supervision::{refine, RuleCritic};
use physlayout::{PoolConfig, ScoreConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_dsl(include_str!("scenes/reading_corner.scene"))?;
    let meshes = load_meshes(&graph, &AssetSource::Primitives, std::path::Path::new("."))?;
    let pool = PoolConfig::default();
    let mut layout = stage_one(&graph, &meshes, &pool, None)?;

    // sink the lamp into the table and lift the chair off the ground
    layout.asset_mut(1).unwrap().translation += Vec3::new(0.1, 0.0, -0.3);
    layout.asset_mut(3).unwrap().translation += Vec3::new(0.0, 0.2, 0.4);

    let (_, trace) = refine(&layout, &mut RuleCritic, &ScoreConfig::default(), &pool)?;
    println!("S_0 = {:.4}", trace.initial_score);
    for e in &trace.iterations {
        println!("t={} S={:.4} {} after {} attempt(s)", e.t, e.score, if e.accepted { "accepted" } else { "discarded" }, e.attempts);
    }
    println!("stopped: {}", trace.terminal_reason.map(|r| r.as_str()).unwrap_or("-"));
    Ok(())
}
