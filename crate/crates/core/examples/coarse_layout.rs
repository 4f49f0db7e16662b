//! Stage one on its own: canonical relations, size classes, box tangency,
//! the magnet and the whole-scene special relation.
//!
//! cargo run --example coarse_layout -- examples/scenes/bike_tree.scene

use physlayout::geometry::compute_aabb;
use physlayout::scene_graph::parse_dsl;
use physlayout::scene_io::{load_meshes, stage_one, AssetSource};
use physlayout::supervision::measure_violations;
use physlayout::{PoolConfig, ScoreConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "examples/scenes/bike_tree.scene".into());
    let graph = parse_dsl(&std::fs::read_to_string(&path)?)?;
    let meshes = load_meshes(&graph, &AssetSource::Primitives, std::path::Path::new("."))?;
    let pool = PoolConfig::default();
    let layout = stage_one(&graph, &meshes, &pool, None)?;

    for a in &layout.assets {
        let b = compute_aabb(a);
        println!(
            "{:>2} {:<12} yaw {:>7.2}  box [{:.3} {:.3} {:.3}] .. [{:.3} {:.3} {:.3}]",
            a.spec_id,
            layout.name_of(a.spec_id),
            a.yaw_deg,
            b.min.x, b.min.y, b.min.z, b.max.x, b.max.y, b.max.z
        );
    }
    let report = measure_violations(&layout, &ScoreConfig::default(), &pool);
    println!("violations: {}", if report.is_clean() { "none".to_string() } else { format!("{:?}", report.per_asset) });
    Ok(())
}
