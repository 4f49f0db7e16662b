//! Render the three axis views of a layout as PPM and PNG.
//!
//! cargo run --example snapshots -- out_dir

use physlayout::scene_graph::parse_dsl;
use physlayout::scene_io::{load_meshes, stage_one, AssetSource};
use physlayout::supervision::{render_snapshots, SnapshotConfig};
use physlayout::PoolConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "snapshots".into()));
    std::fs::create_dir_all(&dir)?;
    let graph = parse_dsl(include_str!("scenes/beach.scene"))?;
    let meshes = load_meshes(&graph, &AssetSource::Primitives, std::path::Path::new("."))?;
    let layout = stage_one(&graph, &meshes, &PoolConfig::default(), None)?;

    for (axis, img) in render_snapshots(&layout, &SnapshotConfig::default()).images {
        let name = format!("snap_{}", axis.as_str());
        std::fs::write(dir.join(format!("{name}.ppm")), img.to_ppm())?;
        std::fs::write(dir.join(format!("{name}.png")), img.to_png())?;
        println!("wrote {}/{name}.{{ppm,png}}", dir.display());
    }
    Ok(())
}
