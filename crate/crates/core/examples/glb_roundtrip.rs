//! Export a laid-out scene with its ground to glb and read it back.

use physlayout::assets::{export_glb, load_glb_scene};
use physlayout::scene_graph::parse_dsl;
use physlayout::scene_io::{load_meshes, place_ground, select_ground, stage_one, AssetSource};
use physlayout::PoolConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_dsl(include_str!("scenes/bike_tree.scene"))?;
    let meshes = load_meshes(&graph, &AssetSource::Primitives, std::path::Path::new("."))?;
    let layout = stage_one(&graph, &meshes, &PoolConfig::default(), None)?;
    let ground = place_ground(&layout, select_ground(&graph, None)).unwrap();

    let bytes = export_glb(&layout.assets, Some(&ground))?;
    println!("{} bytes, ground {} at z = {}", bytes.len(), ground.kind.as_str(), ground.height);

    let nodes = load_glb_scene(&bytes)?;
    let mut worst = 0.0f64;
    for (a, n) in layout.assets.iter().zip(&nodes) {
        for (p, q) in a.world_vertices().zip(n.world_vertices()) {
            worst = worst.max((p - q).norm());
        }
    }
    println!("{} nodes back, largest vertex drift {worst:.2e}", nodes.len());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, &bytes)?;
        println!("wrote {path}");
    }
    Ok(())
}
