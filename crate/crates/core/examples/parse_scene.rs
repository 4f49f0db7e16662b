//! Parse a scene file and print its graph document.
//!
//! cargo run --example parse_scene -- examples/scenes/reading_corner.scene

use physlayout::scene_graph::{encode_graph, parse_dsl, validate_graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "examples/scenes/reading_corner.scene".into());
    let graph = parse_dsl(&std::fs::read_to_string(&path)?)?;
    println!("{}", serde_json::to_string_pretty(&encode_graph(&graph))?);
    println!("core asset: {}", graph.asset(graph.core_id()).unwrap().name);

    // the core asset may not carry a relation of its own
    let broken = "scene: x\nasset: a | size=small | desc=\"a\"\nasset: b | size=small | desc=\"b\"\nrel: a on\nrel: b on a";
    match parse_dsl(broken) {
        Ok(g) => println!("unexpected: {:?}", validate_graph(&g)),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
