use crate::pool::{scene_aabb, Layout};
use crate::scene_graph::SceneGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroundKind {
    Grass,
    Wood,
    Sand,
}

impl GroundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GroundKind::Grass => "grass",
            GroundKind::Wood => "wood",
            GroundKind::Sand => "sand",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "grass" => Some(GroundKind::Grass),
            "wood" => Some(GroundKind::Wood),
            "sand" => Some(GroundKind::Sand),
            _ => None,
        }
    }

    /// Flat material color used in exports and snapshots.
    pub fn color(&self) -> [f32; 4] {
        match self {
            GroundKind::Grass => [0.30, 0.55, 0.25, 1.0],
            GroundKind::Wood => [0.55, 0.38, 0.22, 1.0],
            GroundKind::Sand => [0.86, 0.78, 0.55, 1.0],
        }
    }
}

/// Horizontal square centred on the world origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPlane {
    pub kind: GroundKind,
    pub height: f64,
    /// Half-width of the square.
    pub extent: f64,
}

const KEYWORDS: &[(&str, GroundKind)] = &[
    ("grass", GroundKind::Grass),
    ("field", GroundKind::Grass),
    ("garden", GroundKind::Grass),
    ("floor", GroundKind::Wood),
    ("indoor", GroundKind::Wood),
    ("desk", GroundKind::Wood),
    ("room", GroundKind::Wood),
    ("beach", GroundKind::Sand),
    ("desert", GroundKind::Sand),
    ("dune", GroundKind::Sand),
];

/// Keyword match over the description and asset names. Words are matched
/// by prefix, so "grassy" and "dunes" count. The earliest word wins.
pub fn ground_from_keywords(graph: &SceneGraph) -> Option<GroundKind> {
    let mut text = graph.description.as_str().to_lowercase();
    for a in &graph.assets {
        text.push(' ');
        text.push_str(&a.name.to_lowercase());
    }
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .find_map(|w| KEYWORDS.iter().find(|(k, _)| w.starts_with(k)).map(|&(_, g)| g))
}

/// Ground hint, then keywords, then the optional classifier, then grass.
pub fn select_ground(
    graph: &SceneGraph,
    client: Option<&crate::agents::AgentClient>,
) -> GroundKind {
    if let Some(g) = graph.ground_hint {
        return g;
    }
    if let Some(g) = ground_from_keywords(graph) {
        return g;
    }
    if let Some(client) = client {
        match crate::agents::classify_ground(&graph.description, client) {
            Ok(g) => return g,
            Err(e) => log::warn!("ground classification failed, using grass: {e}"),
        }
    }
    GroundKind::Grass
}

/// Plane tangent to the lowest bounding-box face of the layout.
pub fn place_ground(layout: &Layout, kind: GroundKind) -> Option<GroundPlane> {
    let scene = scene_aabb(layout)?;
    let half = [scene.min.x, scene.max.x, scene.min.y, scene.max.y]
        .iter()
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    Some(GroundPlane { kind, height: scene.min.z, extent: (1.5 * half).max(5.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene_graph::parse_dsl;

    fn graph(text: &str) -> SceneGraph {
        parse_dsl(text).unwrap()
    }

    #[test]
    fn keyword_table() {
        let g = graph("scene: a cow in a grassy field\nasset: cow | size=large | desc=\"a cow\"");
        assert_eq!(select_ground(&g, None), GroundKind::Grass);
        let g = graph("scene: shells on the beach\nasset: shell | size=small | desc=\"a shell\"");
        assert_eq!(select_ground(&g, None), GroundKind::Sand);
        let g = graph("scene: a lamp\nasset: desk | size=large | desc=\"a desk\"");
        assert_eq!(select_ground(&g, None), GroundKind::Wood);
    }

    #[test]
    fn hint_wins() {
        let g = graph("scene: a cow in a grassy field\nground: sand\nasset: cow | size=large | desc=\"a cow\"");
        assert_eq!(select_ground(&g, None), GroundKind::Sand);
    }

    #[test]
    fn default_is_grass() {
        let g = graph("scene: a cube\nasset: cube | size=large | desc=\"a cube\"");
        assert_eq!(select_ground(&g, None), GroundKind::Grass);
    }

    #[test]
    fn parse_round_trip() {
        for k in [GroundKind::Grass, GroundKind::Wood, GroundKind::Sand] {
            assert_eq!(GroundKind::parse(k.as_str()), Some(k));
        }
        assert_eq!(GroundKind::parse("lava"), None);
    }
}
