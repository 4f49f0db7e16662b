use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{GroundKind, GroundPlane};
use crate::assets::{Mesh, PlacedAsset, Tilt};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::pool::{Layout, Provenance};
use crate::scene_graph::{decode_graph, encode_graph};
use crate::supervision::RefineTrace;

pub fn provenance_str(p: Provenance) -> String {
    match p {
        Provenance::Coarse => "coarse".into(),
        Provenance::Magnetized => "magnetized".into(),
        Provenance::Refined(t) => format!("refined:{t}"),
    }
}

pub fn parse_provenance(s: &str) -> Option<Provenance> {
    match s {
        "coarse" => Some(Provenance::Coarse),
        "magnetized" => Some(Provenance::Magnetized),
        _ => s.strip_prefix("refined:")?.parse().ok().map(Provenance::Refined),
    }
}

/// Everything written to `layout.json` besides the layout itself.
#[derive(Debug, Clone, Default)]
pub struct LayoutExtras<'a> {
    pub ground: Option<&'a GroundPlane>,
    pub score: Option<f64>,
    pub trace: Option<&'a RefineTrace>,
    pub asset_source: Option<String>,
}

pub fn encode_layout(layout: &Layout, extras: &LayoutExtras<'_>) -> Value {
    let mut assets: Vec<&PlacedAsset> = layout.assets.iter().collect();
    assets.sort_by_key(|a| a.spec_id);
    let assets: Vec<Value> = assets
        .iter()
        .map(|a| {
            let mut v = json!({
                "id": a.spec_id,
                "name": layout.name_of(a.spec_id),
                "scale": a.scale,
                "yaw_deg": a.yaw_deg,
                "translation": [a.translation.x, a.translation.y, a.translation.z],
            });
            if let Some(t) = &a.tilt {
                v["tilt"] = json!({"axis": t.axis, "deg": t.deg});
            }
            v
        })
        .collect();
    let mut doc = json!({
        "assets": assets,
        "graph": encode_graph(&layout.graph),
        "provenance": provenance_str(layout.provenance),
        "score": extras.score,
        "trace": extras.trace.map_or(Value::Array(vec![]), |t| t.to_json()["iterations"].clone()),
    });
    if let Some(g) = extras.ground {
        doc["ground"] = json!({"kind": g.kind.as_str(), "height": g.height, "extent": g.extent});
    }
    if let Some(t) = extras.trace {
        doc["terminal_reason"] = json!(t.terminal_reason.map(|r| r.as_str()));
        doc["initial_score"] = json!(t.initial_score);
    }
    if let Some(s) = &extras.asset_source {
        doc["asset_source"] = json!(s);
    }
    doc
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(format!("layout.json: {}", msg.into()))
}

fn f64_at(v: &Value, key: &str, ctx: &str) -> Result<f64> {
    v.get(key).and_then(Value::as_f64).ok_or_else(|| bad(format!("{ctx}: missing number '{key}'")))
}

fn vec3_at(v: &Value, key: &str, ctx: &str) -> Result<[f64; 3]> {
    let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("{ctx}: missing '{key}'")))?;
    let xs: Vec<f64> = arr.iter().filter_map(Value::as_f64).collect();
    <[f64; 3]>::try_from(xs).map_err(|_| bad(format!("{ctx}: '{key}' needs three numbers")))
}

/// Rebuilds a layout; `meshes` is keyed by scene-graph id and receives the
/// decoded graph.
pub fn decode_layout(
    doc: &Value,
    meshes: impl FnOnce(&crate::scene_graph::SceneGraph) -> Result<HashMap<u32, Arc<Mesh>>>,
) -> Result<(Layout, Option<GroundPlane>)> {
    let graph = decode_graph(doc.get("graph").ok_or_else(|| bad("missing 'graph'"))?)?;
    let meshes = meshes(&graph)?;
    let n = graph.assets.len() as u32;
    let arr = doc.get("assets").and_then(Value::as_array).ok_or_else(|| bad("missing 'assets'"))?;
    let mut assets = Vec::with_capacity(arr.len());
    for (i, a) in arr.iter().enumerate() {
        let ctx = format!("assets[{i}]");
        let id = a.get("id").and_then(Value::as_u64).ok_or_else(|| bad(format!("{ctx}: missing 'id'")))? as u32;
        if id == 0 {
            return Err(bad(format!("{ctx}: id must be >= 1")));
        }
        let source = (id - 1) % n.max(1) + 1;
        let mesh = meshes.get(&source).ok_or_else(|| bad(format!("{ctx}: no mesh for asset {source}")))?;
        let mut p = PlacedAsset::new(id, Arc::clone(mesh), f64_at(a, "scale", &ctx)?);
        p.yaw_deg = f64_at(a, "yaw_deg", &ctx)?;
        p.translation = Vec3::from(vec3_at(a, "translation", &ctx)?);
        if let Some(t) = a.get("tilt").filter(|t| !t.is_null()) {
            p.tilt = Some(Tilt { axis: vec3_at(t, "axis", &ctx)?, deg: f64_at(t, "deg", &ctx)? });
        }
        if !p.is_valid() {
            return Err(bad(format!("{ctx}: transform is not finite or scale is not positive")));
        }
        assets.push(p);
    }
    assets.sort_by_key(|a| a.spec_id);
    let provenance = doc
        .get("provenance")
        .and_then(Value::as_str)
        .map_or(Some(Provenance::Magnetized), parse_provenance)
        .ok_or_else(|| bad("unknown provenance"))?;
    let ground = match doc.get("ground").filter(|g| !g.is_null()) {
        Some(g) => Some(GroundPlane {
            kind: g
                .get("kind")
                .and_then(Value::as_str)
                .and_then(GroundKind::parse)
                .ok_or_else(|| bad("ground: unknown kind"))?,
            height: f64_at(g, "height", "ground")?,
            extent: f64_at(g, "extent", "ground")?,
        }),
        None => None,
    };
    Ok((Layout { assets, graph: Arc::new(graph), provenance }, ground))
}
