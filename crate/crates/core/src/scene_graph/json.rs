//! JSON interchange form of [`SceneGraph`], also the answer format of the
//! extractor agent.

use serde_json::{json, Map, Value};

use super::{AssetSpec, Relation, RelationSpec, SceneDescription, SceneGraph, SizeClass, SpecialRelation};
use crate::scene_io::GroundKind;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("scene graph schema error at {pointer}: {message}")]
pub struct DecodeError {
    /// JSON pointer to the offending value.
    pub pointer: String,
    pub message: String,
}

fn fail<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError { pointer: pointer.into(), message: message.into() })
}

pub fn encode_graph(graph: &SceneGraph) -> Value {
    let assets: Vec<Value> = graph
        .assets
        .iter()
        .map(|a| json!({"id": a.id, "name": a.name, "enriched_desc": a.enriched_desc, "size": a.size.as_str()}))
        .collect();
    let relations: Vec<Value> = graph
        .relations
        .iter()
        .map(|r| {
            let mut o = json!({"subject": r.subject_id, "relation": r.relation.text(), "target": r.target_id});
            if let Some(a) = r.angle_deg {
                o["angle_deg"] = json!(a);
            }
            o
        })
        .collect();
    let mut doc = json!({
        "description": graph.description.as_str(),
        "assets": assets,
        "relations": relations,
        "special": graph.special.as_str(),
    });
    if let Some(g) = graph.ground_hint {
        doc["ground"] = json!(g.as_str());
    }
    doc
}

fn field<'a>(obj: &'a Map<String, Value>, base: &str, key: &str) -> Result<&'a Value, DecodeError> {
    obj.get(key).map_or_else(|| fail(format!("{base}/{key}"), "required field is missing"), Ok)
}

fn string<'a>(obj: &'a Map<String, Value>, base: &str, key: &str) -> Result<&'a str, DecodeError> {
    field(obj, base, key)?
        .as_str()
        .map_or_else(|| fail(format!("{base}/{key}"), "expected a string"), Ok)
}

fn id(obj: &Map<String, Value>, base: &str, key: &str) -> Result<u32, DecodeError> {
    field(obj, base, key)?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .map_or_else(|| fail(format!("{base}/{key}"), "expected a non-negative integer"), Ok)
}

/// Structural decode only; run [`super::validate_graph`] for invariants.
pub fn decode_graph(doc: &Value) -> Result<SceneGraph, DecodeError> {
    let Some(root) = doc.as_object() else { return fail("", "expected an object") };
    let description = SceneDescription::new(string(root, "", "description")?)
        .map_or_else(|| fail("/description", "description is empty"), Ok)?;

    let Some(raw_assets) = field(root, "", "assets")?.as_array() else {
        return fail("/assets", "expected an array");
    };
    let mut assets = Vec::with_capacity(raw_assets.len());
    for (i, a) in raw_assets.iter().enumerate() {
        let base = format!("/assets/{i}");
        let Some(o) = a.as_object() else { return fail(base, "expected an object") };
        let size_text = string(o, &base, "size")?;
        let Some(size) = SizeClass::parse(size_text) else {
            return fail(format!("{base}/size"), format!("unknown size class '{size_text}'"));
        };
        assets.push(AssetSpec {
            id: id(o, &base, "id")?,
            name: string(o, &base, "name")?.to_string(),
            enriched_desc: string(o, &base, "enriched_desc")?.to_string(),
            size,
        });
    }
    let core = if assets.len() >= 2 { 2 } else { 1 };

    let mut relations = Vec::new();
    if let Some(v) = root.get("relations") {
        let Some(raw) = v.as_array() else { return fail("/relations", "expected an array") };
        for (i, r) in raw.iter().enumerate() {
            let base = format!("/relations/{i}");
            let Some(o) = r.as_object() else { return fail(base, "expected an object") };
            let subject_id = id(o, &base, "subject")?;
            let text = match field(o, &base, "relation")? {
                Value::Null => continue,
                Value::String(s) => s.as_str(),
                _ => return fail(format!("{base}/relation"), "expected a string"),
            };
            // the core's own relation is written as None by the extractor
            if text.trim().eq_ignore_ascii_case("none") {
                continue;
            }
            let target_id = if o.contains_key("target") && !o["target"].is_null() { id(o, &base, "target")? } else { core };
            let angle_deg = match o.get("angle_deg") {
                None | Some(Value::Null) => None,
                Some(v) => match v.as_f64() {
                    Some(a) => Some(a),
                    None => return fail(format!("{base}/angle_deg"), "expected a number"),
                },
            };
            relations.push(RelationSpec {
                subject_id,
                relation: Relation::from_phrase(text, angle_deg),
                target_id,
                angle_deg,
            });
        }
    }

    let special = match root.get("special") {
        None | Some(Value::Null) => SpecialRelation::None,
        Some(Value::String(s)) => SpecialRelation::parse(s)
            .map_or_else(|| fail("/special", format!("unknown special relation '{s}'")), Ok)?,
        Some(_) => return fail("/special", "expected a string"),
    };
    let ground_hint = match root.get("ground") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => {
            Some(GroundKind::parse(s).map_or_else(|| fail("/ground", format!("unknown ground '{s}'")), Ok)?)
        }
        Some(_) => return fail("/ground", "expected a string"),
    };
    Ok(SceneGraph { description, assets, relations, special, ground_hint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene_graph::parse_dsl;

    const BIRD: &str = "scene: a bird on a chair\nasset: bird | size=small | desc=\"a small blue bird\"\nasset: chair | size=medium | desc=\"a wooden chair\"\nrel: bird on";

    #[test]
    fn roundtrip_bird_chair() {
        let g = parse_dsl(BIRD).unwrap();
        assert_eq!(decode_graph(&encode_graph(&g)).unwrap(), g);
    }

    #[test]
    fn special_preserved() {
        let g = parse_dsl(&format!("{BIRD}\nspecial: duplicate_facing")).unwrap();
        let back = decode_graph(&encode_graph(&g)).unwrap();
        assert_eq!(back.special, SpecialRelation::DuplicateFacing);
    }

    #[test]
    fn missing_assets_pointer() {
        let e = decode_graph(&json!({"description": "x", "relations": [], "special": "none"})).unwrap_err();
        assert_eq!(e.pointer, "/assets");
    }

    #[test]
    fn nested_pointer() {
        let doc = json!({"description": "x", "assets": [{"id": 1, "name": "a", "enriched_desc": "a", "size": "tiny"}]});
        assert_eq!(decode_graph(&doc).unwrap_err().pointer, "/assets/0/size");
    }

    #[test]
    fn none_relation_is_the_core_sentinel() {
        let doc = json!({
            "description": "x",
            "assets": [
                {"id": 1, "name": "a", "enriched_desc": "a", "size": "small"},
                {"id": 2, "name": "b", "enriched_desc": "b", "size": "large"}
            ],
            "relations": [{"subject": 1, "relation": "on top of"}, {"subject": 2, "relation": "None"}],
            "special": "none"
        });
        let g = decode_graph(&doc).unwrap();
        assert_eq!(g.relations.len(), 1);
        assert_eq!(g.relations[0].target_id, 2);
    }
}
