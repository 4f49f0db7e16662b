//! Line-oriented scene DSL.
//!
//! ```text
//! # comment
//! scene: a bird on a chair
//! ground: wood
//! special: none
//! asset: bird | size=small | desc="a small blue bird"
//! asset: chair | size=medium | desc="a wooden chair"
//! rel: bird on
//! ```
//!
//! `rel: <subject> <phrase> [<target>] [angle=<deg>]` names assets by their
//! `asset:` names; multi-word names are matched longest-first. The target
//! defaults to the core asset.

use std::fmt;

use super::{
    validate_graph, AssetSpec, Relation, RelationSpec, SceneDescription, SceneGraph, SizeClass,
    SpecialRelation,
};
use crate::scene_io::GroundKind;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateAsset(String),
    UnknownAsset(String),
    MultipleSpecial,
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::DuplicateAsset(n) => write!(f, "duplicate asset name '{n}'"),
            ParseErrorKind::UnknownAsset(n) => write!(f, "relation references unknown asset '{n}'"),
            ParseErrorKind::MultipleSpecial => write!(f, "more than one 'special:' line"),
            ParseErrorKind::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

struct RawRel {
    line: usize,
    column: usize,
    words: Vec<String>,
    angle: Option<f64>,
}

pub fn parse_dsl(text: &str) -> Result<SceneGraph, ParseError> {
    let mut description: Option<SceneDescription> = None;
    let mut ground = None;
    let mut special: Option<SpecialRelation> = None;
    let mut assets: Vec<AssetSpec> = Vec::new();
    let mut asset_lines: Vec<usize> = Vec::new();
    let mut rels: Vec<RawRel> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.chars().count() - trimmed.chars().count();
        let Some(colon) = trimmed.find(':') else {
            return Err(syntax(line_no, indent + 1, "expected '<keyword>: ...'"));
        };
        let keyword = trimmed[..colon].trim();
        let body = &trimmed[colon + 1..];
        // column of the first character after the colon
        let body_col = indent + trimmed[..colon].chars().count() + 2;

        if description.is_none() && keyword != "scene" {
            return Err(syntax(line_no, indent + 1, "the first line must be 'scene: <text>'"));
        }
        match keyword {
            "scene" => {
                if description.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate 'scene:' line"));
                }
                description = Some(
                    SceneDescription::new(body.trim())
                        .ok_or_else(|| syntax(line_no, body_col, "scene description is empty"))?,
                );
            }
            "ground" => {
                if ground.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate 'ground:' line"));
                }
                ground = Some(GroundKind::parse(body).ok_or_else(|| {
                    syntax(line_no, body_col, format!("unknown ground '{}'", body.trim()))
                })?);
            }
            "special" => {
                if special.is_some() {
                    return Err(err(line_no, indent + 1, ParseErrorKind::MultipleSpecial));
                }
                special = Some(SpecialRelation::parse(body).ok_or_else(|| {
                    syntax(line_no, body_col, format!("unknown special relation '{}'", body.trim()))
                })?);
            }
            "asset" => {
                let spec = parse_asset(body, line_no, body_col, assets.len() as u32 + 1)?;
                if assets.iter().any(|a| a.name == spec.name) {
                    return Err(err(line_no, body_col, ParseErrorKind::DuplicateAsset(spec.name)));
                }
                assets.push(spec);
                asset_lines.push(line_no);
            }
            "rel" => rels.push(parse_rel(body, line_no, body_col)?),
            other => {
                return Err(syntax(line_no, indent + 1, format!("unknown keyword '{other}'")));
            }
        }
    }

    let description = description.ok_or_else(|| syntax(1, 1, "missing 'scene:' line"))?;
    if assets.is_empty() {
        return Err(syntax(text.lines().count().max(1), 1, "at least one 'asset:' line is required"));
    }
    let core = if assets.len() >= 2 { 2 } else { 1 };
    let mut relations: Vec<RelationSpec> = Vec::new();
    for r in rels {
        let (subject, used) = match_name(&assets, &r.words, false).ok_or_else(|| {
            err(r.line, r.column, ParseErrorKind::UnknownAsset(r.words.first().cloned().unwrap_or_default()))
        })?;
        let rest = &r.words[used..];
        // a trailing asset name is the target, as long as a phrase remains
        let (target, phrase_words) = match match_name(&assets, rest, true) {
            Some((id, n)) if n < rest.len() => (id, &rest[..rest.len() - n]),
            _ => (core, rest),
        };
        if phrase_words.is_empty() {
            return Err(syntax(r.line, r.column, "relation phrase is missing"));
        }
        if subject == core {
            return Err(err(r.line, r.column, ParseErrorKind::Invalid(format!(
                "the core asset '{}' cannot have a relation", assets[core as usize - 1].name
            ))));
        }
        if subject == target {
            return Err(err(r.line, r.column, ParseErrorKind::Invalid("an asset cannot relate to itself".into())));
        }
        if relations.iter().any(|x| x.subject_id == subject) {
            return Err(err(r.line, r.column, ParseErrorKind::Invalid(format!(
                "asset '{}' already has a relation", assets[subject as usize - 1].name
            ))));
        }
        relations.push(RelationSpec {
            subject_id: subject,
            relation: Relation::from_phrase(&phrase_words.join(" "), r.angle),
            target_id: target,
            angle_deg: r.angle,
        });
    }
    for a in &assets {
        if a.id != core && !relations.iter().any(|r| r.subject_id == a.id) {
            return Err(err(asset_lines[a.id as usize - 1], 1, ParseErrorKind::Invalid(format!(
                "asset '{}' has no 'rel:' line", a.name
            ))));
        }
    }
    relations.sort_by_key(|r| r.subject_id);

    let graph = SceneGraph {
        description,
        assets,
        relations,
        special: special.unwrap_or_default(),
        ground_hint: ground,
    };
    debug_assert!(validate_graph(&graph).is_valid(), "{:?}", validate_graph(&graph));
    Ok(graph)
}

/// Longest asset name matching the start (or end) of `words`.
fn match_name(assets: &[AssetSpec], words: &[String], from_end: bool) -> Option<(u32, usize)> {
    assets
        .iter()
        .filter_map(|a| {
            let name: Vec<&str> = a.name.split_whitespace().collect();
            let n = name.len();
            if n == 0 || n > words.len() {
                return None;
            }
            let window = if from_end { &words[words.len() - n..] } else { &words[..n] };
            window.iter().map(String::as_str).eq(name.iter().copied()).then_some((a.id, n))
        })
        .max_by_key(|&(id, n)| (n, std::cmp::Reverse(id)))
}

fn parse_rel(body: &str, line: usize, column: usize) -> Result<RawRel, ParseError> {
    let mut words: Vec<String> = body.split_whitespace().map(str::to_string).collect();
    let mut angle = None;
    if let Some(last) = words.last() {
        if let Some(v) = last.strip_prefix("angle=") {
            let a: f64 = v
                .parse()
                .ok()
                .filter(|a: &f64| a.is_finite())
                .ok_or_else(|| syntax(line, column, format!("invalid angle '{v}'")))?;
            angle = Some(a);
            words.pop();
        }
    }
    if words.is_empty() {
        return Err(syntax(line, column, "expected 'rel: <asset> <relation> [<target>]'"));
    }
    Ok(RawRel { line, column: column + leading_ws(body), words, angle })
}

fn leading_ws(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count()
}

fn parse_asset(body: &str, line: usize, column: usize, id: u32) -> Result<AssetSpec, ParseError> {
    let chars: Vec<char> = body.chars().collect();
    let mut pos = 0;
    let col = |p: usize| column + p;

    let name_end = chars.iter().position(|&c| c == '|').unwrap_or(chars.len());
    let name: String = chars[..name_end].iter().collect::<String>().split_whitespace().collect::<Vec<_>>().join(" ");
    if name.is_empty() {
        return Err(syntax(line, col(0), "asset name is empty"));
    }
    pos = pos.max(name_end);

    let mut size = None;
    let mut desc = None;
    while pos < chars.len() {
        // at '|'
        pos += 1;
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        let key_start = pos;
        while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
            pos += 1;
        }
        let key: String = chars[key_start..pos].iter().collect();
        if pos >= chars.len() || chars[pos] != '=' {
            return Err(syntax(line, col(pos), "expected '<key>=<value>'"));
        }
        pos += 1;
        let value_col = col(pos);
        let value = if pos < chars.len() && chars[pos] == '"' {
            pos += 1;
            let mut s = String::new();
            loop {
                match chars.get(pos) {
                    None => return Err(syntax(line, value_col, "unterminated string")),
                    Some('"') => {
                        pos += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(pos + 1) {
                            Some(&c @ ('"' | '\\')) => s.push(c),
                            Some('n') => s.push('\n'),
                            _ => return Err(syntax(line, col(pos), "invalid escape")),
                        }
                        pos += 2;
                    }
                    Some(&c) => {
                        s.push(c);
                        pos += 1;
                    }
                }
            }
            s
        } else {
            let start = pos;
            while pos < chars.len() && chars[pos] != '|' {
                pos += 1;
            }
            chars[start..pos].iter().collect::<String>().trim().to_string()
        };
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos < chars.len() && chars[pos] != '|' {
            return Err(syntax(line, col(pos), "expected '|' or end of line"));
        }
        match key.as_str() {
            "size" => {
                size = Some(SizeClass::parse(&value).ok_or_else(|| {
                    syntax(line, value_col, format!("size must be small, medium or large, got '{value}'"))
                })?)
            }
            "desc" => {
                if value.trim().is_empty() {
                    return Err(syntax(line, value_col, "desc is empty"));
                }
                desc = Some(value)
            }
            other => return Err(syntax(line, col(key_start), format!("unknown asset attribute '{other}'"))),
        }
    }
    Ok(AssetSpec {
        id,
        name,
        enriched_desc: desc.ok_or_else(|| syntax(line, column, "missing desc=\"...\""))?,
        size: size.ok_or_else(|| syntax(line, column, "missing size=..."))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pool::CanonicalRelation;

    const BIRD: &str = "scene: a bird on a chair\nasset: bird | size=small | desc=\"a small blue bird\"\nasset: chair | size=medium | desc=\"a wooden chair\"\nrel: bird on";

    #[test]
    fn bird_on_chair() {
        let g = parse_dsl(BIRD).unwrap();
        assert_eq!(g.assets.len(), 2);
        assert_eq!(g.core_id(), 2);
        assert_eq!(g.assets[1].name, "chair");
        assert_eq!(g.assets[0].size, SizeClass::Small);
        assert_eq!(g.relations, vec![RelationSpec {
            subject_id: 1,
            relation: Relation::Canonical(CanonicalRelation::On),
            target_id: 2,
            angle_deg: None,
        }]);
        assert_eq!(g.special, SpecialRelation::None);
        assert_eq!(g.description.as_str(), "a bird on a chair");
    }

    #[test]
    fn single_asset() {
        let g = parse_dsl("scene: x\nasset: a | size=large | desc=\"a\"").unwrap();
        assert_eq!(g.assets.len(), 1);
        assert_eq!(g.core_id(), 1);
        assert!(g.relations.is_empty());
    }

    #[test]
    fn duplicate_name() {
        let e = parse_dsl("scene: x\nasset: a | size=large | desc=\"a\"\nasset: a | size=small | desc=\"b\"").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateAsset("a".into()));
        assert_eq!(e.line, 3);
    }

    #[test]
    fn unknown_subject() {
        let e = parse_dsl(&format!("{BIRD}\nrel: cat near")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownAsset("cat".into()));
        assert_eq!((e.line, e.column), (5, 6));
    }

    #[test]
    fn multiple_special() {
        let e = parse_dsl(&format!("{BIRD}\nspecial: none\nspecial: duplicate_facing")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MultipleSpecial);
        assert_eq!(e.line, 6);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_dsl("scene: x\nasset: a | size=huge | desc=\"a\"").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (2, 17));
        let e = parse_dsl("asset: a | size=small | desc=\"a\"").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_dsl("scene: x\nasset: a | size=small | desc=\"a").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(ref m) if m.contains("unterminated")));
    }

    #[test]
    fn multiword_names_targets_and_angles() {
        let src = r#"
# a park
scene: a bicycle leaning against an oak tree next to a bench
ground: grass
asset: bicycle | size=medium | desc="a red bicycle"
asset: oak tree | size=large | desc="an old oak | tall"
asset: bench | size=medium | desc="a \"park\" bench"
asset: lamp | size=medium | desc="a lamp"
rel: bicycle leaning against
rel: bench near oak tree
rel: lamp rotation bench angle=45
"#;
        let g = parse_dsl(src).unwrap();
        assert_eq!(g.assets[1].name, "oak tree");
        assert_eq!(g.assets[1].enriched_desc, "an old oak | tall");
        assert_eq!(g.assets[2].enriched_desc, "a \"park\" bench");
        assert_eq!(g.ground_hint, Some(GroundKind::Grass));
        assert_eq!(g.relations[0].relation, Relation::Phrase("leaning against".into()));
        assert_eq!(g.relations[1].target_id, 2);
        assert_eq!(g.relations[1].relation, Relation::Canonical(CanonicalRelation::Near));
        assert_eq!(g.relations[2].target_id, 3);
        assert_eq!(g.relations[2].relation, Relation::Canonical(CanonicalRelation::Rotation(45.0)));
        assert_eq!(g.relations[2].angle_deg, Some(45.0));
    }

    #[test]
    fn missing_relation_is_rejected() {
        let e = parse_dsl("scene: x\nasset: a | size=small | desc=\"a\"\nasset: b | size=small | desc=\"b\"").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Invalid(_)));
        assert_eq!(e.line, 2);
    }

    #[test]
    fn core_relation_is_rejected() {
        let e = parse_dsl(&format!("{BIRD}\nrel: chair under bird")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Invalid(_)));
    }
}
