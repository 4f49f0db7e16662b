//! Scene graph data model, the line-oriented scene DSL and the JSON codec.

mod dsl;
mod json;
mod validate;

use std::fmt;

use crate::pool::CanonicalRelation;
use crate::scene_io::GroundKind;

pub use dsl::{parse_dsl, ParseError};
pub use json::{decode_graph, encode_graph, DecodeError};
pub use validate::{validate_graph, ValidationReport, Violation};

/// The free-form scene description.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneDescription(String);

impl SceneDescription {
    /// `None` when the text is blank.
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            None
        } else {
            Some(SceneDescription(text))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SceneDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "small" => Some(SizeClass::Small),
            "medium" => Some(SizeClass::Medium),
            "large" => Some(SizeClass::Large),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssetSpec {
    /// 1-based extraction order.
    pub id: u32,
    pub name: String,
    /// Generation-ready description.
    pub enriched_desc: String,
    pub size: SizeClass,
}

/// A relation as extracted (free text) or after classification.
#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    Canonical(CanonicalRelation),
    Phrase(String),
}

impl Relation {
    /// Exact database tokens become [`Relation::Canonical`], anything else is
    /// kept as a normalized phrase.
    pub fn from_phrase(phrase: &str, angle_deg: Option<f64>) -> Self {
        match CanonicalRelation::from_token(phrase, angle_deg) {
            Some(c) => Relation::Canonical(c),
            None => Relation::Phrase(
                phrase.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" "),
            ),
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Relation::Canonical(c) => c.token(),
            Relation::Phrase(p) => p,
        }
    }

    pub fn canonical(&self) -> Option<CanonicalRelation> {
        match self {
            Relation::Canonical(c) => Some(*c),
            Relation::Phrase(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationSpec {
    pub subject_id: u32,
    pub relation: Relation,
    /// Defaults to the core asset.
    pub target_id: u32,
    /// Rotation angle in degrees, when the relation carries one.
    pub angle_deg: Option<f64>,
}

/// Whole-scene duplication rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpecialRelation {
    #[default]
    None,
    DuplicateXAlignment,
    DuplicateYAlignment,
    DuplicateFacing,
}

impl SpecialRelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpecialRelation::None => "none",
            SpecialRelation::DuplicateXAlignment => "duplicate_x_alignment",
            SpecialRelation::DuplicateYAlignment => "duplicate_y_alignment",
            SpecialRelation::DuplicateFacing => "duplicate_facing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "none" => Some(SpecialRelation::None),
            "duplicate_x_alignment" => Some(SpecialRelation::DuplicateXAlignment),
            "duplicate_y_alignment" => Some(SpecialRelation::DuplicateYAlignment),
            "duplicate_facing" => Some(SpecialRelation::DuplicateFacing),
            _ => None,
        }
    }

    pub fn duplicates(&self) -> bool {
        !matches!(self, SpecialRelation::None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneGraph {
    pub description: SceneDescription,
    pub assets: Vec<AssetSpec>,
    pub relations: Vec<RelationSpec>,
    pub special: SpecialRelation,
    pub ground_hint: Option<GroundKind>,
}

impl SceneGraph {
    /// The second extracted asset, or the only one.
    pub fn core_id(&self) -> u32 {
        if self.assets.len() >= 2 {
            2
        } else {
            1
        }
    }

    pub fn asset(&self, id: u32) -> Option<&AssetSpec> {
        self.assets.iter().find(|a| a.id == id)
    }

    pub fn asset_by_name(&self, name: &str) -> Option<&AssetSpec> {
        self.assets.iter().find(|a| a.name == name)
    }

    pub fn relation_of(&self, subject_id: u32) -> Option<&RelationSpec> {
        self.relations.iter().find(|r| r.subject_id == subject_id)
    }

    pub fn is_canonical(&self) -> bool {
        self.relations.iter().all(|r| r.relation.canonical().is_some())
    }
}
