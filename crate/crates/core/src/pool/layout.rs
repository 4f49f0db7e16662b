use std::sync::Arc;

use super::CanonicalRelation;
use crate::assets::PlacedAsset;
use crate::geometry::{compute_aabb, Aabb};
use crate::scene_graph::{SceneGraph, SpecialRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Coarse,
    Magnetized,
    /// Refined after `t` supervision iterations.
    Refined(u32),
}

/// Placed assets realizing a scene graph.
///
/// After a duplicating special relation the layout holds two copies; copy ids
/// are the original ids offset by the graph's asset count.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub assets: Vec<PlacedAsset>,
    pub graph: Arc<SceneGraph>,
    pub provenance: Provenance,
}

impl Layout {
    pub fn asset(&self, id: u32) -> Option<&PlacedAsset> {
        self.assets.iter().find(|a| a.spec_id == id)
    }

    pub fn asset_mut(&mut self, id: u32) -> Option<&mut PlacedAsset> {
        self.assets.iter_mut().find(|a| a.spec_id == id)
    }

    pub fn ids(&self) -> Vec<u32> {
        self.assets.iter().map(|a| a.spec_id).collect()
    }

    fn graph_len(&self) -> u32 {
        self.graph.assets.len().max(1) as u32
    }

    /// Scene-graph id an asset (or its copy) was made from.
    pub fn source_id(&self, id: u32) -> u32 {
        (id - 1) % self.graph_len() + 1
    }

    /// Id offset of the copy `id` belongs to.
    pub fn copy_offset(&self, id: u32) -> u32 {
        (id - 1) / self.graph_len() * self.graph_len()
    }

    pub fn name_of(&self, id: u32) -> &str {
        self.graph.asset(self.source_id(id)).map_or("?", |a| a.name.as_str())
    }

    pub fn is_core(&self, id: u32) -> bool {
        self.source_id(id) == self.graph.core_id()
    }

    /// Canonical relation of `id` and the id of its partner in the same copy.
    pub fn relation_of(&self, id: u32) -> Option<(CanonicalRelation, u32)> {
        let spec = self.graph.relation_of(self.source_id(id))?;
        let rel = spec.relation.canonical()?;
        Some((rel, spec.target_id + self.copy_offset(id)))
    }

    /// Whether `id` belongs to the turned-around copy of a facing duplicate,
    /// whose relation sides are mirrored in the world frame.
    pub fn is_turned(&self, id: u32) -> bool {
        self.graph.special == SpecialRelation::DuplicateFacing && self.copy_offset(id) > 0
    }

    pub fn aabb(&self, id: u32) -> Option<Aabb> {
        self.asset(id).map(compute_aabb)
    }

    pub fn is_finite(&self) -> bool {
        self.assets.iter().all(PlacedAsset::is_valid)
    }
}
