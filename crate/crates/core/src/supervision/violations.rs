use std::collections::BTreeMap;

use super::ScoreConfig;
use crate::geometry::{penetration_depth, Aabb};
use crate::math::{Point, Vec3};
use crate::pool::{CanonicalRelation, Layout, PoolConfig};

/// Overlaps and gaps below this are treated as exact contact.
pub const CONTACT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AssetViolation {
    pub penetration: f64,
    pub floating: f64,
    pub relation_unsat: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ViolationReport {
    pub per_asset: BTreeMap<u32, AssetViolation>,
}

impl ViolationReport {
    pub fn total(&self, id: u32) -> f64 {
        self.per_asset.get(&id).map_or(0.0, |v| v.total)
    }

    pub fn is_clean(&self) -> bool {
        self.per_asset.values().all(|v| v.total == 0.0)
    }
}

/// Boxes of every asset, keyed by id.
pub(crate) fn boxes(layout: &Layout) -> BTreeMap<u32, Aabb> {
    layout.assets.iter().map(|a| (a.spec_id, crate::geometry::compute_aabb(a))).collect()
}

/// Whether the asset is expected to stand on the ground plane.
pub(crate) fn ground_supported(layout: &Layout, id: u32) -> bool {
    !matches!(layout.relation_of(id), Some((CanonicalRelation::On | CanonicalRelation::Under, _)))
}

/// Distance by which the centre of `c` lies outside the footprint of `p`, as
/// the horizontal move that brings it back to the footprint edge.
fn footprint_move(c: &Aabb, p: &Aabb) -> (f64, f64) {
    let cc = c.center();
    let (lo, hi) = (p.min, p.max);
    (cc.x.clamp(lo.x, hi.x) - cc.x, cc.y.clamp(lo.y, hi.y) - cc.y)
}

/// Unit horizontal direction from `p` to `c`, `-x` when the centres coincide.
fn away_from(c: &Aabb, p: &Aabb) -> Vec3 {
    let d = c.center() - p.center();
    let h = Vec3::new(d.x, d.y, 0.0);
    if h.norm() > 0.0 {
        h.normalize()
    } else {
        -Vec3::x()
    }
}

/// Translation that would put the asset back in the tangency position its
/// relation asks for. The core only seeks ground contact. Assets of a
/// turned-around copy are judged in that copy's frame.
pub(crate) fn relation_correction(
    layout: &Layout,
    boxes: &BTreeMap<u32, Aabb>,
    id: u32,
    pool: &PoolConfig,
) -> Vec3 {
    if layout.is_turned(id) {
        // a half turn about the vertical axis maps the copy onto the original frame
        let turned: BTreeMap<u32, Aabb> = boxes.iter().map(|(&k, b)| (k, half_turn(b))).collect();
        let d = correction_in_frame(layout, &turned, id, pool);
        return Vec3::new(-d.x, -d.y, d.z);
    }
    correction_in_frame(layout, boxes, id, pool)
}

fn half_turn(b: &Aabb) -> Aabb {
    Aabb::new(Point::new(-b.max.x, -b.max.y, b.min.z), Point::new(-b.min.x, -b.min.y, b.max.z))
}

fn correction_in_frame(layout: &Layout, boxes: &BTreeMap<u32, Aabb>, id: u32, pool: &PoolConfig) -> Vec3 {
    use CanonicalRelation::*;
    let c = &boxes[&id];
    let ground = -c.min.z;
    let Some((rel, target)) = layout.relation_of(id) else {
        return Vec3::new(0.0, 0.0, ground);
    };
    let Some(p) = boxes.get(&target) else {
        return Vec3::new(0.0, 0.0, ground);
    };
    match rel {
        On => {
            let (dx, dy) = footprint_move(c, p);
            Vec3::new(dx, dy, p.max.z - c.min.z)
        }
        Under => {
            let (dx, dy) = footprint_move(c, p);
            Vec3::new(dx, dy, p.min.z - c.max.z)
        }
        Left | LeaningOn => Vec3::new(p.min.x - c.max.x, 0.0, ground),
        Right => Vec3::new(p.max.x - c.min.x, 0.0, ground),
        Front | Facing => Vec3::new(0.0, p.min.y - c.max.y, ground),
        Behind => Vec3::new(0.0, p.max.y - c.min.y, ground),
        Far | Near => {
            let want = crate::pool::relation_gap(c, p, rel, pool);
            let have = c.horizontal_gap(p);
            let push = if rel == Far { (want - have).max(0.0) } else { -(have - want).max(0.0) };
            away_from(c, p) * push + Vec3::new(0.0, 0.0, ground)
        }
        CenterAligned => {
            let d = p.center() - c.center();
            Vec3::new(d.x, d.y, ground)
        }
        Rotation(_) => Vec3::new(0.0, 0.0, ground),
    }
}

/// Per-asset physical violation degree.
///
/// Penetration is the deepest box overlap with any other asset (and, for
/// ground-supported assets, with the ground) over the asset's smallest
/// extent; overlaps up to `float_tolerance` are ignored. Floating is the gap to the support face beyond the tolerance over
/// the asset's height. Relation dissatisfaction is the length of the move
/// back to the relation's tangency position beyond the tolerance, over the
/// largest extent.
pub fn measure_violations(layout: &Layout, config: &ScoreConfig, pool: &PoolConfig) -> ViolationReport {
    let boxes = boxes(layout);
    let mut per_asset = BTreeMap::new();
    for (&id, c) in &boxes {
        let ext = c.extents();
        let min_ext = ext.min().max(CONTACT_EPS);
        let max_ext = ext.max().max(CONTACT_EPS);
        let height = ext.z.max(CONTACT_EPS);
        let supported = ground_supported(layout, id);

        let mut depth = boxes
            .iter()
            .filter(|(&j, _)| j != id)
            .map(|(_, b)| penetration_depth(c, b))
            .fold(0.0, f64::max);
        if supported {
            depth = depth.max(-c.min.z);
        }
        // overlaps within the tolerance count as contact, like small gaps do
        let penetration = if depth > config.float_tolerance { (depth / min_ext).min(1.0) } else { 0.0 };

        let partner = layout.relation_of(id).and_then(|(rel, t)| boxes.get(&t).map(|p| (rel, p)));
        let gap = match partner {
            Some((CanonicalRelation::On, p)) => c.min.z - p.max.z,
            Some((CanonicalRelation::Under, p)) => p.min.z - c.max.z,
            _ => c.min.z,
        };
        let floating = ((gap - config.float_tolerance) / height).clamp(0.0, 1.0);

        let relation_unsat = if layout.is_core(id) {
            0.0
        } else {
            let r = relation_correction(layout, &boxes, id, pool).norm();
            ((r - config.float_tolerance).max(0.0) / max_ext).min(1.0)
        };

        let total = (penetration + floating + relation_unsat).clamp(0.0, 1.0);
        per_asset.insert(id, AssetViolation { penetration, floating, relation_unsat, total });
    }
    ViolationReport { per_asset }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::assets::{make_primitive, normalize_mesh, PlacedAsset, PrimitiveKind};
    use crate::pool::Provenance;
    use crate::scene_graph::parse_dsl;
    use approx::assert_abs_diff_eq;

    fn cube(id: u32, size: f64, t: Vec3) -> PlacedAsset {
        let m = normalize_mesh(&make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap()).unwrap();
        let mut a = PlacedAsset::new(id, Arc::new(m), size);
        a.translation = t;
        a
    }

    fn layout(dsl: &str, assets: Vec<PlacedAsset>) -> Layout {
        Layout { assets, graph: Arc::new(parse_dsl(dsl).unwrap()), provenance: Provenance::Magnetized }
    }

    const BIRD_CHAIR: &str =
        "scene: a bird on a chair\nasset: bird | size=small | desc=\"b\"\nasset: chair | size=medium | desc=\"c\"\nrel: bird on";

    #[test]
    fn tangent_bird_is_clean() {
        let l = layout(BIRD_CHAIR, vec![cube(1, 0.4, Vec3::new(0.0, 0.0, 1.0)), cube(2, 1.0, Vec3::zeros())]);
        let r = measure_violations(&l, &ScoreConfig::default(), &PoolConfig::default());
        assert!(r.is_clean(), "{r:?}");
    }

    #[test]
    fn hovering_bird_floats_fully() {
        let l = layout(BIRD_CHAIR, vec![cube(1, 0.4, Vec3::new(0.0, 0.0, 1.5)), cube(2, 1.0, Vec3::zeros())]);
        let r = measure_violations(&l, &ScoreConfig::default(), &PoolConfig::default());
        assert_eq!(r.per_asset[&1].floating, 1.0);
        assert_eq!(r.per_asset[&1].total, 1.0);
        assert_eq!(r.per_asset[&2].total, 0.0);
    }

    #[test]
    fn overlapping_cubes_share_penetration() {
        let dsl = "scene: x\nasset: a | size=medium | desc=\"a\"\nasset: b | size=medium | desc=\"b\"\nrel: a left";
        let l = layout(dsl, vec![cube(1, 1.0, Vec3::new(-0.7, 0.0, 0.0)), cube(2, 1.0, Vec3::zeros())]);
        let r = measure_violations(&l, &ScoreConfig::default(), &PoolConfig::default());
        assert_abs_diff_eq!(r.per_asset[&1].penetration, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(r.per_asset[&2].penetration, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn sunk_core_counts_as_penetration() {
        let l = layout(
            "scene: x\nasset: a | size=medium | desc=\"a\"",
            vec![cube(1, 1.0, Vec3::new(0.0, 0.0, -0.25))],
        );
        let r = measure_violations(&l, &ScoreConfig::default(), &PoolConfig::default());
        assert_abs_diff_eq!(r.per_asset[&1].penetration, 0.25, epsilon = 1e-12);
    }
}
