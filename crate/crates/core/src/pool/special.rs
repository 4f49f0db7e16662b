use super::{Layout, PoolConfig};
use crate::assets::Tilt;
use crate::geometry::{compute_aabb, Aabb};
use crate::scene_graph::SpecialRelation;

/// Union of every asset box, `None` for an empty layout.
pub fn scene_aabb(layout: &Layout) -> Option<Aabb> {
    layout.assets.iter().map(compute_aabb).reduce(|a, b| a.union(&b))
}

/// Adds a rigid copy of the whole scene for the duplicating relations.
pub fn apply_special(layout: &Layout, special: SpecialRelation, config: &PoolConfig) -> Layout {
    let Some(scene) = scene_aabb(layout) else { return layout.clone() };
    let ext = scene.extents();
    let offset = layout.assets.len() as u32;
    let mut out = layout.clone();
    let copies = layout.assets.iter().map(|a| {
        let mut c = a.clone();
        c.spec_id += offset;
        c
    });
    match special {
        SpecialRelation::None => return out,
        SpecialRelation::DuplicateXAlignment => out.assets.extend(copies.map(|mut c| {
            c.translation.x += ext.x + config.margin;
            c
        })),
        SpecialRelation::DuplicateYAlignment => out.assets.extend(copies.map(|mut c| {
            c.translation.y += ext.y + config.margin;
            c
        })),
        SpecialRelation::DuplicateFacing => {
            // half turn about the vertical line through the scene centre
            let centre = scene.center();
            out.assets.extend(copies.map(|mut c| {
                c.translation.x = 2.0 * centre.x - c.translation.x;
                c.translation.y = 2.0 * centre.y - c.translation.y + ext.y + config.margin;
                c.yaw_deg += 180.0;
                c.tilt = c.tilt.map(|t| Tilt { axis: [-t.axis[0], -t.axis[1], t.axis[2]], deg: t.deg });
                c
            }))
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::assets::{make_primitive, PlacedAsset, PrimitiveKind};
    use crate::pool::Provenance;
    use crate::scene_graph::parse_dsl;
    use crate::math::Vec3;
    use approx::assert_abs_diff_eq;

    fn layout() -> Layout {
        let g = parse_dsl("scene: x\nasset: a | size=small | desc=\"a\"\nasset: b | size=large | desc=\"b\"\nrel: a left").unwrap();
        let m = Arc::new(make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap());
        let mut a = PlacedAsset::new(1, m.clone(), 1.0);
        a.translation = Vec3::new(-1.0, 0.0, 0.5);
        let mut b = PlacedAsset::new(2, m, 1.0);
        b.translation = Vec3::new(1.5, 0.0, 0.5);
        Layout { assets: vec![a, b], graph: Arc::new(g), provenance: Provenance::Magnetized }
    }

    #[test]
    fn none_is_identity() {
        let l = layout();
        assert_eq!(apply_special(&l, SpecialRelation::None, &PoolConfig::default()), l);
    }

    #[test]
    fn duplicate_x_shifts_by_extent_plus_margin() {
        // scene x extent is [-1.5, 2.0] = 3.5
        let l = apply_special(&layout(), SpecialRelation::DuplicateXAlignment, &PoolConfig::default());
        assert_eq!(l.assets.len(), 4);
        let d = l.asset(3).unwrap().translation - l.asset(1).unwrap().translation;
        assert_abs_diff_eq!(d, Vec3::new(3.6, 0.0, 0.0), epsilon = 1e-12);
        assert_eq!(l.source_id(4), 2);
    }

    #[test]
    fn duplicate_facing_turns_around() {
        let l = apply_special(&layout(), SpecialRelation::DuplicateFacing, &PoolConfig::default());
        let f = l.asset(1).unwrap().forward().dot(&l.asset(3).unwrap().forward());
        assert_abs_diff_eq!(f, -1.0, epsilon = 1e-12);
        let orig = compute_aabb(l.asset(1).unwrap()).union(&compute_aabb(l.asset(2).unwrap()));
        let copy = compute_aabb(l.asset(3).unwrap()).union(&compute_aabb(l.asset(4).unwrap()));
        assert_abs_diff_eq!(copy.min.y - orig.max.y, 0.1, epsilon = 1e-12);
    }
}
