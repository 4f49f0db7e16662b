use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{CanonicalRelation, Layout, PoolConfig, PoolError, Provenance};
use crate::agents::{classify_relation, AgentClient};
use crate::assets::{Mesh, PlacedAsset, Tilt};
use crate::geometry::{compute_aabb, Aabb};
use crate::math::Vec3;
use crate::scene_graph::{Relation, SceneGraph};

/// Replaces every free-form relation phrase with a database member.
pub fn canonicalize(graph: &SceneGraph, client: Option<&AgentClient>) -> Result<SceneGraph, PoolError> {
    let mut out = graph.clone();
    for spec in &mut out.relations {
        if let Relation::Phrase(phrase) = &spec.relation {
            let rel = classify_relation(phrase, client).map_err(|e| PoolError::Classification {
                subject: spec.subject_id,
                phrase: phrase.clone(),
                source: Box::new(e),
            })?;
            let rel = match rel {
                CanonicalRelation::Rotation(a) => CanonicalRelation::Rotation(spec.angle_deg.unwrap_or(a)),
                other => other,
            };
            spec.relation = Relation::Canonical(rel);
        }
    }
    Ok(out)
}

/// One placed asset per graph asset, scaled by its size class and untransformed.
pub fn scale_assets(
    graph: &SceneGraph,
    meshes: &HashMap<u32, Arc<Mesh>>,
    config: &PoolConfig,
) -> Result<Vec<PlacedAsset>, PoolError> {
    graph
        .assets
        .iter()
        .map(|a| {
            let mesh = meshes.get(&a.id).ok_or(PoolError::MissingMesh(a.id))?;
            Ok(PlacedAsset::new(a.id, Arc::clone(mesh), config.size_scale.get(a.size)))
        })
        .collect()
}

/// Box of the asset as if its translation were zero.
fn local_box(asset: &PlacedAsset) -> Aabb {
    compute_aabb(asset).translated(&-asset.translation)
}

/// Translation that puts `child` in the tangency position for `rel`.
fn tangent_translation(child: &PlacedAsset, p: &Aabb, rel: CanonicalRelation, config: &PoolConfig) -> Vec3 {
    use CanonicalRelation::*;
    let b = local_box(child);
    let c = b.center();
    let pc = p.center();
    let share_x = pc.x - c.x;
    let share_y = pc.y - c.y;
    let ground = -b.min.z;
    let (x, y, z) = match rel {
        On => (share_x, share_y, p.max.z - b.min.z),
        Under => (share_x, share_y, p.min.z - b.max.z),
        Left | LeaningOn => (p.min.x - b.max.x, share_y, ground),
        Right => (p.max.x - b.min.x, share_y, ground),
        Front | Facing => (share_x, p.min.y - b.max.y, ground),
        Behind => (share_x, p.max.y - b.min.y, ground),
        Far | Near => return gap_translation(child, p, Side::NegX, relation_gap(&b, p, rel, config)),
        CenterAligned => (share_x, share_y, ground),
        Rotation(_) => return child.translation,
    };
    Vec3::new(x, y, z)
}

/// Translation that leaves `gap` between the child and the given side of `p`,
/// centred on that side and resting on the ground.
fn gap_translation(child: &PlacedAsset, p: &Aabb, side: Side, gap: f64) -> Vec3 {
    let b = local_box(child);
    let (c, pc) = (b.center(), p.center());
    let (x, y) = match side {
        Side::PosX => (p.max.x + gap - b.min.x, pc.y - c.y),
        Side::NegY => (pc.x - c.x, p.min.y - gap - b.max.y),
        Side::PosY => (pc.x - c.x, p.max.y + gap - b.min.y),
        _ => (p.min.x - gap - b.max.x, pc.y - c.y),
    };
    Vec3::new(x, y, -b.min.z)
}

/// Gap between facing faces that `rel` asks for.
pub(crate) fn relation_gap(child: &Aabb, parent: &Aabb, rel: CanonicalRelation, config: &PoolConfig) -> f64 {
    let factor = match rel {
        CanonicalRelation::Far => config.far_gap,
        CanonicalRelation::Near => config.near_gap,
        _ => return 0.0,
    };
    factor * (child.extents().max() + parent.extents().max())
}

/// New transform for `child` realizing `rel` against `parent`.
pub fn apply_relation(
    child: &PlacedAsset,
    parent: &PlacedAsset,
    rel: CanonicalRelation,
    config: &PoolConfig,
) -> PlacedAsset {
    let p = compute_aabb(parent);
    let mut c = child.clone();
    match rel {
        CanonicalRelation::Rotation(theta) => {
            c.yaw_deg += theta;
        }
        CanonicalRelation::LeaningOn => {
            c.translation = tangent_translation(&c, &p, rel, config);
            let toward = p.center() - compute_aabb(&c).center();
            let toward = Vec3::new(toward.x, toward.y, 0.0);
            let axis = Vec3::z().cross(&toward);
            if axis.norm() > 0.0 {
                let axis = axis.normalize();
                c.tilt = Some(Tilt { axis: [axis.x, axis.y, axis.z], deg: config.lean_tilt_deg });
            }
            c.translation = tangent_translation(&c, &p, rel, config);
        }
        CanonicalRelation::Facing => {
            c.translation = tangent_translation(&c, &p, rel, config);
            let d = p.center() - compute_aabb(&c).center();
            if d.x != 0.0 || d.y != 0.0 {
                c.yaw_deg = (-d.x).atan2(d.y).to_degrees();
            }
            c.translation = tangent_translation(&c, &p, rel, config);
        }
        _ => c.translation = tangent_translation(&c, &p, rel, config),
    }
    c
}

/// Region of the target an asset ends up in. Assets that land in the same
/// region of the same target are spread along one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    NegX,
    PosX,
    NegY,
    PosY,
    Top,
    Bottom,
    Centre,
}

impl Side {
    fn of(rel: CanonicalRelation) -> Side {
        use CanonicalRelation::*;
        match rel {
            Left | LeaningOn | Far | Near => Side::NegX,
            Right => Side::PosX,
            Front | Facing => Side::NegY,
            Behind => Side::PosY,
            On => Side::Top,
            Under => Side::Bottom,
            CenterAligned | Rotation(_) => Side::Centre,
        }
    }

    /// Horizontal axis of the row.
    fn stagger_axis(self) -> usize {
        match self {
            Side::NegX | Side::PosX => 1,
            _ => 0,
        }
    }
}

/// Sides tried in order for a near asset; staggering it along a taken side
/// would carry it out of range.
const NEAR_SIDES: [Side; 4] = [Side::NegX, Side::PosX, Side::NegY, Side::PosY];

/// Places the core at the origin resting on the ground, then every other
/// asset in extraction order against its target.
///
/// Targets that are not yet placed fall back to the core. Assets that share
/// a target and a side of it are spread along that side. A near asset takes
/// the first free side of its target.
pub fn coarse_place(
    graph: Arc<SceneGraph>,
    placed: Vec<PlacedAsset>,
    config: &PoolConfig,
) -> Result<Layout, PoolError> {
    let core_id = graph.core_id();
    let mut by_id: BTreeMap<u32, PlacedAsset> = placed.into_iter().map(|a| (a.spec_id, a)).collect();
    for a in &graph.assets {
        if !by_id.contains_key(&a.id) {
            return Err(PoolError::MissingMesh(a.id));
        }
    }
    let core = by_id.get_mut(&core_id).expect("checked above");
    let b = local_box(core);
    // subtracting from 0.0 keeps negative zeros out of the output
    core.translation = Vec3::new(0.0 - b.center().x, 0.0 - b.center().y, 0.0 - b.min.z);

    let mut done = vec![core_id];
    // (target, side) -> (offset, extent) of the last asset placed there
    let mut stagger: HashMap<(u32, Side), (f64, f64)> = HashMap::new();
    for spec in &graph.assets {
        if spec.id == core_id {
            continue;
        }
        let rs = graph.relation_of(spec.id).ok_or_else(|| PoolError::NotCanonical {
            subject: spec.id,
            phrase: "<missing>".into(),
        })?;
        let rel = rs.relation.canonical().ok_or_else(|| PoolError::NotCanonical {
            subject: spec.id,
            phrase: rs.relation.text().to_string(),
        })?;
        let target = if done.contains(&rs.target_id) { rs.target_id } else { core_id };
        let mut child = apply_relation(&by_id[&spec.id], &by_id[&target], rel, config);
        let mut side = Side::of(rel);
        if rel == CanonicalRelation::Near {
            side = NEAR_SIDES.into_iter().find(|s| !stagger.contains_key(&(target, *s))).unwrap_or(Side::NegX);
            let p = compute_aabb(&by_id[&target]);
            let gap = relation_gap(&local_box(&child), &p, rel, config);
            child.translation = gap_translation(&child, &p, side, gap);
        }

        let axis = side.stagger_axis();
        let extent = compute_aabb(&child).extents()[axis];
        let key = (target, side);
        let offset = match stagger.get(&key) {
            Some(&(prev_off, prev_ext)) => prev_off + (prev_ext + extent) / 2.0 + config.margin,
            None => 0.0,
        };
        stagger.insert(key, (offset, extent));
        child.translation[axis] += offset;

        by_id.insert(spec.id, child);
        done.push(spec.id);
    }
    Ok(Layout { assets: by_id.into_values().collect(), graph, provenance: Provenance::Coarse })
}
