use super::{Layout, PoolConfig, PoolError, Provenance};
use crate::assets::PlacedAsset;
use crate::geometry::{compute_aabb, extract_contour, nearest_pair, penetration_depth, Aabb, ContourCloud};
use crate::math::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct MagnetStepResult {
    pub moved_asset: u32,
    pub displacement: Vec3,
    pub pre_distance: f64,
    pub post_distance: f64,
    pub contact: bool,
}

struct Target {
    contour: ContourCloud,
    aabb: Aabb,
}

fn contour_of(asset: &PlacedAsset, config: &PoolConfig) -> Result<ContourCloud, PoolError> {
    let c = extract_contour(asset, config.cell_size, config.merge_eps);
    if c.points.is_empty() {
        return Err(PoolError::DegenerateContour(asset.spec_id));
    }
    Ok(c)
}

/// One step on an already extracted child contour. The step is shortened
/// when the full move would push the child's box into the parent's deeper
/// than `allowed`, which happens for curved or concave shapes whose nearest
/// vertices are not on the facing box faces.
fn step(
    id: u32,
    contour: &ContourCloud,
    child_box: &Aabb,
    parent: &Target,
    allowed: f64,
    config: &PoolConfig,
) -> Result<MagnetStepResult, PoolError> {
    let pair = nearest_pair(contour, &parent.contour).map_err(|_| PoolError::DegenerateContour(id))?;
    let pre = pair.distance;
    if pre <= config.d_thresh {
        return Ok(MagnetStepResult {
            moved_asset: id,
            displacement: Vec3::zeros(),
            pre_distance: pre,
            post_distance: pre,
            contact: true,
        });
    }
    let full = pair.direction * (config.lambda * pre);
    let fits = |t: f64| penetration_depth(&child_box.translated(&(full * t)), &parent.aabb) <= allowed;
    let t = if fits(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let displacement = full * t;
    let post = if t == 0.0 {
        pre
    } else {
        nearest_pair(&contour.translated(&displacement), &parent.contour)
            .map_err(|_| PoolError::DegenerateContour(id))?
            .distance
            .min(pre)
    };
    Ok(MagnetStepResult {
        moved_asset: id,
        displacement,
        pre_distance: pre,
        post_distance: post,
        contact: post <= config.d_thresh,
    })
}

/// A single attraction step of `child` toward a fixed `parent`.
pub fn magnet_step(
    child: &PlacedAsset,
    parent: &PlacedAsset,
    config: &PoolConfig,
) -> Result<MagnetStepResult, PoolError> {
    let target = Target { contour: contour_of(parent, config)?, aabb: compute_aabb(parent) };
    let child_box = compute_aabb(child);
    let allowed = penetration_depth(&child_box, &target.aabb) + config.d_thresh;
    step(child.spec_id, &contour_of(child, config)?, &child_box, &target, allowed, config)
}

/// Whether the boxes overlap or are within `tol` of each other on every axis.
fn boxes_touch(a: &Aabb, b: &Aabb, tol: f64) -> bool {
    (0..3).all(|k| a.min[k] <= b.max[k] + tol && b.min[k] <= a.max[k] + tol)
}

/// Pulls every magnetic (child, target) pair into contact, in extraction
/// order, and returns the moved layout with the step log. Pairs whose boxes
/// already touch are left alone.
pub fn run_magnet(layout: &Layout, config: &PoolConfig) -> Result<(Layout, Vec<MagnetStepResult>), PoolError> {
    let mut out = layout.clone();
    let mut log = Vec::new();
    for id in layout.ids() {
        let Some((rel, target_id)) = out.relation_of(id) else { continue };
        if !rel.is_magnetic() || target_id == id {
            continue;
        }
        let Some(parent) = out.asset(target_id) else { continue };
        let target = Target { contour: contour_of(parent, config)?, aabb: compute_aabb(parent) };
        let child = out.asset(id).expect("id from layout");
        let mut contour = contour_of(child, config)?;
        let mut child_box = compute_aabb(child);
        let mut moved = Vec3::zeros();
        // the budget is fixed before the first step so it cannot creep up
        let allowed = penetration_depth(&child_box, &target.aabb) + config.d_thresh;
        for _ in 0..config.magnet_max_iters {
            // touching boxes cannot come closer within the budget; following
            // offset vertices of flush faces would only slide the child off
            if boxes_touch(&child_box, &target.aabb, config.d_thresh) {
                break;
            }
            let r = step(id, &contour, &child_box, &target, allowed, config)?;
            let done = r.contact || r.displacement == Vec3::zeros();
            contour = contour.translated(&r.displacement);
            child_box = child_box.translated(&r.displacement);
            moved += r.displacement;
            log.push(r);
            if done {
                break;
            }
        }
        out.asset_mut(id).expect("id from layout").translation += moved;
    }
    out.provenance = Provenance::Magnetized;
    Ok((out, log))
}
