use crate::assets::PlacedAsset;
use crate::math::{Point, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Self {
        debug_assert!((0..3).all(|k| min[k] <= max[k]), "inverted aabb {min:?} {max:?}");
        Aabb { min, max }
    }

    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let (min, max) = it.fold((first, first), |(lo, hi), p| (lo.inf(&p), hi.sup(&p)));
        Some(Aabb { min, max })
    }

    pub fn extents(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn center(&self) -> Point {
        nalgebra::center(&self.min, &self.max)
    }

    pub fn translated(&self, by: &Vec3) -> Self {
        Aabb { min: self.min + by, max: self.max + by }
    }

    pub fn union(&self, other: &Aabb) -> Self {
        Aabb { min: self.min.inf(&other.min), max: self.max.sup(&other.max) }
    }

    pub fn is_finite(&self) -> bool {
        self.min.coords.iter().chain(self.max.coords.iter()).all(|c| c.is_finite())
    }

    /// Euclidean gap between the two boxes projected onto the ground plane.
    pub fn horizontal_gap(&self, other: &Aabb) -> f64 {
        let dx = (other.min.x - self.max.x).max(self.min.x - other.max.x).max(0.0);
        let dy = (other.min.y - self.max.y).max(self.min.y - other.max.y).max(0.0);
        dx.hypot(dy)
    }
}

/// Tight world-space box of every transformed vertex.
pub fn compute_aabb(asset: &PlacedAsset) -> Aabb {
    Aabb::from_points(asset.world_vertices()).expect("meshes have at least one vertex")
}

/// Smallest translation along a single axis that separates the boxes; zero
/// when they are disjoint or only touch.
pub fn penetration_depth(a: &Aabb, b: &Aabb) -> f64 {
    separating_axis(a, b).map_or(0.0, |(_, depth, _)| depth)
}

/// The axis, depth and sign (+1 moves `a` toward +axis) of the minimal
/// separating translation of `a` away from `b`, if the interiors overlap.
pub fn separating_axis(a: &Aabb, b: &Aabb) -> Option<(usize, f64, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    for k in 0..3 {
        let push_pos = b.max[k] - a.min[k];
        let push_neg = a.max[k] - b.min[k];
        if push_pos <= 0.0 || push_neg <= 0.0 {
            return None;
        }
        let (depth, sign) = if push_neg < push_pos { (push_neg, -1.0) } else { (push_pos, 1.0) };
        if best.is_none_or(|(_, d, _)| depth < d) {
            best = Some((k, depth, sign));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets::{make_primitive, normalize_mesh, PrimitiveKind};
    use std::sync::Arc;

    fn cube_box(lo: f64, hi: f64) -> Aabb {
        Aabb::new(Point::new(lo, lo, lo), Point::new(hi, hi, hi))
    }

    fn unit_cube() -> Arc<crate::assets::Mesh> {
        let m = make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap();
        Arc::new(normalize_mesh(&m).unwrap())
    }

    #[test]
    fn translated_unit_cube() {
        let mut a = PlacedAsset::new(1, unit_cube(), 1.0);
        a.translation = Vec3::new(2.0, 0.0, 0.0);
        let b = compute_aabb(&a);
        assert_eq!(b.min, Point::new(1.5, -0.5, 0.0));
        assert_eq!(b.max, Point::new(2.5, 0.5, 1.0));
    }

    #[test]
    fn identity_is_local_bounds() {
        let a = PlacedAsset::new(1, unit_cube(), 1.0);
        assert_eq!(compute_aabb(&a), a.mesh.bounds());
    }

    #[test]
    fn scale_two_doubles_extent() {
        let a = PlacedAsset::new(1, unit_cube(), 2.0);
        assert_eq!(compute_aabb(&a).extents(), Vec3::repeat(2.0));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(penetration_depth(&cube_box(0.0, 2.0), &cube_box(1.0, 3.0)), 1.0);
        assert_eq!(penetration_depth(&cube_box(0.0, 1.0), &cube_box(1.0, 2.0)), 0.0);
        assert_eq!(penetration_depth(&cube_box(0.0, 1.0), &cube_box(5.0, 6.0)), 0.0);
    }

    #[test]
    fn containment_uses_escape_distance() {
        let outer = cube_box(0.0, 10.0);
        let inner = Aabb::new(Point::new(1.0, 4.0, 4.0), Point::new(2.0, 6.0, 6.0));
        // leaving through x = 0 needs 2 units
        assert_eq!(separating_axis(&inner, &outer), Some((0, 2.0, -1.0)));
    }

    #[test]
    fn horizontal_gap_diagonal() {
        let a = cube_box(0.0, 1.0);
        let b = a.translated(&Vec3::new(4.0, 5.0, 0.0));
        assert!((a.horizontal_gap(&b) - 5.0).abs() < 1e-12);
    }
}
