//! Sparse boundary point sets for the contact magnet.
//!
//! Input meshes are closed, so their own vertices already sit on the boundary.
//! The cloud is those vertices after two passes: near-duplicate merging, then
//! one centroid per occupied grid cell. Both passes are independent of input
//! vertex order, bit for bit.

use std::collections::{BTreeMap, HashMap};

use crate::assets::PlacedAsset;
use crate::math::{Point, Vec3};

pub const DEFAULT_CELL_SIZE: f64 = 0.05;
pub const DEFAULT_MERGE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourCloud {
    pub points: Vec<Point>,
    /// Vertex count of the mesh the cloud was taken from.
    pub source_count: usize,
}

impl ContourCloud {
    pub fn translated(&self, by: &Vec3) -> ContourCloud {
        ContourCloud {
            points: self.points.iter().map(|p| p + by).collect(),
            source_count: self.source_count,
        }
    }
}

pub fn extract_contour(asset: &PlacedAsset, cell_size: f64, merge_eps: f64) -> ContourCloud {
    assert!(cell_size > 0.0, "cell_size must be positive");
    let world: Vec<Point> = asset.world_vertices().collect();
    let source_count = world.len();
    let merged = merge_vertices(world, merge_eps.max(0.0));
    ContourCloud { points: grid_cluster(&merged, cell_size), source_count }
}

fn key_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.z.total_cmp(&b.z))
}

/// Single-linkage merge of vertices closer than `eps`; each group is replaced
/// by its lexicographically smallest member.
fn merge_vertices(points: Vec<Point>, eps: f64) -> Vec<Point> {
    // +0.0 folds -0.0 into 0.0 so equal coordinates sort together
    let mut pts: Vec<Point> = points.into_iter().map(|p| Point::from(p.coords.add_scalar(0.0))).collect();
    pts.sort_by(key_cmp);
    pts.dedup();
    if eps == 0.0 || pts.len() < 2 {
        return pts;
    }
    let cell = |p: &Point| -> [i64; 3] {
        [(p.x / eps).floor() as i64, (p.y / eps).floor() as i64, (p.z / eps).floor() as i64]
    };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let eps2 = eps * eps;
    for (i, p) in pts.iter().enumerate() {
        let c = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) else { continue };
                    for &j in bucket {
                        if j > i && (pts[j] - p).norm_squared() <= eps2 {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            // roots are always the smallest index, i.e. the smallest point
                            if ri != rj {
                                parent[ri.max(rj)] = ri.min(rj);
                            }
                        }
                    }
                }
            }
        }
    }
    (0..pts.len())
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| pts[i])
        .collect()
}

/// One centroid per occupied cell of side `cell_size`, ordered by cell.
fn grid_cluster(points: &[Point], cell_size: f64) -> Vec<Point> {
    let mut cells: BTreeMap<[i64; 3], Vec<Point>> = BTreeMap::new();
    for p in points {
        let key = [
            (p.x / cell_size).floor() as i64,
            (p.y / cell_size).floor() as i64,
            (p.z / cell_size).floor() as i64,
        ];
        cells.entry(key).or_default().push(*p);
    }
    cells
        .into_values()
        .map(|mut members| {
            members.sort_by(key_cmp);
            let sum = members.iter().fold(Vec3::zeros(), |acc, p| acc + p.coords);
            Point::from(sum / members.len() as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets::{make_primitive, Mesh, PrimitiveKind};
    use std::sync::Arc;

    fn asset(mesh: Mesh) -> PlacedAsset {
        PlacedAsset::new(1, Arc::new(mesh), 1.0)
    }

    #[test]
    fn big_cell_gives_centroid() {
        let cube = make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap();
        let mut a = asset(cube);
        // keep the cube inside one cell of side 10
        a.translation = Vec3::new(5.0, 5.0, 5.0);
        let c = extract_contour(&a, 10.0, 0.0);
        assert_eq!(c.points, vec![Point::new(5.0, 5.0, 5.0)]);
        assert_eq!(c.source_count, 8);
    }

    #[test]
    fn small_cells_keep_everything() {
        let cube = make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap();
        let c = extract_contour(&asset(cube), 0.1, 0.0);
        assert_eq!(c.points.len(), 8);
    }

    #[test]
    fn coincident_vertices_merge() {
        let verts = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ];
        let m = Mesh::new("m", verts, vec![[0, 2, 3], [1, 2, 3]]).unwrap();
        let c = extract_contour(&asset(m), 0.01, 1e-6);
        assert!(c.points.len() <= 3);
    }

    #[test]
    fn merge_is_transitive_and_order_free() {
        let a = vec![Point::new(0.0, 0.0, 0.0), Point::new(0.6, 0.0, 0.0), Point::new(1.2, 0.0, 0.0)];
        let mut b = a.clone();
        b.reverse();
        assert_eq!(merge_vertices(a.clone(), 0.7), vec![Point::new(0.0, 0.0, 0.0)]);
        assert_eq!(merge_vertices(a, 0.7), merge_vertices(b, 0.7));
    }
}
