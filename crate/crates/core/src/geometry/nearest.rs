use super::{ContourCloud, GeometryError};
use crate::math::{Point, Vec3};

/// Closest pair of points between two clouds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestPair {
    pub index_a: usize,
    pub index_b: usize,
    pub point_a: Point,
    pub point_b: Point,
    pub distance: f64,
    /// Unit vector from `point_a` toward `point_b`, zero when they coincide.
    pub direction: Vec3,
}

impl NearestPair {
    fn new(a: &[Point], b: &[Point], index_a: usize, index_b: usize) -> Self {
        let (pa, pb) = (a[index_a], b[index_b]);
        let diff = pb - pa;
        let distance = dist2(&pa, &pb).sqrt();
        let direction = if distance > 0.0 { diff / distance } else { Vec3::zeros() };
        NearestPair { index_a, index_b, point_a: pa, point_b: pb, distance, direction }
    }

    /// `point_b - point_a`.
    pub fn offset(&self) -> Vec3 {
        self.point_b - self.point_a
    }
}

// Both search paths compare exactly this expression, which keeps them bit-identical.
#[inline]
fn dist2(p: &Point, q: &Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    dx * dx + dy * dy + dz * dz
}

/// Exhaustive scan; ties go to the lowest `(index_a, index_b)`.
pub fn nearest_pair_bruteforce(a: &ContourCloud, b: &ContourCloud) -> Result<NearestPair, GeometryError> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    let mut best = (f64::INFINITY, 0, 0);
    for (i, p) in a.points.iter().enumerate() {
        for (j, q) in b.points.iter().enumerate() {
            let d = dist2(p, q);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    Ok(NearestPair::new(&a.points, &b.points, best.1, best.2))
}

/// Kd-tree search over `b`, same result and tie-breaking as
/// [`nearest_pair_bruteforce`].
pub fn nearest_pair(a: &ContourCloud, b: &ContourCloud) -> Result<NearestPair, GeometryError> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    if a.points.len() * b.points.len() <= 64 {
        return nearest_pair_bruteforce(a, b);
    }
    let tree = KdTree::build(&b.points);
    let mut best = (f64::INFINITY, 0, 0);
    for (i, p) in a.points.iter().enumerate() {
        let mut local = (f64::INFINITY, usize::MAX);
        tree.query(0, p, &mut local, best.0);
        // strict: an equal distance from a later index_a never wins
        if local.1 != usize::MAX && local.0 < best.0 {
            best = (local.0, i, local.1);
        }
    }
    Ok(NearestPair::new(&a.points, &b.points, best.1, best.2))
}

const LEAF: usize = 8;

enum Node {
    Leaf { items: Vec<usize> },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

struct KdTree<'a> {
    points: &'a [Point],
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    fn build(points: &'a [Point]) -> Self {
        let mut tree = KdTree { points, nodes: Vec::new() };
        let items: Vec<usize> = (0..points.len()).collect();
        tree.build_node(items);
        tree
    }

    fn build_node(&mut self, mut items: Vec<usize>) -> usize {
        let slot = self.nodes.len();
        if items.len() <= LEAF {
            self.nodes.push(Node::Leaf { items });
            return slot;
        }
        let pts = self.points;
        let axis = (0..3)
            .max_by(|&x, &y| spread(pts, &items, x).total_cmp(&spread(pts, &items, y)))
            .unwrap_or(0);
        items.sort_by(|&i, &j| pts[i][axis].total_cmp(&pts[j][axis]).then(i.cmp(&j)));
        let mid = items.len() / 2;
        let value = pts[items[mid]][axis];
        let right_items = items.split_off(mid);
        self.nodes.push(Node::Leaf { items: Vec::new() });
        let left = self.build_node(items);
        let right = self.build_node(right_items);
        self.nodes[slot] = Node::Split { axis, value, left, right };
        slot
    }

    /// Lowest `(dist2, index)` within `bound` (inclusive, so ties on the
    /// bound are still visited).
    fn query(&self, node: usize, q: &Point, best: &mut (f64, usize), bound: f64) {
        match &self.nodes[node] {
            Node::Leaf { items } => {
                for &j in items {
                    let d = dist2(q, &self.points[j]);
                    if d <= bound && (d < best.0 || (d == best.0 && j < best.1)) {
                        *best = (d, j);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = q[*axis] - value;
                let (near, far) = if diff < 0.0 { (*left, *right) } else { (*right, *left) };
                self.query(near, q, best, bound);
                // left holds coordinates <= value, right holds >= value
                let plane = diff * diff;
                if plane <= best.0.min(bound) {
                    self.query(far, q, best, bound);
                }
            }
        }
    }
}

fn spread(points: &[Point], items: &[usize], axis: usize) -> f64 {
    let (lo, hi) = items.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
        (lo.min(points[i][axis]), hi.max(points[i][axis]))
    });
    hi - lo
}
