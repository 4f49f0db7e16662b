//! Bounding boxes, contour decimation, nearest vertex pairs and penetration depth.

mod aabb;
mod contour;
mod nearest;

pub use aabb::{compute_aabb, penetration_depth, separating_axis, Aabb};
pub use contour::{extract_contour, ContourCloud, DEFAULT_CELL_SIZE, DEFAULT_MERGE_EPS};
pub use nearest::{nearest_pair, nearest_pair_bruteforce, NearestPair};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("contour cloud is empty")]
    EmptyCloud,
}
