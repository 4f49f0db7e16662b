//! Triangle meshes, their placement in the world and the on-disk asset cache.

mod cache;
mod glb;
mod primitives;

use std::sync::Arc;

use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use crate::math::{axis_rotation, yaw_rotation, Point, Vec3};

pub use cache::{normalize_name, AssetCache};
pub use glb::{export_glb, load_glb, load_glb_scene, GlbNode};
pub use primitives::{make_primitive, primitive_for_name, PrimitiveKind};

#[derive(Debug, thiserror::Error)]
pub enum AssetError {
    #[error("mesh has no vertices")]
    Empty,
    #[error("triangle {triangle} references vertex {index} but the mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, index: u32, count: usize },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("mesh has zero extent on every axis")]
    ZeroExtent,
    #[error("dimension must be positive, got {0}")]
    NonPositiveDimension(f64),
    #[error("tessellation needs at least 8 segments, got {0}")]
    TooFewSegments(u32),
    #[error("malformed glb: {0}")]
    Malformed(String),
    #[error("glb has no triangle primitives")]
    NoTriangles,
    #[error("unsupported glb feature: {0}")]
    Unsupported(String),
    #[error("nothing to export")]
    NothingToExport,
    #[error("asset i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// A triangle mesh in its local frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub name: String,
    pub vertices: Vec<Point>,
    pub triangles: Vec<[u32; 3]>,
    /// Flat RGBA base color, carried through glb import/export.
    pub base_color: [f32; 4],
}

pub const DEFAULT_COLOR: [f32; 4] = [0.7, 0.7, 0.7, 1.0];

impl Mesh {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Point>,
        triangles: Vec<[u32; 3]>,
    ) -> Result<Self, AssetError> {
        let mesh = Mesh {
            name: name.into(),
            vertices,
            triangles,
            base_color: DEFAULT_COLOR,
        };
        mesh.check()?;
        Ok(mesh)
    }

    pub fn with_color(mut self, color: [f32; 4]) -> Self {
        self.base_color = color;
        self
    }

    fn check(&self) -> Result<(), AssetError> {
        if self.vertices.is_empty() {
            return Err(AssetError::Empty);
        }
        if let Some(i) = self
            .vertices
            .iter()
            .position(|v| !v.coords.iter().all(|c| c.is_finite()))
        {
            return Err(AssetError::NonFinite(i));
        }
        let count = self.vertices.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &index in tri {
                if index as usize >= count {
                    return Err(AssetError::IndexOutOfRange { triangle: t, index, count });
                }
            }
        }
        Ok(())
    }

    /// Local-frame bounding box.
    pub fn bounds(&self) -> crate::geometry::Aabb {
        crate::geometry::Aabb::from_points(self.vertices.iter().copied())
            .expect("mesh has at least one vertex")
    }
}

/// Rescales a mesh so its largest extent is 1, its footprint is centred on the
/// vertical axis and it rests on `z = 0`.
pub fn normalize_mesh(mesh: &Mesh) -> Result<Mesh, AssetError> {
    let bounds = mesh.bounds();
    let extent = bounds.extents().max();
    if extent.is_nan() || extent <= 0.0 {
        return Err(AssetError::ZeroExtent);
    }
    let center = bounds.center();
    let anchor = Vec3::new(center.x, center.y, bounds.min.z);
    let vertices = mesh
        .vertices
        .iter()
        .map(|v| Point::from((v.coords - anchor) / extent))
        .collect();
    Ok(Mesh {
        name: mesh.name.clone(),
        vertices,
        triangles: mesh.triangles.clone(),
        base_color: mesh.base_color,
    })
}

/// Lean applied on top of the yaw, about a world-frame axis through the
/// asset's local origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tilt {
    pub axis: [f64; 3],
    pub deg: f64,
}

/// A mesh with a uniform scale, a yaw (plus optional tilt) and a translation.
///
/// World position of a local vertex `v` is `translation + R_tilt * R_yaw * (scale * v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedAsset {
    pub spec_id: u32,
    pub mesh: Arc<Mesh>,
    pub scale: f64,
    pub yaw_deg: f64,
    pub tilt: Option<Tilt>,
    pub translation: Vec3,
}

impl PlacedAsset {
    pub fn new(spec_id: u32, mesh: Arc<Mesh>, scale: f64) -> Self {
        PlacedAsset {
            spec_id,
            mesh,
            scale,
            yaw_deg: 0.0,
            tilt: None,
            translation: Vec3::zeros(),
        }
    }

    pub fn rotation(&self) -> Rotation3<f64> {
        let yaw = yaw_rotation(self.yaw_deg);
        match &self.tilt {
            Some(t) => axis_rotation(&Vec3::from(t.axis), t.deg) * yaw,
            None => yaw,
        }
    }

    pub fn world_vertices(&self) -> impl Iterator<Item = Point> + '_ {
        let rot = self.rotation();
        self.mesh
            .vertices
            .iter()
            .map(move |v| Point::from(rot * (v.coords * self.scale) + self.translation))
    }

    /// Local +y axis expressed in world coordinates.
    pub fn forward(&self) -> Vec3 {
        self.rotation() * Vec3::y()
    }

    pub fn is_valid(&self) -> bool {
        self.scale > 0.0
            && self.scale.is_finite()
            && self.yaw_deg.is_finite()
            && crate::math::is_finite(&self.translation)
            && self.tilt.is_none_or(|t| t.deg.is_finite() && t.axis.iter().all(|c| c.is_finite()))
            && self.world_vertices().all(|p| p.coords.iter().all(|c| c.is_finite()))
    }
}
