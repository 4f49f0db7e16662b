//! Procedural stand-ins for generated assets. Every mesh here is watertight:
//! composites are unions of disjoint closed parts.

use std::f64::consts::PI;

use super::{normalize_mesh, AssetError, Mesh};
use crate::math::{Point, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub enum PrimitiveKind {
    /// Full extents along x, y, z.
    Box { x: f64, y: f64, z: f64 },
    /// Axis along z.
    Cylinder { radius: f64, height: f64, segments: u32 },
    /// UV sphere with `segments` longitudes and `segments / 2` latitude bands.
    Sphere { radius: f64, segments: u32 },
    /// A named multi-part object, see [`composite_names`].
    Composite(String),
}

/// Builds a primitive centred at the origin.
pub fn make_primitive(kind: &PrimitiveKind) -> Result<Mesh, AssetError> {
    match kind {
        PrimitiveKind::Box { x, y, z } => {
            positive(&[*x, *y, *z])?;
            let mut b = Builder::default();
            b.cuboid(Vec3::zeros(), Vec3::new(*x, *y, *z));
            b.finish("box")
        }
        PrimitiveKind::Cylinder { radius, height, segments } => {
            positive(&[*radius, *height])?;
            segments_ok(*segments)?;
            let mut b = Builder::default();
            b.cylinder(Vec3::zeros(), *radius, *height, *segments);
            b.finish("cylinder")
        }
        PrimitiveKind::Sphere { radius, segments } => {
            positive(&[*radius])?;
            segments_ok(*segments)?;
            let mut b = Builder::default();
            b.sphere(Vec3::zeros(), *radius, *segments);
            b.finish("sphere")
        }
        PrimitiveKind::Composite(name) => composite(name),
    }
}

fn positive(dims: &[f64]) -> Result<(), AssetError> {
    match dims.iter().find(|d| !d.is_finite() || **d <= 0.0) {
        Some(d) => Err(AssetError::NonPositiveDimension(*d)),
        None => Ok(()),
    }
}

fn segments_ok(segments: u32) -> Result<(), AssetError> {
    if segments < 8 {
        Err(AssetError::TooFewSegments(segments))
    } else {
        Ok(())
    }
}

pub fn composite_names() -> &'static [&'static str] {
    &["chair", "table", "tree", "bird", "bicycle", "lamp", "sofa", "bench"]
}

fn composite(name: &str) -> Result<Mesh, AssetError> {
    let mut b = Builder::default();
    match name {
        "chair" => {
            // seat, four legs and a backrest on the +y edge
            b.cuboid(Vec3::new(0.0, 0.0, 0.475), Vec3::new(1.0, 1.0, 0.05));
            for (x, y) in [(-0.45, -0.45), (0.45, -0.45), (-0.45, 0.45), (0.45, 0.45)] {
                b.cuboid(Vec3::new(x, y, 0.225), Vec3::new(0.08, 0.08, 0.45));
            }
            b.cuboid(Vec3::new(0.0, 0.46, 0.75), Vec3::new(1.0, 0.08, 0.49));
        }
        "table" => {
            b.cuboid(Vec3::new(0.0, 0.0, 0.7), Vec3::new(1.6, 1.0, 0.06));
            for (x, y) in [(-0.72, -0.42), (0.72, -0.42), (-0.72, 0.42), (0.72, 0.42)] {
                b.cuboid(Vec3::new(x, y, 0.335), Vec3::new(0.08, 0.08, 0.67));
            }
        }
        "tree" => {
            b.cylinder(Vec3::new(0.0, 0.0, 0.5), 0.1, 1.0, 12);
            b.sphere(Vec3::new(0.0, 0.0, 1.5), 0.6, 16);
        }
        "bird" => {
            b.sphere(Vec3::new(0.0, 0.0, 0.3), 0.3, 16);
            b.sphere(Vec3::new(0.0, 0.38, 0.62), 0.15, 12);
        }
        "bicycle" => {
            b.cylinder_x(Vec3::new(0.0, -0.6, 0.35), 0.35, 0.05, 16);
            b.cylinder_x(Vec3::new(0.0, 0.6, 0.35), 0.35, 0.05, 16);
            b.cuboid(Vec3::new(0.0, 0.0, 0.6), Vec3::new(0.05, 1.0, 0.05));
            b.cuboid(Vec3::new(0.0, -0.1, 0.8), Vec3::new(0.2, 0.25, 0.05));
        }
        "lamp" => {
            b.cylinder(Vec3::new(0.0, 0.0, 0.025), 0.25, 0.05, 16);
            b.cylinder(Vec3::new(0.0, 0.0, 0.6), 0.03, 1.1, 8);
            b.cylinder(Vec3::new(0.0, 0.0, 1.3), 0.3, 0.3, 16);
        }
        "sofa" => {
            b.cuboid(Vec3::new(0.0, 0.0, 0.22), Vec3::new(2.0, 0.9, 0.44));
            b.cuboid(Vec3::new(0.0, 0.38, 0.66), Vec3::new(2.0, 0.14, 0.44));
            b.cuboid(Vec3::new(-0.93, -0.07, 0.56), Vec3::new(0.14, 0.76, 0.24));
            b.cuboid(Vec3::new(0.93, -0.07, 0.56), Vec3::new(0.14, 0.76, 0.24));
        }
        "bench" => {
            b.cuboid(Vec3::new(0.0, 0.0, 0.42), Vec3::new(1.8, 0.45, 0.06));
            b.cuboid(Vec3::new(-0.8, 0.0, 0.195), Vec3::new(0.08, 0.4, 0.39));
            b.cuboid(Vec3::new(0.8, 0.0, 0.195), Vec3::new(0.08, 0.4, 0.39));
        }
        other => return Err(AssetError::Unsupported(format!("unknown composite '{other}'"))),
    }
    let mut mesh = b.finish(name)?;
    // centre the composite like the simple primitives
    let c = mesh.bounds().center().coords;
    for v in &mut mesh.vertices {
        v.coords -= c;
    }
    Ok(mesh)
}

/// Normalized offline mesh for an asset name: a composite when one exists,
/// a few shape-like names map to simple primitives, anything else is a box.
pub fn primitive_for_name(name: &str) -> Mesh {
    let key = super::normalize_name(name);
    let last = key.rsplit(' ').next().unwrap_or(&key).to_string();
    let kind = if composite_names().contains(&last.as_str()) {
        PrimitiveKind::Composite(last.clone())
    } else {
        match last.as_str() {
            "ball" | "globe" | "orange" | "apple" | "sphere" => {
                PrimitiveKind::Sphere { radius: 0.5, segments: 16 }
            }
            "cup" | "vase" | "barrel" | "can" | "pillar" | "cylinder" | "bottle" => {
                PrimitiveKind::Cylinder { radius: 0.3, height: 1.0, segments: 16 }
            }
            _ => PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 },
        }
    };
    let mesh = make_primitive(&kind).expect("built-in primitive parameters are valid");
    let mut mesh = normalize_mesh(&mesh).expect("built-in primitives have extent");
    mesh.name = name.to_string();
    mesh.base_color = name_color(&key);
    mesh
}

fn name_color(key: &str) -> [f32; 4] {
    // FNV-1a, only used to vary colors between names
    let mut h: u32 = 0x811c_9dc5;
    for b in key.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    let c = |s: u32| 0.3 + 0.6 * ((h >> s) & 0xff) as f32 / 255.0;
    [c(0), c(8), c(16), 1.0]
}

#[derive(Default)]
struct Builder {
    vertices: Vec<Point>,
    triangles: Vec<[u32; 3]>,
}

impl Builder {
    fn push(&mut self, p: Vec3) -> u32 {
        self.vertices.push(Point::from(p));
        (self.vertices.len() - 1) as u32
    }

    fn cuboid(&mut self, center: Vec3, size: Vec3) {
        let h = size / 2.0;
        let base = self.vertices.len() as u32;
        for i in 0..8u32 {
            let sx = if i & 4 != 0 { 1.0 } else { -1.0 };
            let sy = if i & 2 != 0 { 1.0 } else { -1.0 };
            let sz = if i & 1 != 0 { 1.0 } else { -1.0 };
            self.push(center + Vec3::new(sx * h.x, sy * h.y, sz * h.z));
        }
        // outward-facing quads, corner index bits are (x, y, z)
        let quads = [
            [0, 1, 3, 2], // -x
            [4, 6, 7, 5], // +x
            [0, 4, 5, 1], // -y
            [2, 3, 7, 6], // +y
            [0, 2, 6, 4], // -z
            [1, 5, 7, 3], // +z
        ];
        for q in quads {
            self.triangles.push([base + q[0], base + q[1], base + q[2]]);
            self.triangles.push([base + q[0], base + q[2], base + q[3]]);
        }
    }

    fn cylinder(&mut self, center: Vec3, radius: f64, height: f64, segments: u32) {
        self.cylinder_along(center, radius, height, segments, Vec3::new);
    }

    fn cylinder_x(&mut self, center: Vec3, radius: f64, length: f64, segments: u32) {
        self.cylinder_along(center, radius, length, segments, |u, v, w| Vec3::new(w, u, v));
    }

    fn cylinder_along(
        &mut self,
        center: Vec3,
        radius: f64,
        height: f64,
        segments: u32,
        axes: impl Fn(f64, f64, f64) -> Vec3,
    ) {
        let h = height / 2.0;
        let bottom = self.push(center + axes(0.0, 0.0, -h));
        let top = self.push(center + axes(0.0, 0.0, h));
        let ring = self.vertices.len() as u32;
        for i in 0..segments {
            let a = 2.0 * PI * i as f64 / segments as f64;
            let (s, c) = a.sin_cos();
            self.push(center + axes(radius * c, radius * s, -h));
            self.push(center + axes(radius * c, radius * s, h));
        }
        for i in 0..segments {
            let j = (i + 1) % segments;
            let (b0, t0) = (ring + 2 * i, ring + 2 * i + 1);
            let (b1, t1) = (ring + 2 * j, ring + 2 * j + 1);
            self.triangles.push([b0, b1, t1]);
            self.triangles.push([b0, t1, t0]);
            self.triangles.push([bottom, b1, b0]);
            self.triangles.push([top, t0, t1]);
        }
    }

    fn sphere(&mut self, center: Vec3, radius: f64, segments: u32) {
        let stacks = (segments / 2).max(2);
        let south = self.push(center + Vec3::new(0.0, 0.0, -radius));
        let north = self.push(center + Vec3::new(0.0, 0.0, radius));
        let first = self.vertices.len() as u32;
        for k in 1..stacks {
            let polar = PI * k as f64 / stacks as f64;
            let (sp, cp) = polar.sin_cos();
            for i in 0..segments {
                let a = 2.0 * PI * i as f64 / segments as f64;
                let (s, c) = a.sin_cos();
                self.push(center + Vec3::new(radius * sp * c, radius * sp * s, -radius * cp));
            }
        }
        let idx = |k: u32, i: u32| first + (k - 1) * segments + (i % segments);
        for i in 0..segments {
            self.triangles.push([south, idx(1, i + 1), idx(1, i)]);
            self.triangles.push([north, idx(stacks - 1, i), idx(stacks - 1, i + 1)]);
        }
        for k in 1..stacks - 1 {
            for i in 0..segments {
                let (a, b) = (idx(k, i), idx(k, i + 1));
                let (c, d) = (idx(k + 1, i), idx(k + 1, i + 1));
                self.triangles.push([a, b, d]);
                self.triangles.push([a, d, c]);
            }
        }
    }

    fn finish(self, name: &str) -> Result<Mesh, AssetError> {
        Mesh::new(name, self.vertices, self.triangles)
    }
}
