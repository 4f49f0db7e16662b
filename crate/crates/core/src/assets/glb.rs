//! Binary glTF 2.0 reader and writer.
//!
//! glTF is Y-up while the engine is Z-up, so positions and node transforms are
//! rotated by -90 degrees about x on export and back on import.

use std::sync::Arc;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde_json::{json, Value};

use super::{AssetError, Mesh, PlacedAsset, DEFAULT_COLOR};
use crate::math::{Point, Vec3};
use crate::scene_io::GroundPlane;

const MAGIC: u32 = 0x4654_6C67;
const CHUNK_JSON: u32 = 0x4E4F_534A;
const CHUNK_BIN: u32 = 0x004E_4942;

const FLOAT: u64 = 5126;
const UNSIGNED_BYTE: u64 = 5121;
const UNSIGNED_SHORT: u64 = 5123;
const UNSIGNED_INT: u64 = 5125;
const MODE_TRIANGLES: u64 = 4;

fn to_gltf(v: Vec3) -> [f32; 3] {
    [v.x as f32, v.z as f32, (-v.y) as f32]
}

/// Node transforms are JSON numbers, so they keep full precision.
fn to_gltf_f64(v: Vec3) -> [f64; 3] {
    [v.x, v.z, 0.0 - v.y]
}

fn from_gltf(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], -v[2], v[1])
}

fn axis_swap() -> UnitQuaternion<f64> {
    UnitQuaternion::from_axis_angle(&Vector3::x_axis(), -std::f64::consts::FRAC_PI_2)
}

/// A node read back from a glb scene, in engine coordinates.
#[derive(Debug, Clone)]
pub struct GlbNode {
    pub name: String,
    pub mesh: Mesh,
    pub translation: Vec3,
    pub rotation: UnitQuaternion<f64>,
    pub scale: Vec3,
    pub extras: Value,
}

impl GlbNode {
    pub fn world_vertices(&self) -> Vec<Point> {
        self.mesh
            .vertices
            .iter()
            .map(|v| Point::from(self.rotation * v.coords.component_mul(&self.scale) + self.translation))
            .collect()
    }
}

#[derive(Default)]
struct Writer {
    bin: Vec<u8>,
    views: Vec<Value>,
    accessors: Vec<Value>,
    meshes: Vec<Value>,
    materials: Vec<Value>,
    nodes: Vec<Value>,
}

impl Writer {
    fn align(&mut self) {
        while !self.bin.len().is_multiple_of(4) {
            self.bin.push(0);
        }
    }

    fn add_mesh(&mut self, mesh: &Mesh) -> usize {
        self.align();
        let pos_offset = self.bin.len();
        let mut min = [f32::INFINITY; 3];
        let mut max = [f32::NEG_INFINITY; 3];
        for v in &mesh.vertices {
            let p = to_gltf(v.coords);
            for k in 0..3 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
                self.bin.extend_from_slice(&p[k].to_le_bytes());
            }
        }
        let pos_len = self.bin.len() - pos_offset;
        self.views.push(json!({"buffer": 0, "byteOffset": pos_offset, "byteLength": pos_len, "target": 34962}));
        self.accessors.push(json!({
            "bufferView": self.views.len() - 1, "componentType": FLOAT, "count": mesh.vertices.len(),
            "type": "VEC3", "min": min, "max": max
        }));
        let pos_accessor = self.accessors.len() - 1;

        let idx_offset = self.bin.len();
        for t in &mesh.triangles {
            for i in t {
                self.bin.extend_from_slice(&i.to_le_bytes());
            }
        }
        let idx_len = self.bin.len() - idx_offset;
        self.views.push(json!({"buffer": 0, "byteOffset": idx_offset, "byteLength": idx_len, "target": 34963}));
        self.accessors.push(json!({
            "bufferView": self.views.len() - 1, "componentType": UNSIGNED_INT,
            "count": mesh.triangles.len() * 3, "type": "SCALAR"
        }));
        let idx_accessor = self.accessors.len() - 1;

        self.materials.push(json!({
            "name": format!("{}_material", mesh.name),
            "pbrMetallicRoughness": {"baseColorFactor": mesh.base_color, "metallicFactor": 0.0, "roughnessFactor": 0.9}
        }));
        self.meshes.push(json!({
            "name": mesh.name,
            "primitives": [{
                "attributes": {"POSITION": pos_accessor},
                "indices": idx_accessor,
                "material": self.materials.len() - 1,
                "mode": MODE_TRIANGLES
            }]
        }));
        self.meshes.len() - 1
    }

    fn finish(self) -> Vec<u8> {
        let mut bin = self.bin;
        while !bin.len().is_multiple_of(4) {
            bin.push(0);
        }
        let doc = json!({
            "asset": {"version": "2.0", "generator": concat!("physlayout ", env!("CARGO_PKG_VERSION"))},
            "scene": 0,
            "scenes": [{"nodes": (0..self.nodes.len()).collect::<Vec<_>>()}],
            "nodes": self.nodes,
            "meshes": self.meshes,
            "materials": self.materials,
            "accessors": self.accessors,
            "bufferViews": self.views,
            "buffers": [{"byteLength": bin.len()}],
        });
        let mut json_bytes = serde_json::to_vec(&doc).expect("json serialization cannot fail");
        while !json_bytes.len().is_multiple_of(4) {
            json_bytes.push(b' ');
        }
        let total = 12 + 8 + json_bytes.len() + 8 + bin.len();
        let mut out = Vec::with_capacity(total);
        out.extend_from_slice(&MAGIC.to_le_bytes());
        out.extend_from_slice(&2u32.to_le_bytes());
        out.extend_from_slice(&(total as u32).to_le_bytes());
        out.extend_from_slice(&(json_bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&CHUNK_JSON.to_le_bytes());
        out.extend_from_slice(&json_bytes);
        out.extend_from_slice(&(bin.len() as u32).to_le_bytes());
        out.extend_from_slice(&CHUNK_BIN.to_le_bytes());
        out.extend_from_slice(&bin);
        out
    }
}

/// Writes one node per asset, plus a quad node for the ground when given.
pub fn export_glb(assets: &[PlacedAsset], ground: Option<&GroundPlane>) -> Result<Vec<u8>, AssetError> {
    if assets.is_empty() {
        return Err(AssetError::NothingToExport);
    }
    let swap = axis_swap();
    let mut w = Writer::default();
    for asset in assets {
        let mesh_index = w.add_mesh(&asset.mesh);
        let rot = UnitQuaternion::from_rotation_matrix(&asset.rotation());
        let q = swap * rot * swap.inverse();
        let t = to_gltf_f64(asset.translation);
        let mut node = json!({
            "name": asset.mesh.name,
            "mesh": mesh_index,
            "translation": t,
            "rotation": [q.i, q.j, q.k, q.w],
            "scale": [asset.scale, asset.scale, asset.scale],
            "extras": {"asset_id": asset.spec_id},
        });
        if let Some(tilt) = &asset.tilt {
            node["extras"]["tilt"] = json!({"axis": tilt.axis, "deg": tilt.deg});
            node["extras"]["yaw_deg"] = json!(asset.yaw_deg);
        }
        w.nodes.push(node);
    }
    if let Some(g) = ground {
        let e = g.extent;
        let verts = vec![
            Point::new(-e, -e, 0.0),
            Point::new(e, -e, 0.0),
            Point::new(e, e, 0.0),
            Point::new(-e, e, 0.0),
        ];
        let quad = Mesh::new(format!("ground_{}", g.kind.as_str()), verts, vec![[0, 1, 2], [0, 2, 3]])?
            .with_color(g.kind.color());
        let mesh_index = w.add_mesh(&quad);
        w.nodes.push(json!({
            "name": quad.name,
            "mesh": mesh_index,
            "translation": to_gltf_f64(Vec3::new(0.0, 0.0, g.height)),
            "extras": {"ground_kind": g.kind.as_str()},
        }));
    }
    Ok(w.finish())
}

struct Container<'a> {
    doc: Value,
    bin: &'a [u8],
}

fn malformed(msg: impl Into<String>) -> AssetError {
    AssetError::Malformed(msg.into())
}

fn read_u32(bytes: &[u8], at: usize) -> Result<u32, AssetError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| malformed(format!("truncated at byte {at}")))
}

fn parse_container(bytes: &[u8]) -> Result<Container<'_>, AssetError> {
    if read_u32(bytes, 0)? != MAGIC {
        return Err(malformed("bad magic"));
    }
    let version = read_u32(bytes, 4)?;
    if version != 2 {
        return Err(AssetError::Unsupported(format!("glTF container version {version}")));
    }
    let length = read_u32(bytes, 8)? as usize;
    if length > bytes.len() {
        return Err(malformed(format!("header declares {length} bytes, have {}", bytes.len())));
    }
    let bytes = &bytes[..length];
    let mut at = 12;
    let mut doc = None;
    let mut bin: &[u8] = &[];
    while at < bytes.len() {
        let len = read_u32(bytes, at)? as usize;
        let kind = read_u32(bytes, at + 4)?;
        let data = bytes
            .get(at + 8..at + 8 + len)
            .ok_or_else(|| malformed("chunk runs past end of container"))?;
        match kind {
            CHUNK_JSON => {
                doc = Some(serde_json::from_slice::<Value>(data).map_err(|e| malformed(format!("json chunk: {e}")))?)
            }
            CHUNK_BIN if bin.is_empty() => bin = data,
            _ => {}
        }
        at += 8 + len;
    }
    let doc = doc.ok_or_else(|| malformed("missing JSON chunk"))?;
    if let Some(req) = doc.get("extensionsRequired").and_then(Value::as_array) {
        if let Some(ext) = req.first() {
            return Err(AssetError::Unsupported(format!("required extension {ext}")));
        }
    }
    Ok(Container { doc, bin })
}

impl Container<'_> {
    fn get(&self, key: &str, index: u64) -> Result<&Value, AssetError> {
        self.doc
            .get(key)
            .and_then(|a| a.get(index as usize))
            .ok_or_else(|| malformed(format!("{key}[{index}] missing")))
    }

    fn accessor_bytes(&self, index: u64) -> Result<(&Value, &[u8], usize), AssetError> {
        let acc = self.get("accessors", index)?;
        if acc.get("sparse").is_some() {
            return Err(AssetError::Unsupported("sparse accessors".into()));
        }
        let view_index = acc
            .get("bufferView")
            .and_then(Value::as_u64)
            .ok_or_else(|| malformed(format!("accessor {index} has no bufferView")))?;
        let view = self.get("bufferViews", view_index)?;
        if view.get("buffer").and_then(Value::as_u64).unwrap_or(0) != 0 {
            return Err(AssetError::Unsupported("external buffers".into()));
        }
        let start = view.get("byteOffset").and_then(Value::as_u64).unwrap_or(0) as usize;
        let len = view
            .get("byteLength")
            .and_then(Value::as_u64)
            .ok_or_else(|| malformed("bufferView without byteLength"))? as usize;
        let data = self
            .bin
            .get(start..start + len)
            .ok_or_else(|| malformed(format!("bufferView {view_index} outside BIN chunk")))?;
        let offset = acc.get("byteOffset").and_then(Value::as_u64).unwrap_or(0) as usize;
        let stride = view.get("byteStride").and_then(Value::as_u64).unwrap_or(0) as usize;
        Ok((acc, data.get(offset..).ok_or_else(|| malformed("accessor offset"))?, stride))
    }

    fn positions(&self, index: u64) -> Result<Vec<Point>, AssetError> {
        let (acc, data, stride) = self.accessor_bytes(index)?;
        if acc.get("componentType").and_then(Value::as_u64) != Some(FLOAT)
            || acc.get("type").and_then(Value::as_str) != Some("VEC3")
        {
            return Err(AssetError::Unsupported("POSITION must be float VEC3".into()));
        }
        let count = acc.get("count").and_then(Value::as_u64).unwrap_or(0) as usize;
        let stride = if stride == 0 { 12 } else { stride };
        (0..count)
            .map(|i| {
                let base = i * stride;
                let mut c = [0f64; 3];
                for (k, slot) in c.iter_mut().enumerate() {
                    let b = data
                        .get(base + 4 * k..base + 4 * k + 4)
                        .ok_or_else(|| malformed("POSITION accessor overruns its view"))?;
                    *slot = f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64;
                }
                Ok(Point::from(from_gltf(c)))
            })
            .collect()
    }

    fn indices(&self, index: u64) -> Result<Vec<u32>, AssetError> {
        let (acc, data, stride) = self.accessor_bytes(index)?;
        let count = acc.get("count").and_then(Value::as_u64).unwrap_or(0) as usize;
        let size = match acc.get("componentType").and_then(Value::as_u64) {
            Some(UNSIGNED_BYTE) => 1,
            Some(UNSIGNED_SHORT) => 2,
            Some(UNSIGNED_INT) => 4,
            other => return Err(malformed(format!("index componentType {other:?}"))),
        };
        let stride = if stride == 0 { size } else { stride };
        (0..count)
            .map(|i| {
                let b = data
                    .get(i * stride..i * stride + size)
                    .ok_or_else(|| malformed("index accessor overruns its view"))?;
                Ok(match size {
                    1 => b[0] as u32,
                    2 => u16::from_le_bytes([b[0], b[1]]) as u32,
                    _ => u32::from_le_bytes([b[0], b[1], b[2], b[3]]),
                })
            })
            .collect()
    }

    /// Merges every triangle primitive of mesh `index` into one [`Mesh`].
    fn mesh(&self, index: u64) -> Result<Mesh, AssetError> {
        let m = self.get("meshes", index)?;
        let name = m.get("name").and_then(Value::as_str).unwrap_or("mesh").to_string();
        let prims = m
            .get("primitives")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(format!("mesh {index} has no primitives")))?;
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        let mut color = None;
        for p in prims {
            if p.get("mode").and_then(Value::as_u64).unwrap_or(MODE_TRIANGLES) != MODE_TRIANGLES {
                continue;
            }
            if p.get("extensions").is_some_and(|e| e.get("KHR_draco_mesh_compression").is_some()) {
                return Err(AssetError::Unsupported("KHR_draco_mesh_compression".into()));
            }
            let pos = p
                .get("attributes")
                .and_then(|a| a.get("POSITION"))
                .and_then(Value::as_u64)
                .ok_or_else(|| malformed("primitive without POSITION"))?;
            let verts = self.positions(pos)?;
            let idx = match p.get("indices").and_then(Value::as_u64) {
                Some(i) => self.indices(i)?,
                None => (0..verts.len() as u32).collect(),
            };
            if idx.len() % 3 != 0 {
                return Err(malformed("triangle index count is not a multiple of 3"));
            }
            let base = vertices.len() as u32;
            for t in idx.chunks_exact(3) {
                triangles.push([base + t[0], base + t[1], base + t[2]]);
            }
            vertices.extend(verts);
            if color.is_none() {
                color = p
                    .get("material")
                    .and_then(Value::as_u64)
                    .and_then(|mi| self.doc.get("materials")?.get(mi as usize))
                    .and_then(|mat| mat.pointer("/pbrMetallicRoughness/baseColorFactor"))
                    .and_then(|c| serde_json::from_value::<[f32; 4]>(c.clone()).ok());
            }
        }
        if triangles.is_empty() {
            return Err(AssetError::NoTriangles);
        }
        Ok(Mesh::new(name, vertices, triangles)?.with_color(color.unwrap_or(DEFAULT_COLOR)))
    }
}

/// Reads the first mesh of a glb container, in its local frame.
pub fn load_glb(bytes: &[u8]) -> Result<Mesh, AssetError> {
    let c = parse_container(bytes)?;
    let count = c.doc.get("meshes").and_then(Value::as_array).map_or(0, Vec::len);
    if count == 0 {
        return Err(AssetError::NoTriangles);
    }
    c.mesh(0)
}

/// Reads every mesh-carrying node with its transform.
pub fn load_glb_scene(bytes: &[u8]) -> Result<Vec<GlbNode>, AssetError> {
    let c = parse_container(bytes)?;
    let swap = axis_swap();
    let nodes = c.doc.get("nodes").and_then(Value::as_array).cloned().unwrap_or_default();
    let mut cache: Vec<Option<Arc<Mesh>>> = Vec::new();
    let mut out = Vec::new();
    for node in &nodes {
        let Some(mi) = node.get("mesh").and_then(Value::as_u64) else { continue };
        if node.get("matrix").is_some() {
            return Err(AssetError::Unsupported("node matrices".into()));
        }
        let mi = mi as usize;
        if cache.len() <= mi {
            cache.resize(mi + 1, None);
        }
        let mesh = match &cache[mi] {
            Some(m) => m.clone(),
            None => {
                let m = Arc::new(c.mesh(mi as u64)?);
                cache[mi] = Some(m.clone());
                m
            }
        };
        let vec3 = |key: &str, default: [f64; 3]| -> [f64; 3] {
            node.get(key)
                .and_then(|v| serde_json::from_value::<[f64; 3]>(v.clone()).ok())
                .unwrap_or(default)
        };
        let t = vec3("translation", [0.0; 3]);
        let s = vec3("scale", [1.0; 3]);
        let q = node
            .get("rotation")
            .and_then(|v| serde_json::from_value::<[f64; 4]>(v.clone()).ok())
            .unwrap_or([0.0, 0.0, 0.0, 1.0]);
        let q_gl = UnitQuaternion::from_quaternion(Quaternion::new(q[3], q[0], q[1], q[2]));
        let rotation = swap.inverse() * q_gl * swap;
        // a uniform scale is frame-independent; non-uniform scales are mapped per axis
        let scale = from_gltf(s).abs();
        out.push(GlbNode {
            name: node.get("name").and_then(Value::as_str).unwrap_or("").to_string(),
            mesh: (*mesh).clone(),
            translation: from_gltf(t),
            rotation,
            scale,
            extras: node.get("extras").cloned().unwrap_or(Value::Null),
        });
    }
    if out.is_empty() {
        return Err(AssetError::NoTriangles);
    }
    Ok(out)
}
