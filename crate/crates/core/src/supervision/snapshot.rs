use std::collections::BTreeMap;

use crate::geometry::{compute_aabb, Aabb};
use crate::pool::Layout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViewAxis {
    X,
    Y,
    Z,
}

impl ViewAxis {
    pub const ALL: [ViewAxis; 3] = [ViewAxis::X, ViewAxis::Y, ViewAxis::Z];

    pub fn as_str(&self) -> &'static str {
        match self {
            ViewAxis::X => "x",
            ViewAxis::Y => "y",
            ViewAxis::Z => "z",
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }

    /// World axes (with sign) mapped to image right and image up.
    fn image_axes(&self) -> [(usize, f64); 2] {
        match self {
            ViewAxis::X => [(1, 1.0), (2, 1.0)],
            ViewAxis::Y => [(0, -1.0), (2, 1.0)],
            ViewAxis::Z => [(0, 1.0), (1, 1.0)],
        }
    }
}

/// RGB8 image, row-major from the top-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<[u8; 3]>,
}

impl Raster {
    pub fn new(width: u32, height: u32, fill: [u8; 3]) -> Self {
        Raster { width, height, pixels: vec![fill; (width * height) as usize] }
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[(y * self.width + x) as usize]
    }

    fn set(&mut self, x: i64, y: i64, c: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as u32) < self.width && (y as u32) < self.height {
            let i = (y as u32 * self.width + x as u32) as usize;
            self.pixels[i] = c;
        }
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, self.width, self.height);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().expect("in-memory png header");
        let data: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        w.write_image_data(&data).expect("in-memory png data");
        w.finish().expect("in-memory png");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotConfig {
    pub resolution: u32,
    /// World width covered by the image.
    pub ortho_width: f64,
    pub camera_distance: f64,
}

impl Default for SnapshotConfig {
    fn default() -> Self {
        SnapshotConfig { resolution: 512, ortho_width: 10.0, camera_distance: 8.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    pub images: BTreeMap<ViewAxis, Raster>,
    pub camera_distance: f64,
}

const BACKGROUND: [u8; 3] = [235, 235, 235];

const PALETTE: [[u8; 3]; 10] = [
    [230, 25, 75],
    [60, 180, 75],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 200, 200],
    [240, 50, 230],
    [170, 110, 40],
    [128, 128, 0],
    [0, 0, 128],
];

pub fn asset_color(id: u32) -> [u8; 3] {
    PALETTE[(id.saturating_sub(1) as usize) % PALETTE.len()]
}

// 3x5 digit glyphs, one row per entry, high bit on the left
const DIGITS: [[u8; 5]; 10] = [
    [7, 5, 5, 5, 7],
    [2, 6, 2, 2, 7],
    [7, 1, 7, 4, 7],
    [7, 1, 7, 1, 7],
    [5, 5, 7, 1, 1],
    [7, 4, 7, 1, 7],
    [7, 4, 7, 5, 7],
    [7, 1, 1, 1, 1],
    [7, 5, 7, 5, 7],
    [7, 5, 7, 1, 7],
];

fn draw_label(img: &mut Raster, text: &str, cx: i64, cy: i64, color: [u8; 3]) {
    const SCALE: i64 = 2;
    let w = text.len() as i64 * 4 * SCALE - SCALE;
    let x0 = cx - w / 2;
    let y0 = cy - 5 * SCALE / 2;
    for (k, ch) in text.chars().enumerate() {
        let Some(d) = ch.to_digit(10) else { continue };
        for (row, bits) in DIGITS[d as usize].iter().enumerate() {
            for col in 0..3 {
                if bits & (4 >> col) != 0 {
                    for sy in 0..SCALE {
                        for sx in 0..SCALE {
                            img.set(
                                x0 + (k as i64 * 4 + col) * SCALE + sx,
                                y0 + row as i64 * SCALE + sy,
                                color,
                            );
                        }
                    }
                }
            }
        }
    }
}

fn view(boxes: &[(u32, Aabb)], axis: ViewAxis, cfg: &SnapshotConfig) -> Raster {
    let res = cfg.resolution;
    let mut img = Raster::new(res, res, BACKGROUND);
    let k = axis.index();
    let [(ru, su), (rv, sv)] = axis.image_axes();
    let px_per_unit = res as f64 / cfg.ortho_width;
    let half = cfg.ortho_width / 2.0;

    let mut visible: Vec<&(u32, Aabb)> = boxes.iter().filter(|(_, b)| b.min[k] < cfg.camera_distance).collect();
    // far to near; the camera sits on the positive side
    visible.sort_by(|a, b| a.1.max[k].total_cmp(&b.1.max[k]).then(a.0.cmp(&b.0)));

    for (id, b) in visible {
        let (u0, u1) = sorted(b.min[ru] * su, b.max[ru] * su);
        let (v0, v1) = sorted(b.min[rv] * sv, b.max[rv] * sv);
        // pixel centres inside the projected rectangle
        let c0 = ((u0 + half) * px_per_unit - 0.5).ceil() as i64;
        let c1 = ((u1 + half) * px_per_unit - 0.5).floor() as i64;
        let r0 = ((half - v1) * px_per_unit - 0.5).ceil() as i64;
        let r1 = ((half - v0) * px_per_unit - 0.5).floor() as i64;
        let fill = asset_color(*id);
        let edge = fill.map(|c| c / 2);
        for y in r0..=r1 {
            for x in c0..=c1 {
                let border = x == c0 || x == c1 || y == r0 || y == r1;
                img.set(x, y, if border { edge } else { fill });
            }
        }
        if c1 >= c0 && r1 >= r0 {
            draw_label(&mut img, &id.to_string(), (c0 + c1) / 2, (r0 + r1) / 2, [255, 255, 255]);
        }
    }
    img
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Orthographic views of the asset boxes from the +x, +y and +z axes.
pub fn render_snapshots(layout: &Layout, config: &SnapshotConfig) -> SnapshotSet {
    let boxes: Vec<(u32, Aabb)> = layout.assets.iter().map(|a| (a.spec_id, compute_aabb(a))).collect();
    let images = ViewAxis::ALL.iter().map(|&ax| (ax, view(&boxes, ax, config))).collect();
    SnapshotSet { images, camera_distance: config.camera_distance }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::assets::{make_primitive, PlacedAsset, PrimitiveKind};
    use crate::math::Vec3;
    use crate::pool::Provenance;
    use crate::scene_graph::parse_dsl;

    fn layout(assets: Vec<PlacedAsset>) -> Layout {
        let g = parse_dsl("scene: x\nasset: a | size=medium | desc=\"a\"\nasset: b | size=medium | desc=\"b\"\nrel: a left")
            .unwrap();
        Layout { assets, graph: Arc::new(g), provenance: Provenance::Coarse }
    }

    fn cube(id: u32, t: Vec3) -> PlacedAsset {
        let mut a = PlacedAsset::new(id, Arc::new(make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap()), 1.0);
        a.translation = t;
        a
    }

    fn covered(img: &Raster) -> Vec<(u32, u32)> {
        (0..img.height)
            .flat_map(|y| (0..img.width).map(move |x| (x, y)))
            .filter(|&(x, y)| img.get(x, y) != BACKGROUND)
            .collect()
    }

    #[test]
    fn empty_scene_is_background() {
        let s = render_snapshots(&layout(vec![]), &SnapshotConfig::default());
        assert_eq!(s.images.len(), 3);
        assert!(s.images.values().all(|i| covered(i).is_empty()));
    }

    #[test]
    fn unit_cube_square_is_centred() {
        let s = render_snapshots(&layout(vec![cube(1, Vec3::zeros())]), &SnapshotConfig::default());
        let px = covered(&s.images[&ViewAxis::X]);
        let (xs, ys): (Vec<u32>, Vec<u32>) = px.iter().copied().unzip();
        let w = xs.iter().max().unwrap() - xs.iter().min().unwrap() + 1;
        let h = ys.iter().max().unwrap() - ys.iter().min().unwrap() + 1;
        // 1 / 10 * 512 = 51.2
        assert!((w as f64 - 51.2).abs() <= 1.0 && (h as f64 - 51.2).abs() <= 1.0, "{w}x{h}");
        let cx = (xs.iter().max().unwrap() + xs.iter().min().unwrap()) as f64 / 2.0;
        assert!((cx - 255.5).abs() <= 0.5);
        assert_eq!(px.len() as u32, w * h);
    }

    #[test]
    fn disjoint_assets_do_not_overlap_from_above() {
        let l = layout(vec![cube(1, Vec3::new(-2.0, 0.0, 0.0)), cube(2, Vec3::new(2.0, 0.0, 0.0))]);
        let img = &render_snapshots(&l, &SnapshotConfig::default()).images[&ViewAxis::Z];
        let c1 = asset_color(1);
        let c2 = asset_color(2);
        let xs1: Vec<u32> = covered(img).iter().filter(|&&(x, y)| img.get(x, y) == c1).map(|p| p.0).collect();
        let xs2: Vec<u32> = covered(img).iter().filter(|&&(x, y)| img.get(x, y) == c2).map(|p| p.0).collect();
        assert!(xs1.iter().max().unwrap() < xs2.iter().min().unwrap());
    }

    #[test]
    fn ppm_header_and_determinism() {
        let l = layout(vec![cube(1, Vec3::zeros())]);
        let a = render_snapshots(&l, &SnapshotConfig::default());
        let b = render_snapshots(&l, &SnapshotConfig::default());
        let ppm = a.images[&ViewAxis::Y].to_ppm();
        assert!(ppm.starts_with(b"P6\n512 512\n255\n"));
        assert_eq!(ppm.len(), 15 + 512 * 512 * 3);
        assert_eq!(ppm, b.images[&ViewAxis::Y].to_ppm());
        assert!(a.images[&ViewAxis::Z].to_png().starts_with(&[0x89, b'P', b'N', b'G']));
    }
}
