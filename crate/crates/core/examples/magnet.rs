//! Two cubes a gap apart, pulled together at full and half strength.

use std::sync::Arc;

use physlayout::assets::{make_primitive, PrimitiveKind};
use physlayout::geometry::{extract_contour, nearest_pair, DEFAULT_CELL_SIZE, DEFAULT_MERGE_EPS};
use physlayout::math::Vec3;
use physlayout::pool::magnet_step;
use physlayout::{PlacedAsset, PoolConfig};

fn cube(id: u32, x: f64) -> PlacedAsset {
    let mesh = make_primitive(&PrimitiveKind::Box { x: 1.0, y: 1.0, z: 1.0 }).unwrap();
    let mut a = PlacedAsset::new(id, Arc::new(mesh), 1.0);
    a.translation = Vec3::new(x, 0.0, 0.0);
    a
}

fn main() {
    let (child, parent) = (cube(1, 0.0), cube(2, 1.5));
    let a = extract_contour(&child, DEFAULT_CELL_SIZE, DEFAULT_MERGE_EPS);
    let b = extract_contour(&parent, DEFAULT_CELL_SIZE, DEFAULT_MERGE_EPS);
    let pair = nearest_pair(&a, &b).unwrap();
    println!("contours {} / {} points, nearest pair {:?} at {:.3}", a.points.len(), b.points.len(), (pair.index_a, pair.index_b), pair.distance);

    let r = magnet_step(&child, &parent, &PoolConfig::default()).unwrap();
    println!("lambda 1: moved {:?}, contact {}", r.displacement.as_slice(), r.contact);

    let half = PoolConfig { lambda: 0.5, ..Default::default() };
    let mut c = child.clone();
    for i in 1..=8 {
        let r = magnet_step(&c, &parent, &half).unwrap();
        c.translation += r.displacement;
        println!("lambda 0.5 step {i}: {:.4} -> {:.4}", r.pre_distance, r.post_distance);
        if r.contact {
            break;
        }
    }
}
