//! Small vector helpers shared by every module.

use nalgebra::{Point3, Rotation3, Unit, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Point = Point3<f64>;

/// Rotation about the vertical axis.
pub fn yaw_rotation(deg: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), deg.to_radians())
}

/// Rotation about an arbitrary axis. A zero axis yields the identity.
pub fn axis_rotation(axis: &Vec3, deg: f64) -> Rotation3<f64> {
    match Unit::try_new(*axis, 1e-12) {
        Some(unit) => Rotation3::from_axis_angle(&unit, deg.to_radians()),
        None => Rotation3::identity(),
    }
}

/// Clamps `v` to length `max`, keeping its direction.
pub fn clamp_length(v: Vec3, max: f64) -> Vec3 {
    let len = v.norm();
    if len > max && len > 0.0 {
        v * (max / len)
    } else {
        v
    }
}

pub fn is_finite(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}
