use serde::{Deserialize, Serialize};

use super::PoolError;
use crate::scene_graph::SizeClass;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SizeScale {
    pub small: f64,
    pub medium: f64,
    pub large: f64,
}

impl Default for SizeScale {
    fn default() -> Self {
        SizeScale { small: 0.5, medium: 1.0, large: 2.0 }
    }
}

impl SizeScale {
    pub fn get(&self, size: SizeClass) -> f64 {
        match size {
            SizeClass::Small => self.small,
            SizeClass::Medium => self.medium,
            SizeClass::Large => self.large,
        }
    }
}

/// Stage-one parameters. Missing JSON fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoolConfig {
    pub size_scale: SizeScale,
    /// Gap between staggered assets and between duplicated scenes.
    pub margin: f64,
    /// Far distance as a multiple of the two assets' summed max extents.
    pub far_gap: f64,
    /// Near distance, same convention as `far_gap`.
    pub near_gap: f64,
    pub lean_tilt_deg: f64,
    /// Contact threshold of the magnet.
    pub d_thresh: f64,
    /// Fraction of the nearest-pair offset applied per magnet step.
    pub lambda: f64,
    pub magnet_max_iters: u32,
    /// Contour decimation cell size.
    pub cell_size: f64,
    pub merge_eps: f64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            size_scale: SizeScale::default(),
            margin: 0.1,
            far_gap: 2.0,
            near_gap: 0.25,
            lean_tilt_deg: 15.0,
            d_thresh: 0.01,
            lambda: 1.0,
            magnet_max_iters: 8,
            cell_size: crate::geometry::DEFAULT_CELL_SIZE,
            merge_eps: crate::geometry::DEFAULT_MERGE_EPS,
        }
    }
}

impl PoolConfig {
    pub fn validate(&self) -> Result<(), PoolError> {
        let s = &self.size_scale;
        let positive = [
            ("size_scale.small", s.small),
            ("size_scale.medium", s.medium),
            ("size_scale.large", s.large),
            ("margin", self.margin),
            ("far_gap", self.far_gap),
            ("near_gap", self.near_gap),
            ("d_thresh", self.d_thresh),
            ("cell_size", self.cell_size),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(PoolError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(PoolError::Config(format!("lambda must be in (0, 1], got {}", self.lambda)));
        }
        if self.merge_eps.is_nan() || self.merge_eps < 0.0 || !self.lean_tilt_deg.is_finite() {
            return Err(PoolError::Config("merge_eps must be >= 0 and lean_tilt_deg finite".into()));
        }
        Ok(())
    }
}
