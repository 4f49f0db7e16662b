use serde::{Deserialize, Serialize};

use super::SupervisionError;

/// Layout score weights and refinement loop limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoreConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Largest adjustment a critic may suggest per asset and iteration.
    pub delta_max: f64,
    pub rationality_threshold: f64,
    pub max_iters: u32,
    /// Gaps below this are not counted as floating or unsatisfied.
    pub float_tolerance: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            alpha: 0.7,
            beta: 0.3,
            delta_max: 0.5,
            rationality_threshold: 0.85,
            max_iters: 10,
            float_tolerance: 0.02,
        }
    }
}

impl ScoreConfig {
    pub fn validate(&self) -> Result<(), SupervisionError> {
        let bad = |m: String| Err(SupervisionError::Config(m));
        if !(self.alpha >= 0.0 && self.beta >= 0.0) || (self.alpha + self.beta - 1.0).abs() > 1e-9 {
            return bad(format!("alpha and beta must be non-negative and sum to 1, got {} + {}", self.alpha, self.beta));
        }
        if !(self.delta_max > 0.0 && self.delta_max.is_finite()) {
            return bad(format!("delta_max must be positive, got {}", self.delta_max));
        }
        if !(self.rationality_threshold > 0.0 && self.rationality_threshold <= 1.0) {
            return bad(format!("rationality_threshold must be in (0, 1], got {}", self.rationality_threshold));
        }
        if !(self.float_tolerance >= 0.0 && self.float_tolerance.is_finite()) {
            return bad(format!("float_tolerance must be >= 0, got {}", self.float_tolerance));
        }
        Ok(())
    }
}
