use std::collections::BTreeMap;

use crate::math::{clamp_length, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "positive" => Some(Label::Positive),
            "negative" => Some(Label::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub displacement: Vec3,
    pub yaw_deg: Option<f64>,
}

/// Per-asset adjustments suggested by a critic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayoutGuidance {
    pub moves: BTreeMap<u32, Move>,
}

impl LayoutGuidance {
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Clamps every displacement to `delta_max`, keeping its direction.
    pub fn clamped(mut self, delta_max: f64) -> Self {
        for m in self.moves.values_mut() {
            m.displacement = clamp_length(m.displacement, delta_max);
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let moves: serde_json::Map<String, serde_json::Value> = self
            .moves
            .iter()
            .map(|(id, m)| {
                let mut v = serde_json::json!({
                    "displacement": [m.displacement.x, m.displacement.y, m.displacement.z],
                });
                if let Some(y) = m.yaw_deg {
                    v["yaw_deg"] = y.into();
                }
                (id.to_string(), v)
            })
            .collect();
        serde_json::Value::Object(moves)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CritiqueResult {
    pub labels: BTreeMap<u32, Label>,
    pub guidance: LayoutGuidance,
    pub rationale: String,
}

impl CritiqueResult {
    pub fn all_positive(&self) -> bool {
        self.labels.values().all(|l| *l == Label::Positive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_keeps_direction() {
        let mut g = LayoutGuidance::default();
        g.moves.insert(1, Move { displacement: Vec3::new(2.0, 0.0, 0.0), yaw_deg: None });
        g.moves.insert(2, Move { displacement: Vec3::new(0.0, 0.1, 0.0), yaw_deg: Some(5.0) });
        let g = g.clamped(0.5);
        assert_eq!(g.moves[&1].displacement, Vec3::new(0.5, 0.0, 0.0));
        assert_eq!(g.moves[&2].displacement, Vec3::new(0.0, 0.1, 0.0));
    }
}
