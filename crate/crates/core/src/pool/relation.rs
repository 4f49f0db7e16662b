use std::fmt;

/// Members of the physical relation database.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalRelation {
    On,
    Under,
    Left,
    Right,
    Front,
    Behind,
    Far,
    Near,
    CenterAligned,
    LeaningOn,
    Facing,
    /// Yaw in degrees.
    Rotation(f64),
}

impl CanonicalRelation {
    /// Database tokens, in the order they are listed to the classifier agent.
    pub const TOKENS: [&'static str; 12] = [
        "on", "under", "left", "right", "front", "behind", "far", "near", "center-aligned",
        "leaning-on", "facing", "rotation",
    ];

    pub fn token(&self) -> &'static str {
        use CanonicalRelation::*;
        match self {
            On => "on",
            Under => "under",
            Left => "left",
            Right => "right",
            Front => "front",
            Behind => "behind",
            Far => "far",
            Near => "near",
            CenterAligned => "center-aligned",
            LeaningOn => "leaning-on",
            Facing => "facing",
            Rotation(_) => "rotation",
        }
    }

    /// Exact database token lookup (case-insensitive, `_` accepted for `-`).
    pub fn from_token(token: &str, angle_deg: Option<f64>) -> Option<Self> {
        use CanonicalRelation::*;
        let t = token.trim().to_lowercase().replace('_', "-");
        Some(match t.as_str() {
            "on" => On,
            "under" => Under,
            "left" => Left,
            "right" => Right,
            "front" => Front,
            "behind" => Behind,
            "far" => Far,
            "near" => Near,
            "center-aligned" => CenterAligned,
            "leaning-on" => LeaningOn,
            "facing" => Facing,
            "rotation" => Rotation(angle_deg.unwrap_or(0.0)),
            _ => return None,
        })
    }

    /// Same variant, ignoring the rotation angle.
    pub fn same_kind(&self, other: &Self) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    pub fn is_basic(&self) -> bool {
        use CanonicalRelation::*;
        matches!(self, On | Under | Left | Right | Front | Behind)
    }

    /// Relations whose pairs the contact magnet pulls together.
    pub fn is_magnetic(&self) -> bool {
        use CanonicalRelation::*;
        matches!(self, On | Left | Right | Front | Behind | LeaningOn)
    }
}

impl fmt::Display for CanonicalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalRelation::Rotation(a) => write!(f, "rotation({a})"),
            other => f.write_str(other.token()),
        }
    }
}
