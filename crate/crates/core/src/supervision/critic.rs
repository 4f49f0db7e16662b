use std::collections::BTreeMap;

use super::violations::{boxes, relation_correction, CONTACT_EPS};
use super::{ScoreConfig, SnapshotSet, ViolationReport};
use crate::agents::{AgentError, CritiqueResult, Label, LayoutGuidance, Move};
use crate::geometry::separating_axis;
use crate::math::clamp_length;
use crate::pool::{Layout, PoolConfig};

/// What a critic sees at one refinement iteration.
pub struct CritiqueInput<'a> {
    pub layout: &'a Layout,
    pub report: &'a ViolationReport,
    /// Present only when the critic asked for them.
    pub snapshots: Option<&'a SnapshotSet>,
    pub score: &'a ScoreConfig,
    pub pool: &'a PoolConfig,
}

/// Labels assets and suggests moves. `attempt` counts re-plans within one
/// iteration, starting at 0.
pub trait Critic {
    fn needs_snapshots(&self) -> bool {
        false
    }

    fn critique(&mut self, input: &CritiqueInput<'_>, attempt: u32) -> Result<CritiqueResult, AgentError>;
}

/// The offline critic.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleCritic;

impl Critic for RuleCritic {
    fn critique(&mut self, input: &CritiqueInput<'_>, attempt: u32) -> Result<CritiqueResult, AgentError> {
        let mut result = rule_critic(input.layout, input.report, input.score, input.pool);
        if attempt > 0 {
            let f = 0.5_f64.powi(attempt as i32);
            for m in result.guidance.moves.values_mut() {
                m.displacement *= f;
            }
        }
        Ok(result)
    }
}

/// Deterministic critique from the violation report.
///
/// Assets with any violation are negative. A negative asset is moved back to
/// its relation's tangency position (the core toward ground contact) and, if
/// its box would still overlap another, out along the minimal separating
/// axis. Of two overlapping assets the core never moves, otherwise the one
/// with the higher id does. Every move is clamped to `delta_max`.
pub fn rule_critic(layout: &Layout, report: &ViolationReport, score: &ScoreConfig, pool: &PoolConfig) -> CritiqueResult {
    let boxes = boxes(layout);
    let mut labels = BTreeMap::new();
    let mut guidance = LayoutGuidance::default();
    let mut notes = Vec::new();
    for &id in boxes.keys() {
        let v = report.per_asset.get(&id).copied().unwrap_or_default();
        if v.total <= 0.0 {
            labels.insert(id, Label::Positive);
            continue;
        }
        labels.insert(id, Label::Negative);
        let mut d = relation_correction(layout, &boxes, id, pool);
        for (&j, other) in &boxes {
            if j == id {
                continue;
            }
            let mover = !layout.is_core(id) && (layout.is_core(j) || id > j);
            if !mover {
                continue;
            }
            let candidate = boxes[&id].translated(&d);
            if let Some((axis, depth, sign)) = separating_axis(&candidate, other) {
                if depth > CONTACT_EPS {
                    d[axis] += sign * depth;
                }
            }
        }
        let d = clamp_length(d, score.delta_max);
        if d.norm() > 0.0 {
            guidance.moves.insert(id, Move { displacement: d, yaw_deg: None });
        }
        notes.push(format!(
            "{} (id {id}): penetration {:.3}, floating {:.3}, relation {:.3}",
            layout.name_of(id),
            v.penetration,
            v.floating,
            v.relation_unsat
        ));
    }
    let rationale = if notes.is_empty() { "all assets are placed plausibly".to_string() } else { notes.join("; ") };
    CritiqueResult { labels, guidance, rationale }
}

/// Applies the moves of a critique to a copy of the layout.
pub fn apply_guidance(layout: &Layout, guidance: &LayoutGuidance) -> Layout {
    let mut out = layout.clone();
    for (&id, m) in &guidance.moves {
        if let Some(a) = out.asset_mut(id) {
            a.translation += m.displacement;
            if let Some(y) = m.yaw_deg {
                a.yaw_deg += y;
            }
        }
    }
    out
}
