use sha2::{Digest, Sha256};

use super::{
    apply_guidance, measure_violations, render_snapshots, score_layout, Critic, CritiqueInput, ScoreConfig,
    SnapshotConfig, SupervisionError,
};
use crate::agents::LayoutGuidance;
use crate::pool::{Layout, PoolConfig, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalReason {
    ThresholdReached,
    MaxIters,
    NoProgress,
}

impl TerminalReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminalReason::ThresholdReached => "threshold_reached",
            TerminalReason::MaxIters => "max_iters",
            TerminalReason::NoProgress => "no_progress",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub t: u32,
    /// Digest of the candidate's transforms.
    pub layout_id: String,
    pub score: f64,
    pub accepted: bool,
    /// Critic calls made in this iteration.
    pub attempts: u32,
    pub guidance: LayoutGuidance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineTrace {
    pub initial_score: f64,
    pub iterations: Vec<TraceEntry>,
    /// `None` only while the loop is still running.
    pub terminal_reason: Option<TerminalReason>,
}

impl RefineTrace {
    pub fn final_score(&self) -> f64 {
        self.iterations.iter().filter(|e| e.accepted).map(|e| e.score).next_back().unwrap_or(self.initial_score)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "initial_score": self.initial_score,
            "terminal_reason": self.terminal_reason.map(|r| r.as_str()),
            "iterations": self.iterations.iter().map(|e| serde_json::json!({
                "t": e.t,
                "layout_id": e.layout_id,
                "score": e.score,
                "accepted": e.accepted,
                "attempts": e.attempts,
                "guidance": e.guidance.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Short hex digest of every transform in the layout.
pub fn layout_digest(layout: &Layout) -> String {
    let mut h = Sha256::new();
    let mut assets: Vec<_> = layout.assets.iter().collect();
    assets.sort_by_key(|a| a.spec_id);
    for a in assets {
        h.update(a.spec_id.to_le_bytes());
        for v in [a.scale, a.yaw_deg, a.translation.x, a.translation.y, a.translation.z] {
            h.update(v.to_bits().to_le_bytes());
        }
        if let Some(t) = &a.tilt {
            for v in [t.axis[0], t.axis[1], t.axis[2], t.deg] {
                h.update(v.to_bits().to_le_bytes());
            }
        }
    }
    hex::encode(&h.finalize()[..8])
}

fn score_of(
    layout: &Layout,
    previous: Option<&Layout>,
    score: &ScoreConfig,
    pool: &PoolConfig,
) -> Result<f64, SupervisionError> {
    let report = measure_violations(layout, score, pool);
    Ok(score_layout(layout, previous, &report, score)?.value)
}

/// Critic-driven refinement.
///
/// Each iteration asks the critic for guidance on the incumbent and scores
/// the moved candidate against it. A candidate scoring below the previous
/// accepted score is discarded and the critic is asked once more (its
/// `attempt` argument is 1); if that also regresses, the iteration is given
/// up. The loop stops when a score reaches the rationality threshold, after
/// `max_iters` iterations, or after two consecutive given-up iterations.
pub fn refine(
    layout: &Layout,
    critic: &mut dyn Critic,
    score: &ScoreConfig,
    pool: &PoolConfig,
) -> Result<(Layout, RefineTrace), SupervisionError> {
    score.validate()?;
    let mut incumbent = layout.clone();
    let mut best = score_of(&incumbent, None, score, pool)?;
    let mut trace = RefineTrace { initial_score: best, iterations: Vec::new(), terminal_reason: None };
    if best >= score.rationality_threshold {
        trace.terminal_reason = Some(TerminalReason::ThresholdReached);
        return Ok((incumbent, trace));
    }
    let snap_cfg = SnapshotConfig::default();
    let mut discarded = 0;
    for t in 1..=score.max_iters {
        let report = measure_violations(&incumbent, score, pool);
        let snapshots = critic.needs_snapshots().then(|| render_snapshots(&incumbent, &snap_cfg));
        let input = CritiqueInput { layout: &incumbent, report: &report, snapshots: snapshots.as_ref(), score, pool };
        let mut entry = None;
        for attempt in 0..2 {
            let critique = match critic.critique(&input, attempt) {
                Ok(c) => c,
                Err(e) => return Err(SupervisionError::Critic { source: e, trace: Box::new(trace) }),
            };
            let candidate = apply_guidance(&incumbent, &critique.guidance);
            let s = score_of(&candidate, Some(&incumbent), score, pool)?;
            let accepted = s >= best;
            entry = Some((
                TraceEntry {
                    t,
                    layout_id: layout_digest(&candidate),
                    score: s,
                    accepted,
                    attempts: attempt + 1,
                    guidance: critique.guidance,
                },
                candidate,
            ));
            if accepted {
                break;
            }
        }
        let (entry, candidate) = entry.expect("at least one attempt");
        let accepted = entry.accepted;
        let s = entry.score;
        log::debug!("refine t={t} score={s:.4} accepted={accepted}");
        trace.iterations.push(entry);
        if accepted {
            incumbent = candidate;
            incumbent.provenance = Provenance::Refined(t);
            best = s;
            discarded = 0;
            if s >= score.rationality_threshold {
                trace.terminal_reason = Some(TerminalReason::ThresholdReached);
                return Ok((incumbent, trace));
            }
        } else {
            discarded += 1;
            if discarded == 2 {
                trace.terminal_reason = Some(TerminalReason::NoProgress);
                return Ok((incumbent, trace));
            }
        }
    }
    trace.terminal_reason = Some(TerminalReason::MaxIters);
    Ok((incumbent, trace))
}
