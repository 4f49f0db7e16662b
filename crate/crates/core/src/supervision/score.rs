use std::collections::BTreeMap;

use super::{ScoreConfig, SupervisionError, ViolationReport};
use crate::pool::Layout;

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutScore {
    pub value: f64,
    /// Weighted (violation, displacement) terms per asset.
    pub per_asset_terms: BTreeMap<u32, (f64, f64)>,
    pub iteration: u32,
}

/// One minus the mean over assets of `alpha * violation + beta * |dC| / delta_max`,
/// with the displacement ratio clamped to 1. Without a previous layout every
/// displacement is zero.
pub fn score_layout(
    current: &Layout,
    previous: Option<&Layout>,
    report: &ViolationReport,
    config: &ScoreConfig,
) -> Result<LayoutScore, SupervisionError> {
    let mut ids = current.ids();
    ids.sort_unstable();
    if let Some(prev) = previous {
        let mut p = prev.ids();
        p.sort_unstable();
        if p != ids {
            return Err(SupervisionError::IdMismatch { current: ids, previous: p });
        }
    }
    let mut terms = BTreeMap::new();
    for &id in &ids {
        let v = report.total(id);
        let dc = match previous {
            Some(prev) => {
                let a = current.asset(id).expect("id listed");
                let b = prev.asset(id).expect("ids match");
                (a.translation - b.translation).norm()
            }
            None => 0.0,
        };
        terms.insert(id, (config.alpha * v, config.beta * (dc / config.delta_max).min(1.0)));
    }
    let n = terms.len().max(1) as f64;
    let sum: f64 = terms.values().map(|(v, d)| v + d).sum();
    Ok(LayoutScore { value: 1.0 - sum / n, per_asset_terms: terms, iteration: 0 })
}
