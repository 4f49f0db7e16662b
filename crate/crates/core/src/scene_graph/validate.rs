use std::collections::HashSet;
use std::fmt;

use super::{Relation, SceneGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Offending field, e.g. `relations[0]` or `assets[2].name`.
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { field: field.into(), message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.field, v.message)?;
        }
        Ok(())
    }
}

/// Checks every scene-graph invariant; an empty report means valid.
pub fn validate_graph(graph: &SceneGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    if graph.description.as_str().trim().is_empty() {
        report.push("description", "description is empty");
    }
    if graph.assets.is_empty() {
        report.push("assets", "scene has no assets");
    }
    let mut names = HashSet::new();
    for (i, a) in graph.assets.iter().enumerate() {
        if a.id as usize != i + 1 {
            report.push(format!("assets[{i}].id"), format!("expected id {}, found {}", i + 1, a.id));
        }
        if a.name.trim().is_empty() {
            report.push(format!("assets[{i}].name"), "name is empty");
        } else if !names.insert(a.name.as_str()) {
            report.push(format!("assets[{i}].name"), format!("duplicate name '{}'", a.name));
        }
        if a.enriched_desc.trim().is_empty() {
            report.push(format!("assets[{i}].enriched_desc"), "description is empty");
        }
    }

    let core = graph.core_id();
    let known = |id: u32| graph.asset(id).is_some();
    let mut seen = HashSet::new();
    for (i, r) in graph.relations.iter().enumerate() {
        let field = format!("relations[{i}]");
        if !known(r.subject_id) {
            report.push(&field, format!("unknown asset id {} as subject", r.subject_id));
            continue;
        }
        let first = seen.insert(r.subject_id);
        if !known(r.target_id) {
            report.push(&field, format!("unknown asset id {} as target", r.target_id));
            continue;
        }
        if r.subject_id == core {
            report.push(
                &field,
                format!("relation of id {} (the core asset) must be None, found '{}'", core, r.relation.text()),
            );
            continue;
        }
        if r.subject_id == r.target_id {
            report.push(&field, format!("asset {} relates to itself", r.subject_id));
        }
        if !first {
            report.push(&field, format!("asset {} has more than one relation", r.subject_id));
        }
        if let Relation::Phrase(p) = &r.relation {
            if p.trim().is_empty() {
                report.push(&field, "relation phrase is empty");
            }
        }
        if r.angle_deg.is_some_and(|a| !a.is_finite()) {
            report.push(&field, "angle is not finite");
        }
    }
    for a in &graph.assets {
        if a.id != core && !seen.contains(&a.id) {
            report.push(format!("assets[{}]", a.id - 1), format!("asset '{}' has no relation to the core", a.name));
        }
    }
    report
}
