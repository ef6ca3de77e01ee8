//! On-disk and human-readable forms of a feedback log.
//!
//! The canonical form is JSON with lexicographically sorted keys, two-space
//! indentation and a trailing newline, stored as `<id>.fblog.json`. Exports
//! follow the template layout: Starting Point, one block per record
//! (Elicitation, Feedback, a five-column Incorporation table, Summary) and a
//! Final Summary once the log is finalized.

mod canonical;
mod html;
mod markdown;

use std::collections::HashMap;

use thiserror::Error;

pub use canonical::{canonicalize, parse, parse_unchecked, serialize, to_canonical};
pub use html::export_html;
pub use markdown::{escape_cell, export_markdown};

use crate::model::{id_number, FeedbackLog, MetricReading, MetricSpec, Record, StakeholderRef, UpdateEntry, UpdateStatus};

pub const FILE_EXTENSION: &str = ".fblog.json";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unsupported schema version {0}")]
    UnsupportedVersion(u64),
}

/// Metric name to unit, for rendering readings.
pub(crate) struct MetricLookup<'a> {
    units: HashMap<&'a str, &'a str>,
}

impl<'a> MetricLookup<'a> {
    pub(crate) fn new(log: &'a FeedbackLog) -> Self {
        MetricLookup {
            units: log
                .metric_specs()
                .map(|m| (m.name.as_str(), m.unit.as_str()))
                .collect(),
        }
    }

    fn unit(&self, name: &str) -> &str {
        self.units.get(name).copied().unwrap_or("")
    }
}

fn with_unit(value: &str, unit: &str) -> String {
    match unit.trim() {
        "" => value.to_string(),
        "%" => format!("{value}%"),
        u => format!("{value} {u}"),
    }
}

/// `55% robustness (note)`.
pub(crate) fn format_reading(reading: &MetricReading, metrics: &MetricLookup) -> String {
    let base = format!(
        "{} {}",
        with_unit(&reading.value.to_string(), metrics.unit(&reading.metric_name)),
        reading.metric_name
    );
    match reading.note.trim() {
        "" => base,
        note => format!("{base} ({note})"),
    }
}

pub(crate) fn describe_metric(spec: &MetricSpec) -> String {
    let direction = match spec.direction {
        crate::model::Direction::HigherBetter => "higher is better",
        crate::model::Direction::LowerBetter => "lower is better",
    };
    let mut out = format!("{} ({direction}", spec.name);
    if !spec.unit.trim().is_empty() {
        out.push_str(", unit ");
        out.push_str(spec.unit.trim());
    }
    if let Some(t) = spec.target {
        out.push_str(", target ");
        out.push_str(t.comparator.symbol());
        out.push_str(&with_unit(&t.value.to_string(), &spec.unit));
    }
    out.push(')');
    if !spec.description.trim().is_empty() {
        out.push_str(": ");
        out.push_str(spec.description.trim());
    }
    out
}

pub(crate) fn stakeholder_line(stakeholders: &[StakeholderRef]) -> String {
    stakeholders
        .iter()
        .map(|s| format!("{} ({})", s.label.trim(), s.category.display_name()))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn where_cell(update: &UpdateEntry) -> String {
    update
        .kinds
        .iter()
        .map(|k| k.display_name())
        .collect::<Vec<_>>()
        .join(" and ")
}

pub(crate) fn effect_text(update: &UpdateEntry, metrics: &MetricLookup) -> String {
    let mut parts = Vec::new();
    if !update.effect_note.trim().is_empty() {
        parts.push(update.effect_note.trim().to_string());
    }
    parts.extend(update.effect_readings.iter().map(|r| format_reading(r, metrics)));
    parts.join("; ")
}

pub(crate) fn status_marker(record: &Record, update: &UpdateEntry) -> &'static str {
    match update.status {
        UpdateStatus::Implemented => " (implemented)",
        UpdateStatus::Rejected => " (rejected)",
        UpdateStatus::Considered if record.completed => " (not chosen)",
        UpdateStatus::Considered => "",
    }
}

/// Chosen ids in numeric order, e.g. `U1, U3`.
pub(crate) fn chosen_list(record: &Record) -> String {
    let mut ids: Vec<&String> = record.chosen_update_ids.iter().collect();
    ids.sort_by_key(|id| id_number(id, 'U').unwrap_or(u32::MAX));
    ids.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
}
