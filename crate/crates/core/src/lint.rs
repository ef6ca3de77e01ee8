//! Completeness lint for feedback logs.
//!
//! The catalog is fixed (L1 to L10). `validate` never mutates the log and
//! works on drafts as well as finalized logs; findings come back sorted by
//! severity and then document path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{FeedbackLog, LogStatus, ReadingContext, ReadingPosition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub rule_id: String,
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl LintFinding {
    fn new(rule: &str, severity: Severity, path: impl Into<String>, message: impl Into<String>) -> Self {
        LintFinding {
            rule_id: rule.to_string(),
            severity,
            path: path.into(),
            message: message.into(),
        }
    }

    fn error(rule: &str, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(rule, Severity::Error, path, message)
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.rule_id, self.path, self.message)
    }
}

pub struct Rule {
    pub id: &'static str,
    pub severity: Severity,
    pub summary: &'static str,
}

pub const CATALOG: [Rule; 10] = [
    Rule { id: "L1", severity: Severity::Error, summary: "starting point data and model descriptions are present" },
    Rule { id: "L2", severity: Severity::Info, summary: "starting point declares no metrics" },
    Rule { id: "L3", severity: Severity::Error, summary: "chosen updates are among the candidates" },
    Rule { id: "L4", severity: Severity::Error, summary: "completed record has elicitation, feedback, candidates and summary" },
    Rule { id: "L5", severity: Severity::Error, summary: "update row fills which, where, when, why and effect" },
    Rule { id: "L6", severity: Severity::Error, summary: "record with no chosen update justifies the inaction" },
    Rule { id: "L7", severity: Severity::Error, summary: "identifiable stakeholder has recorded consent" },
    Rule { id: "L8", severity: Severity::Error, summary: "finalized log reads every target-bearing metric at the end" },
    Rule { id: "L9", severity: Severity::Info, summary: "log is not finalized" },
    Rule { id: "L10", severity: Severity::Error, summary: "reading refers to a metric already introduced" },
];

fn blank(s: &str) -> bool {
    s.trim().is_empty()
}

pub fn validate(log: &FeedbackLog) -> Vec<LintFinding> {
    let mut out = Vec::new();

    if blank(&log.starting_point.data_description) {
        out.push(LintFinding::error(
            "L1",
            "starting_point.data_description",
            "starting point has no data description",
        ));
    }
    if blank(&log.starting_point.model_description) {
        out.push(LintFinding::error(
            "L1",
            "starting_point.model_description",
            "starting point has no model description",
        ));
    }
    if log.starting_point.metrics.is_empty() {
        out.push(LintFinding::new(
            "L2",
            Severity::Info,
            "starting_point.metrics",
            "no metrics defined at the starting point",
        ));
    }

    for (ri, record) in log.records.iter().enumerate() {
        let at = |suffix: &str| format!("records[{ri}].{suffix}");

        let missing: Vec<&str> = record
            .chosen_update_ids
            .iter()
            .filter(|id| record.update(id).is_none())
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            out.push(LintFinding::error(
                "L3",
                at("chosen_update_ids"),
                format!("{}: chosen updates not among candidates: {}", record.id, missing.join(", ")),
            ));
        }

        if record.completed {
            let e = &record.elicitation;
            let checks = [
                (e.stakeholders.is_empty(), "elicitation.stakeholders", "no stakeholders named"),
                (blank(&e.reason), "elicitation.reason", "no reason for consulting"),
                (blank(&e.presentation), "elicitation.presentation", "no description of what was presented"),
                (blank(&record.feedback_text), "feedback_text", "no feedback recorded"),
                (record.candidate_updates.is_empty(), "candidate_updates", "no candidate updates"),
                (blank(&record.summary_text), "summary_text", "no summary"),
            ];
            for (failed, field, what) in checks {
                if failed {
                    out.push(LintFinding::error(
                        "L4",
                        at(field),
                        format!("{} is completed but has {what}", record.id),
                    ));
                }
            }
            if record.chosen_update_ids.is_empty() && !record.has_inaction_justification() {
                out.push(LintFinding::error(
                    "L6",
                    at("inaction_justification"),
                    format!("{} implements no update and gives no justification", record.id),
                ));
            }
        }

        for (ui, update) in record.candidate_updates.iter().enumerate() {
            let checks = [
                (blank(&update.which), "which"),
                (update.kinds.is_empty(), "kinds"),
                (blank(&update.why), "why"),
                (!update.has_effect(), "effect"),
            ];
            for (failed, field) in checks {
                if failed {
                    out.push(LintFinding::error(
                        "L5",
                        format!("records[{ri}].candidate_updates[{ui}].{field}"),
                        format!("{}/{} is missing {field}", record.id, update.id),
                    ));
                }
            }
        }

        for (si, s) in record.elicitation.stakeholders.iter().enumerate() {
            if s.identifiable && !s.consent_recorded {
                out.push(LintFinding::error(
                    "L7",
                    format!("records[{ri}].elicitation.stakeholders[{si}]"),
                    format!("{}: identifiable stakeholder without recorded consent", record.id),
                ));
            }
        }
    }

    out.extend(target_findings(log));

    if log.status != LogStatus::Finalized {
        out.push(LintFinding::new(
            "L9",
            Severity::Info,
            "status",
            format!("log is {}, not finalized", log.status.as_str()),
        ));
    }

    out.extend(reading_order_findings(log));

    out.sort_by(|a, b| {
        (a.severity, &a.path, &a.rule_id).cmp(&(b.severity, &b.path, &b.rule_id))
    });
    out
}

fn metric_paths(log: &FeedbackLog) -> Vec<(String, &crate::model::MetricSpec)> {
    let mut out = Vec::new();
    for (i, m) in log.starting_point.metrics.iter().enumerate() {
        out.push((format!("starting_point.metrics[{i}]"), m));
    }
    for (i, m) in log.metrics.iter().enumerate() {
        out.push((format!("metrics[{i}]"), m));
    }
    if let Some(summary) = &log.final_summary {
        for (i, m) in summary.metrics.iter().enumerate() {
            out.push((format!("final_summary.metrics[{i}]"), m));
        }
    }
    out
}

/// L8 over a finalized log: a target-bearing metric without a final reading
/// is an error, an unmet target a warning.
pub fn target_findings(log: &FeedbackLog) -> Vec<LintFinding> {
    if log.status != LogStatus::Finalized {
        return Vec::new();
    }
    let finals: Vec<_> = log
        .final_summary
        .iter()
        .flat_map(|s| s.readings.iter())
        .filter(|r| r.context == ReadingContext::Final)
        .collect();
    let mut out = Vec::new();
    for (path, spec) in metric_paths(log) {
        let Some(target) = spec.target else { continue };
        let values: Vec<_> = finals
            .iter()
            .filter(|r| r.metric_name == spec.name)
            .map(|r| r.value)
            .collect();
        if values.is_empty() {
            out.push(LintFinding::error(
                "L8",
                path,
                format!("metric {:?} has target {target} but no final reading", spec.name),
            ));
        } else if let Some(v) = values.iter().find(|v| !target.comparator.holds(**v, target.value)) {
            out.push(LintFinding::new(
                "L8",
                Severity::Warning,
                path,
                format!("metric {:?}: target {target} unmet (final reading {v})", spec.name),
            ));
        }
    }
    out
}

fn reading_order_findings(log: &FeedbackLog) -> Vec<LintFinding> {
    let mut out = Vec::new();
    for (path, reading) in log.readings() {
        let Some(spec) = log.metric_spec(&reading.metric_name) else {
            out.push(LintFinding::error(
                "L10",
                path,
                format!("reading refers to undeclared metric {:?}", reading.metric_name),
            ));
            continue;
        };
        let at = ReadingPosition::of_context(&reading.context);
        let introduced = ReadingPosition::of_origin(&spec.introduced_by);
        if let (Some(at), Some(introduced)) = (at, introduced) {
            if at < introduced {
                out.push(LintFinding::error(
                    "L10",
                    path,
                    format!(
                        "reading of {:?} at {} precedes the metric's introduction",
                        reading.metric_name, reading.context
                    ),
                ));
            }
        }
    }
    out
}

pub fn error_count(findings: &[LintFinding]) -> usize {
    findings.iter().filter(|f| f.severity == Severity::Error).count()
}
