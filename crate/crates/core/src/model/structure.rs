//! Structural invariants a stored log must satisfy.
//!
//! These are the properties the parser enforces before handing a log out:
//! identifiers, sequencing, status consistency and metric declarations.
//! Content completeness is left to the lint catalog so drafts still load.

use std::collections::BTreeSet;

use super::{
    is_record_id, is_slug, FeedbackLog, LogStatus, MetricOrigin, ReadingContext, UpdateStatus,
    SCHEMA_VERSION,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub fn check(log: &FeedbackLog) -> Vec<Violation> {
    let mut out = Vec::new();

    if !is_slug(&log.id) {
        out.push(Violation::new("id", format!("{:?} is not a slug", log.id)));
    }
    if log.owner.id.trim().is_empty() {
        out.push(Violation::new("owner.id", "owner must not be empty"));
    }
    if log.schema_version != SCHEMA_VERSION {
        out.push(Violation::new(
            "schema_version",
            format!("expected {SCHEMA_VERSION}, found {}", log.schema_version),
        ));
    }
    if log.revision == 0 {
        out.push(Violation::new("revision", "revision starts at 1"));
    }
    match (log.status, log.final_summary.is_some()) {
        (LogStatus::Finalized, false) => {
            out.push(Violation::new("final_summary", "finalized log has no final summary"))
        }
        (status, true) if status != LogStatus::Finalized => out.push(Violation::new(
            "status",
            "log has a final summary but is not finalized",
        )),
        _ => {}
    }

    for (ri, record) in log.records.iter().enumerate() {
        let expected = format!("R{}", ri + 1);
        if record.id != expected {
            out.push(Violation::new(
                format!("records[{ri}].id"),
                format!("expected {expected}, found {:?}", record.id),
            ));
        }
        for (ui, update) in record.candidate_updates.iter().enumerate() {
            let expected = format!("U{}", ui + 1);
            if update.id != expected {
                out.push(Violation::new(
                    format!("records[{ri}].candidate_updates[{ui}].id"),
                    format!("expected {expected}, found {:?}", update.id),
                ));
            }
            let chosen = record.chosen_update_ids.contains(&update.id);
            if chosen != (update.status == UpdateStatus::Implemented) {
                out.push(Violation::new(
                    format!("records[{ri}].candidate_updates[{ui}].status"),
                    "status is implemented exactly when the update is chosen",
                ));
            }
        }
        let unknown: Vec<&str> = record
            .chosen_update_ids
            .iter()
            .filter(|id| record.update(id).is_none())
            .map(String::as_str)
            .collect();
        if !unknown.is_empty() {
            out.push(Violation::new(
                format!("records[{ri}].chosen_update_ids"),
                format!("not among candidates: {}", unknown.join(", ")),
            ));
        }
        if !record.completed && record.inaction_justification.is_some() {
            out.push(Violation::new(
                format!("records[{ri}].inaction_justification"),
                "only completed records carry a justification for inaction",
            ));
        }
        if record.has_inaction_justification() && !record.chosen_update_ids.is_empty() {
            out.push(Violation::new(
                format!("records[{ri}].inaction_justification"),
                "a record either chooses updates or justifies inaction",
            ));
        }
    }

    let mut names = BTreeSet::new();
    let specs = log
        .starting_point
        .metrics
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("starting_point.metrics[{i}]"), m, true))
        .chain(
            log.metrics
                .iter()
                .enumerate()
                .map(|(i, m)| (format!("metrics[{i}]"), m, false)),
        )
        .chain(log.final_summary.iter().flat_map(|s| {
            s.metrics
                .iter()
                .enumerate()
                .map(|(i, m)| (format!("final_summary.metrics[{i}]"), m, false))
        }));
    for (path, spec, at_start) in specs {
        if spec.name.trim().is_empty() {
            out.push(Violation::new(format!("{path}.name"), "metric name is empty"));
        }
        if !names.insert(spec.name.clone()) {
            out.push(Violation::new(
                format!("{path}.name"),
                format!("duplicate metric {:?}", spec.name),
            ));
        }
        if let Some(t) = spec.target {
            if !t.comparator.agrees_with(spec.direction) {
                out.push(Violation::new(
                    format!("{path}.target"),
                    "comparator contradicts the metric's direction",
                ));
            }
        }
        match &spec.introduced_by {
            MetricOrigin::StartingPoint if !at_start => out.push(Violation::new(
                format!("{path}.introduced_by"),
                "only starting point metrics originate at the starting point",
            )),
            MetricOrigin::Update { .. } if at_start => out.push(Violation::new(
                format!("{path}.introduced_by"),
                "starting point metrics must originate at the starting point",
            )),
            MetricOrigin::Update {
                record_id,
                update_id,
            } => {
                let resolves = log
                    .record(record_id)
                    .is_some_and(|r| r.update(update_id).is_some());
                if !resolves {
                    out.push(Violation::new(
                        format!("{path}.introduced_by"),
                        format!("{record_id}/{update_id} does not exist"),
                    ));
                }
            }
            MetricOrigin::StartingPoint => {}
        }
    }

    for (path, reading) in log.readings() {
        let ok = match &reading.context {
            ReadingContext::StartingPoint => path.starts_with("starting_point."),
            ReadingContext::Final => path.starts_with("final_summary."),
            ReadingContext::Baseline { record_id } => {
                is_record_id(record_id) && path.contains(".baseline_readings[")
                    && log.record_index(record_id).is_some_and(|i| path.starts_with(&format!("records[{i}].")))
            }
            ReadingContext::Combined { record_id } => {
                is_record_id(record_id) && path.contains(".combined_readings[")
                    && log.record_index(record_id).is_some_and(|i| path.starts_with(&format!("records[{i}].")))
            }
            ReadingContext::AfterUpdate {
                record_id,
                update_id,
            } => log.record_index(record_id).is_some_and(|i| {
                log.records[i]
                    .candidate_updates
                    .iter()
                    .position(|u| &u.id == update_id)
                    .is_some_and(|u| {
                        path.starts_with(&format!("records[{i}].candidate_updates[{u}].effect_readings["))
                    })
            }),
        };
        if !ok {
            out.push(Violation::new(
                format!("{path}.context"),
                format!("context {} does not match where the reading is stored", reading.context),
            ));
        }
    }

    out
}
