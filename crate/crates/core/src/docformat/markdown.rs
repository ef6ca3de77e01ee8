use std::fmt::Write;

use super::{chosen_list, format_reading, stakeholder_line, where_cell, MetricLookup};
use crate::model::{FeedbackLog, LogStatus, PipelineSnapshot, Record, UpdateEntry};

/// Escapes a table cell: pipes are backslash-escaped and line breaks folded
/// into `<br>`.
pub fn escape_cell(text: &str) -> String {
    let text = text.trim().replace("\r\n", "\n").replace('|', "\\|");
    text.split('\n').collect::<Vec<_>>().join("<br>")
}

fn para(text: &str) -> String {
    let t = text.trim();
    if t.is_empty() {
        "_(not recorded)_".to_string()
    } else {
        t.to_string()
    }
}

pub fn export_markdown(log: &FeedbackLog) -> String {
    let metrics = MetricLookup::new(log);
    let mut out = String::new();
    let _ = writeln!(out, "# {}", log.title.trim());
    out.push('\n');
    let _ = writeln!(out, "- Log: `{}`", log.id);
    let _ = writeln!(out, "- Pipeline: {}", log.pipeline_name.trim());
    let _ = writeln!(out, "- Owner: {} ({})", log.owner.display_name, log.owner.id);
    let _ = writeln!(out, "- Status: {}", log.status.as_str());
    let _ = writeln!(out, "- Revision: {}", log.revision);
    out.push('\n');

    out.push_str("## Starting Point\n\n");
    snapshot(&mut out, &log.starting_point, &metrics, "Metrics");

    for record in &log.records {
        record_block(&mut out, record, &metrics);
    }

    if log.status == LogStatus::Finalized {
        if let Some(summary) = &log.final_summary {
            out.push_str("## Final Summary\n\n");
            snapshot(&mut out, summary, &metrics, "Metric performance");
        }
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

fn snapshot(out: &mut String, snap: &PipelineSnapshot, metrics: &MetricLookup, metrics_label: &str) {
    let _ = writeln!(out, "**Data:** {}\n", para(&snap.data_description));
    let _ = writeln!(out, "**Model:** {}\n", para(&snap.model_description));
    let mut lines = Vec::new();
    if !snap.metrics_note.trim().is_empty() {
        lines.push(snap.metrics_note.trim().to_string());
    }
    let _ = write!(out, "**{metrics_label}:**");
    if lines.is_empty() && snap.metrics.is_empty() && snap.readings.is_empty() {
        out.push_str(" None defined.\n\n");
        return;
    }
    if let Some(first) = lines.first() {
        let _ = write!(out, " {first}");
    }
    out.push_str("\n\n");
    for spec in &snap.metrics {
        let _ = writeln!(out, "- {}", super::describe_metric(spec));
    }
    for reading in &snap.readings {
        let _ = writeln!(out, "- {}", format_reading(reading, metrics));
    }
    if !snap.metrics.is_empty() || !snap.readings.is_empty() {
        out.push('\n');
    }
}

fn record_block(out: &mut String, record: &Record, metrics: &MetricLookup) {
    let _ = writeln!(out, "## Record {}\n", record.number());

    out.push_str("### Elicitation\n\n");
    let who = stakeholder_line(&record.elicitation.stakeholders);
    let reason = record.elicitation.reason.trim();
    let who_why = match (who.is_empty(), reason.is_empty()) {
        (true, true) => para(""),
        (false, true) => format!("{who}."),
        (true, false) => reason.to_string(),
        (false, false) => format!("{who}. {reason}"),
    };
    let _ = writeln!(out, "**Who and why?** {who_why}\n");
    let _ = writeln!(out, "**How?** {}\n", para(&record.elicitation.presentation));
    for reading in &record.baseline_readings {
        let _ = writeln!(out, "- Baseline: {}", format_reading(reading, metrics));
    }
    if !record.baseline_readings.is_empty() {
        out.push('\n');
    }

    out.push_str("### Feedback\n\n");
    let _ = writeln!(out, "**What?** {}\n", para(&record.feedback_text));

    out.push_str("### Incorporation\n\n");
    out.push_str("| Which? | Where? | When? | Why? | Effect? |\n");
    out.push_str("| --- | --- | --- | --- | --- |\n");
    for update in &record.candidate_updates {
        let _ = writeln!(out, "{}", table_row(record, update, metrics));
    }
    out.push('\n');

    out.push_str("### Summary\n\n");
    if !record.chosen_update_ids.is_empty() {
        let _ = writeln!(out, "**Implemented:** {}\n", chosen_list(record));
    } else if let Some(j) = record.inaction_justification.as_deref() {
        let _ = writeln!(out, "**No update implemented:** {}\n", para(j));
    }
    let _ = writeln!(out, "**What?** {}\n", para(&record.summary_text));
    for reading in &record.combined_readings {
        let _ = writeln!(out, "- Combined effect: {}", format_reading(reading, metrics));
    }
    if !record.combined_readings.is_empty() {
        out.push('\n');
    }
}

fn table_row(record: &Record, update: &UpdateEntry, metrics: &MetricLookup) -> String {
    let marker = super::status_marker(record, update);
    let which = format!("{} {}{}", update.id, update.which.trim(), marker);
    let effect = super::effect_text(update, metrics);
    format!(
        "| {} | {} | {} | {} | {} |",
        escape_cell(&which),
        escape_cell(&where_cell(update)),
        escape_cell(update.stage.display_name()),
        escape_cell(&update.why),
        escape_cell(&effect),
    )
}
