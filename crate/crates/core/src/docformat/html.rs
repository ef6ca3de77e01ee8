use std::fmt::Write;

use super::{chosen_list, effect_text, format_reading, stakeholder_line, status_marker, where_cell, MetricLookup};
use crate::model::{FeedbackLog, LogStatus, PipelineSnapshot, Record, UpdateStatus};

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Escaped text with line breaks kept as `<br>`.
fn text(s: &str) -> String {
    let t = s.trim();
    if t.is_empty() {
        return "<em>(not recorded)</em>".into();
    }
    t.replace("\r\n", "\n")
        .split('\n')
        .map(escape)
        .collect::<Vec<_>>()
        .join("<br>")
}

const STYLE: &str = "body{font-family:sans-serif;max-width:60rem;margin:2rem auto;padding:0 1rem;color:#222}\
section{border:1px solid #ccc;border-radius:6px;padding:0 1rem 1rem;margin:1rem 0}\
table{border-collapse:collapse;width:100%}th,td{border:1px solid #bbb;padding:.3rem;vertical-align:top;text-align:left}\
tr.implemented{background:#e8f6e8}tr.rejected{color:#888}";

pub fn export_html(log: &FeedbackLog) -> String {
    let metrics = MetricLookup::new(log);
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    let _ = writeln!(out, "<title>{}</title>", escape(log.title.trim()));
    let _ = writeln!(out, "<style>{STYLE}</style>");
    out.push_str("</head>\n<body>\n<header>\n");
    let _ = writeln!(out, "<h1>{}</h1>", escape(log.title.trim()));
    let _ = writeln!(
        out,
        "<p>Log <code>{}</code> &middot; pipeline {} &middot; owner {} &middot; status {} &middot; revision {}</p>",
        escape(&log.id),
        escape(log.pipeline_name.trim()),
        escape(&log.owner.display_name),
        log.status.as_str(),
        log.revision
    );
    out.push_str("</header>\n");

    out.push_str("<section class=\"starting-point\">\n<h2>Starting Point</h2>\n");
    snapshot(&mut out, &log.starting_point, &metrics, "Metrics");
    out.push_str("</section>\n");

    for record in &log.records {
        record_section(&mut out, record, &metrics);
    }

    if log.status == LogStatus::Finalized {
        if let Some(summary) = &log.final_summary {
            out.push_str("<section class=\"final-summary\">\n<h2>Final Summary</h2>\n");
            snapshot(&mut out, summary, &metrics, "Metric performance");
            out.push_str("</section>\n");
        }
    }
    out.push_str("</body>\n</html>\n");
    out
}

fn snapshot(out: &mut String, snap: &PipelineSnapshot, metrics: &MetricLookup, label: &str) {
    let _ = writeln!(out, "<p><strong>Data:</strong> {}</p>", text(&snap.data_description));
    let _ = writeln!(out, "<p><strong>Model:</strong> {}</p>", text(&snap.model_description));
    let note = snap.metrics_note.trim();
    let _ = write!(out, "<p><strong>{label}:</strong> ");
    if note.is_empty() && snap.metrics.is_empty() && snap.readings.is_empty() {
        out.push_str("None defined.</p>\n");
        return;
    }
    out.push_str(&escape(note));
    out.push_str("</p>\n");
    if !snap.metrics.is_empty() || !snap.readings.is_empty() {
        out.push_str("<ul>\n");
        for spec in &snap.metrics {
            let _ = writeln!(out, "<li>{}</li>", escape(&super::describe_metric(spec)));
        }
        for reading in &snap.readings {
            let _ = writeln!(out, "<li>{}</li>", escape(&format_reading(reading, metrics)));
        }
        out.push_str("</ul>\n");
    }
}

fn record_section(out: &mut String, record: &Record, metrics: &MetricLookup) {
    let _ = writeln!(
        out,
        "<section class=\"record\" id=\"{}\">\n<h2>Record {}</h2>",
        escape(&record.id),
        record.number()
    );
    out.push_str("<h3>Elicitation</h3>\n");
    let who = stakeholder_line(&record.elicitation.stakeholders);
    let _ = writeln!(
        out,
        "<p><strong>Who and why?</strong> {}{}</p>",
        if who.is_empty() { String::new() } else { format!("{}. ", escape(&who)) },
        text(&record.elicitation.reason)
    );
    let _ = writeln!(out, "<p><strong>How?</strong> {}</p>", text(&record.elicitation.presentation));
    for reading in &record.baseline_readings {
        let _ = writeln!(out, "<p>Baseline: {}</p>", escape(&format_reading(reading, metrics)));
    }

    out.push_str("<h3>Feedback</h3>\n");
    let _ = writeln!(out, "<p><strong>What?</strong> {}</p>", text(&record.feedback_text));

    out.push_str("<h3>Incorporation</h3>\n<table class=\"incorporation\">\n<thead><tr>");
    for heading in ["Which?", "Where?", "When?", "Why?", "Effect?"] {
        let _ = write!(out, "<th>{heading}</th>");
    }
    out.push_str("</tr></thead>\n<tbody>\n");
    for update in &record.candidate_updates {
        let class = match update.status {
            UpdateStatus::Implemented => "implemented",
            UpdateStatus::Considered => "considered",
            UpdateStatus::Rejected => "rejected",
        };
        let which = format!("{} {}{}", update.id, update.which.trim(), status_marker(record, update));
        let _ = writeln!(
            out,
            "<tr class=\"{class}\"><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
            text(&which),
            text(&where_cell(update)),
            text(update.stage.display_name()),
            text(&update.why),
            text(&effect_text(update, metrics)),
        );
    }
    out.push_str("</tbody>\n</table>\n");

    out.push_str("<h3>Summary</h3>\n");
    if !record.chosen_update_ids.is_empty() {
        let _ = writeln!(out, "<p><strong>Implemented:</strong> {}</p>", escape(&chosen_list(record)));
    } else if let Some(j) = record.inaction_justification.as_deref() {
        let _ = writeln!(out, "<p><strong>No update implemented:</strong> {}</p>", text(j));
    }
    let _ = writeln!(out, "<p><strong>What?</strong> {}</p>", text(&record.summary_text));
    for reading in &record.combined_readings {
        let _ = writeln!(out, "<p>Combined effect: {}</p>", escape(&format_reading(reading, metrics)));
    }
    out.push_str("</section>\n");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("<a href=\"x\">'&'</a>"), "&lt;a href=&quot;x&quot;&gt;&#39;&amp;&#39;&lt;/a&gt;");
        assert_eq!(text("one\ntwo<"), "one<br>two&lt;");
    }
}
