//! Lints the reference logs and a log with gaps.
//!
//! cargo run --example lint_report

use feedbacklog::{corpus, lint, validate};

fn main() {
    for log in corpus::all() {
        let findings = validate(&log);
        println!("{}: {} errors, {} findings", log.id, lint::error_count(&findings), findings.len());
    }

    let mut gappy = corpus::image_recognition();
    gappy.starting_point.model_description.clear();
    gappy.records[1].candidate_updates[0].why.clear();
    gappy.records[0].elicitation.stakeholders[0].identifiable = true;
    println!("\nedited copy:");
    for f in validate(&gappy) {
        println!("  {f}");
    }

    println!("\nrules:");
    for rule in lint::CATALOG.iter() {
        println!("  {:<4} {:<8} {}", rule.id, rule.severity, rule.summary);
    }
}
