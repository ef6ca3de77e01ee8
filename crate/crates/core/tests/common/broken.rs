//! Ten logs, each breaking exactly one lint rule.

use feedbacklog::corpus;
use feedbacklog::model::{
    Decimal, Direction, FeedbackLog, LogStatus, MetricOrigin, MetricReading, MetricSpec, ReadingContext,
    UpdateStatus,
};

/// Finalized image log plus a starting metric, so neither L2 nor L9 fires.
pub fn clean_base() -> FeedbackLog {
    let mut log = corpus::image_recognition();
    log.starting_point.metrics.push(MetricSpec {
        name: "top1_accuracy".into(),
        description: "Imagenet1K validation accuracy".into(),
        direction: Direction::HigherBetter,
        unit: "%".into(),
        target: None,
        introduced_by: MetricOrigin::StartingPoint,
    });
    log
}

/// `(rule id, log)` for L1 through L10.
pub fn corpus() -> Vec<(&'static str, FeedbackLog)> {
    let base = clean_base();
    let with = |f: &dyn Fn(&mut FeedbackLog)| {
        let mut log = base.clone();
        f(&mut log);
        log
    };
    vec![
        ("L1", with(&|l| l.starting_point.model_description = "  ".into())),
        ("L2", with(&|l| l.starting_point.metrics.clear())),
        ("L3", with(&|l| {
            l.records[0].chosen_update_ids.insert("U9".into());
        })),
        ("L4", with(&|l| l.records[0].feedback_text.clear())),
        ("L5", with(&|l| l.records[1].candidate_updates[1].why.clear())),
        ("L6", with(&|l| {
            let r = &mut l.records[1];
            r.chosen_update_ids.clear();
            for u in &mut r.candidate_updates {
                u.status = UpdateStatus::Considered;
            }
            r.combined_readings.clear();
        })),
        ("L7", with(&|l| l.records[1].elicitation.stakeholders[0].identifiable = true)),
        ("L8", with(&|l| l.final_summary.as_mut().unwrap().readings.clear())),
        ("L9", with(&|l| {
            l.status = LogStatus::Active;
            l.final_summary = None;
        })),
        ("L10", with(&|l| {
            let rid = l.records[0].id.clone();
            l.records[0].baseline_readings.push(MetricReading::new(
                "robustness",
                Decimal::from_int(30),
                ReadingContext::Baseline { record_id: rid },
                "",
            ));
        })),
    ]
}
