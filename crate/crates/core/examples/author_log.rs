//! Builds a small feedback log through the lifecycle operations and prints
//! its canonical JSON.
//!
//! cargo run --example author_log

use std::collections::BTreeSet;

use feedbacklog::docformat;
use feedbacklog::model::ops::ReadingDraft;
use feedbacklog::model::{
    Comparator, Decimal, Direction, Elicitation, FeedbackLog, MetricOrigin, MetricReading, MetricSpec,
    NewLog, PersonRef, PipelineSnapshot, PipelineStage, ReadingContext, StakeholderCategory,
    StakeholderRef, Target, UpdateDraft, UpdateKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut log = FeedbackLog::new(NewLog {
        title: "Loan default model".into(),
        pipeline_name: "credit-scoring".into(),
        owner: PersonRef::new("maria", "Maria"),
        starting_point: PipelineSnapshot {
            data_description: "Five years of repayment history".into(),
            model_description: "Logistic regression on 40 features".into(),
            ..Default::default()
        },
    })?;

    log.add_metric(MetricSpec {
        name: "recall".into(),
        description: "Recall on defaulted loans".into(),
        direction: Direction::HigherBetter,
        unit: "%".into(),
        target: Some(Target { comparator: Comparator::GreaterOrEqual, value: Decimal::from_int(80) }),
        introduced_by: MetricOrigin::StartingPoint,
    })?;
    log.add_reading(MetricReading::new("recall", Decimal::from_int(72), ReadingContext::StartingPoint, ""))?;

    let rid = log.open_record(Elicitation {
        stakeholders: vec![StakeholderRef::anonymous("Loan officers", StakeholderCategory::DomainExpert)],
        reason: "Quarterly model review".into(),
        presentation: "Confusion matrix and ten misclassified applications".into(),
    })?;
    log.set_feedback(&rid, "Self-employed applicants are flagged far too often.")?;
    let uid = log.add_candidate_update(
        &rid,
        UpdateDraft {
            which: "Add income-volatility feature".into(),
            kinds: BTreeSet::from([UpdateKind::Dataset]),
            stage: PipelineStage::DataCollectionPreTraining,
            why: "Officers judge self-employed income by its stability".into(),
            effect_readings: vec![ReadingDraft::new("recall", Decimal::from_int(81), "")],
            effect_note: String::new(),
            introduces: Vec::new(),
        },
    )?;
    log.choose_updates(&rid, &[uid], "Added the feature; recall now meets the target.", &[])?;

    let findings = log.finalize(PipelineSnapshot {
        data_description: "Repayment history plus income volatility".into(),
        model_description: "Logistic regression on 41 features".into(),
        readings: vec![MetricReading::new("recall", Decimal::from_int(81), ReadingContext::Final, "")],
        ..Default::default()
    })?;
    eprintln!("finalized with {} findings", findings.len());

    print!("{}", String::from_utf8(docformat::serialize(&log))?);
    Ok(())
}
