//! Shared helpers for the integration tests.
#![allow(dead_code)]

pub mod broken;
pub mod cli;
pub mod oracle;
pub mod toy_repo;

use std::collections::BTreeSet;

use chrono::{TimeZone, Utc};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use feedbacklog::model::ops::ReadingDraft;
use feedbacklog::model::{
    Comparator, Decimal, Direction, Elicitation, FeedbackLog, MetricOrigin, MetricSpec, NewLog,
    PersonRef, PipelineSnapshot, PipelineStage, StakeholderCategory, StakeholderRef, Target,
    UpdateDraft, UpdateKind,
};

const WORDS: &[&str] = &[
    "robust", "clinician", "dataset", "pipe|cell", "line\nbreak", "quote\"d", "naïve", "ünïcode",
    "<tag>", "a&b", "tab\tbed", "emoji 🚀", "back\\slash", "model", "loss", "prompt", "", "  ",
];

pub fn text(rng: &mut StdRng) -> String {
    let n = rng.gen_range(1..6);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

pub fn nonempty(rng: &mut StdRng) -> String {
    format!("x{}", text(rng))
}

fn category(rng: &mut StdRng) -> StakeholderCategory {
    match rng.gen_range(0..5) {
        0 => StakeholderCategory::EndUser,
        1 => StakeholderCategory::Regulator,
        2 => StakeholderCategory::DomainExpert,
        3 => StakeholderCategory::Internal,
        _ => StakeholderCategory::Other(format!("guild {}", rng.gen_range(0..9))),
    }
}

fn kind(rng: &mut StdRng) -> UpdateKind {
    if rng.gen_bool(0.1) {
        UpdateKind::Other(format!("custom {}", rng.gen_range(0..5)))
    } else {
        UpdateKind::NAMED.choose(rng).unwrap().clone()
    }
}

fn stage(rng: &mut StdRng) -> PipelineStage {
    *[
        PipelineStage::DataCollectionPreTraining,
        PipelineStage::ModelDevelopmentTraining,
        PipelineStage::ModelDeploymentPostTraining,
    ]
    .choose(rng)
    .unwrap()
}

fn decimal(rng: &mut StdRng) -> Decimal {
    Decimal::from_micros(rng.gen_range(-100_000_000i64..100_000_000) * if rng.gen_bool(0.5) { 1 } else { 1000 })
}

/// A structurally valid log produced through the lifecycle API.
pub fn random_log(rng: &mut StdRng) -> FeedbackLog {
    let metric = |rng: &mut StdRng, name: String| {
        let direction = if rng.gen_bool(0.5) { Direction::HigherBetter } else { Direction::LowerBetter };
        let comparator = match direction {
            Direction::HigherBetter => Comparator::GreaterOrEqual,
            Direction::LowerBetter => Comparator::Less,
        };
        MetricSpec {
            name,
            description: text(rng),
            direction,
            unit: ["%", "ms", ""].choose(rng).unwrap().to_string(),
            target: rng.gen_bool(0.5).then(|| Target { comparator, value: decimal(rng) }),
            introduced_by: MetricOrigin::StartingPoint,
        }
    };
    let start_metrics: Vec<MetricSpec> =
        (0..rng.gen_range(0..3)).map(|i| metric(rng, format!("m{i}"))).collect();
    let mut log = FeedbackLog::new(NewLog {
        title: format!("Log {}", nonempty(rng)),
        pipeline_name: text(rng),
        owner: PersonRef::new(format!("owner-{}", rng.gen_range(0..4)), text(rng)),
        starting_point: PipelineSnapshot {
            data_description: nonempty(rng),
            model_description: nonempty(rng),
            metrics_note: text(rng),
            metrics: start_metrics.clone(),
            readings: Vec::new(),
        },
    })
    .unwrap();
    let names: Vec<String> = start_metrics.iter().map(|m| m.name.clone()).collect();
    for _ in 0..rng.gen_range(0..4) {
        let stakeholders = (0..rng.gen_range(0..3))
            .map(|_| StakeholderRef {
                label: nonempty(rng),
                category: category(rng),
                identifiable: false,
                consent_recorded: rng.gen_bool(0.5),
            })
            .collect();
        let rid = log
            .open_record(Elicitation { stakeholders, reason: text(rng), presentation: text(rng) })
            .unwrap();
        log.set_feedback(&rid, &text(rng)).unwrap();
        let n = rng.gen_range(0..4);
        for _ in 0..n {
            let kinds: BTreeSet<UpdateKind> = (0..rng.gen_range(1..3)).map(|_| kind(rng)).collect();
            let mut effect_readings = Vec::new();
            for m in &names {
                if rng.gen_bool(0.3) {
                    effect_readings.push(ReadingDraft::new(m.clone(), decimal(rng), text(rng)));
                }
            }
            log.add_candidate_update(
                &rid,
                UpdateDraft {
                    which: nonempty(rng),
                    kinds,
                    stage: stage(rng),
                    why: nonempty(rng),
                    effect_readings,
                    effect_note: nonempty(rng),
                    introduces: Vec::new(),
                },
            )
            .unwrap();
        }
        if n > 0 && rng.gen_bool(0.2) {
            log.reject_update(&rid, "U1").unwrap();
        }
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let chosen: Vec<String> = (2..=n).filter(|_| rng.gen_bool(0.7)).map(|k| format!("U{k}")).collect();
                let chosen = if chosen.is_empty() { vec![format!("U{n}")] } else { chosen };
                log.choose_updates(&rid, &chosen, &nonempty(rng), &[]).unwrap();
            }
            1 => log.record_inaction(&rid, &nonempty(rng)).unwrap(),
            _ => {}
        }
    }
    log.created_at = Utc.timestamp_opt(rng.gen_range(1_500_000_000..1_900_000_000), 0).unwrap();
    log.updated_at = log.created_at;
    log
}

fn words_of(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.len() > 2)
        .map(str::to_string)
        .collect()
}

const FILTERS: &[&str] = &[
    "kind:dataset", "kind:metrics", "kind:interface_ux", "kind:parameter_space", "kind:loss_function",
    "stage:training", "stage:pre_training", "stage:post_training", "stage:deployment",
    "category:domain_expert", "category:internal", "category:regulator", "category:end_user",
    "stakeholder:clinician", "stakeholder:Hypothetical", "stakeholder:engineers",
    "metric:robustness", "metric:click_through_rate", "status:active", "status:finalized",
    "owner:image-analyst", "owner:asthma-practitioner",
];

/// A query over the logs' own vocabulary. Two in three queries are built
/// around one concrete update (its words and its log, record and update
/// attributes as filters) so that most of them have hits; the rest mix
/// arbitrary words and filters.
pub fn random_query(rng: &mut StdRng, logs: &[FeedbackLog]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let updates: Vec<_> = logs
        .iter()
        .flat_map(|l| l.records.iter().flat_map(move |r| r.candidate_updates.iter().map(move |u| (l, r, u))))
        .collect();
    if !updates.is_empty() && rng.gen_range(0..3) < 2 {
        let (log, record, update) = *updates.choose(rng).unwrap();
        let texts = [update.which.as_str(), update.why.as_str(), record.feedback_text.as_str(), log.title.as_str()];
        let words = words_of(texts.choose(rng).unwrap());
        for _ in 0..rng.gen_range(0..3) {
            if let Some(w) = words.choose(rng) {
                parts.push(w.clone());
            }
        }
        let mut filters = vec![
            format!("status:{}", log.status.as_str()),
            format!("owner:{}", log.owner.id),
            format!("stage:{}", update.stage.key()),
        ];
        filters.extend(update.kinds.iter().map(|k| format!("kind:{}", k.key())));
        filters.extend(record.elicitation.stakeholders.iter().map(|s| format!("category:{}", s.category.key())));
        filters.extend(
            record.elicitation.stakeholders.iter().flat_map(|s| words_of(&s.label)).map(|w| format!("stakeholder:{w}")),
        );
        filters.extend(log.metric_specs().map(|m| format!("metric:{}", m.name)));
        filters.retain(|f| !f.contains(char::is_whitespace) && !f.ends_with(':'));
        for _ in 0..rng.gen_range(0..3) {
            parts.push(filters.choose(rng).unwrap().clone());
        }
    } else {
        let mut vocab: Vec<String> = logs.iter().flat_map(|l| words_of(&serde_json::to_string(l).unwrap())).collect();
        vocab.sort();
        vocab.dedup();
        for _ in 0..rng.gen_range(0..3) {
            parts.push(vocab.choose(rng).unwrap().clone());
        }
        for _ in 0..rng.gen_range(0..3) {
            parts.push(FILTERS.choose(rng).unwrap().to_string());
        }
        if parts.is_empty() {
            parts.push(vocab.choose(rng).unwrap().clone());
        }
    }
    if parts.is_empty() {
        parts.push(format!("status:{}", logs[0].status.as_str()));
    }
    parts.shuffle(rng);
    parts.join(" ")
}
