//! The four reference logs, built through the public lifecycle API.
//!
//! They are also checked in as canonical files under `fixtures/`; the
//! `fixture_files` integration test keeps the two in sync.
//!
//! - [`asthma`]: conversational agent for asthma patients, two records, no
//!   starting metrics, still active.
//! - [`image_recognition`]: automotive image classifier, finalized, with a
//!   robustness metric introduced by an update and read at every step.
//! - [`recommender`]: TV content recommendation with one UX/dataset update.
//! - [`sexual_health`]: treatment eligibility questionnaire, changed before
//!   any model exists.

use std::collections::BTreeSet;

use chrono::{DateTime, TimeZone, Utc};

use crate::model::ops::ReadingDraft;
use crate::model::{
    Comparator, Decimal, Direction, Elicitation, FeedbackLog, MetricOrigin, MetricReading,
    MetricSpec, NewLog, PersonRef, PipelineSnapshot, PipelineStage, ReadingContext,
    StakeholderCategory, StakeholderRef, Target, UpdateDraft, UpdateKind,
};

/// Timestamp stamped on every corpus log so the canonical bytes are stable.
pub fn fixture_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2023, 6, 1, 9, 0, 0).unwrap()
}

fn stamp(mut log: FeedbackLog) -> FeedbackLog {
    log.created_at = fixture_time();
    log.updated_at = fixture_time();
    log
}

fn kinds(ks: &[UpdateKind]) -> BTreeSet<UpdateKind> {
    ks.iter().cloned().collect()
}

fn row(which: &str, ks: &[UpdateKind], stage: PipelineStage, why: &str, effect: &str) -> UpdateDraft {
    UpdateDraft {
        which: which.into(),
        kinds: kinds(ks),
        stage,
        why: why.into(),
        effect_readings: Vec::new(),
        effect_note: effect.into(),
        introduces: Vec::new(),
    }
}

fn pct(v: i64) -> Decimal {
    Decimal::from_int(v)
}

fn elicit(stakeholders: Vec<StakeholderRef>, reason: &str, presentation: &str) -> Elicitation {
    Elicitation {
        stakeholders,
        reason: reason.into(),
        presentation: presentation.into(),
    }
}

pub fn asthma() -> FeedbackLog {
    let mut log = FeedbackLog::new(NewLog {
        title: "Asthma Conversational Agent".into(),
        pipeline_name: "asthma-whatsapp-agent".into(),
        owner: PersonRef::new("asthma-practitioner", "Asthma project practitioner"),
        starting_point: PipelineSnapshot {
            data_description: "Data of asthma patients, with target as indicator for onset of asthma arrests.".into(),
            model_description: "Conversational Agent that combines pre-scripted options and model score outputs.".into(),
            metrics_note: "No statistical metric yet, objective is to converse with a patient and aid them in managing their conditions".into(),
            ..Default::default()
        },
    })
    .expect("asthma log");

    let clinician = || StakeholderRef::anonymous("Clinician", StakeholderCategory::DomainExpert);

    let r1 = log
        .open_record(elicit(
            vec![clinician()],
            "Need clinician insight to understand what details an effective conversational agent should capture.",
            "Intent of project explained. Clinician was specifically asked to capture all relevant details of an asthma consultation through a mock patient-physician interview.",
        ))
        .expect("R1");
    log.set_feedback(
        &r1,
        "Received list of questions that clinicians/patients typically ask during clinic sessions.",
    )
    .expect("feedback");
    log.add_candidate_update(
        &r1,
        row(
            "Add details to metrics",
            &[UpdateKind::Metrics],
            PipelineStage::ModelDeploymentPostTraining,
            "Model remains flexible",
            "Model able to provide required details",
        ),
    )
    .expect("R1/U1");
    log.add_candidate_update(
        &r1,
        row(
            "Make dataset of details and fine tune model",
            &[UpdateKind::Dataset],
            PipelineStage::ModelDevelopmentTraining,
            "Model updated to new information",
            "Unstable training results",
        ),
    )
    .expect("R1/U2");
    log.choose_updates(
        &r1,
        &["U1".into()],
        "Ecosystem update as part of metrics: added requirements to model to be able to answer certain questions.",
        &[],
    )
    .expect("R1 choose");

    let r2 = log
        .open_record(elicit(
            vec![clinician()],
            "Understanding that the optimal conversational chatbot does not face the same constraints as a clinician and so can ask more detailed questions or spend more time on explanations.",
            "Clinician asked to explain all information they would like to ask/provide, time-permitting.",
        ))
        .expect("R2");
    log.set_feedback(
        &r2,
        "Clinician provided a list of questions to obtain basic patient information, which can make a significant difference to health outcomes, and does not get communicated during clinician visits because of time limitations.",
    )
    .expect("feedback");
    log.add_candidate_update(
        &r2,
        row(
            "Include basic details in dataset",
            &[UpdateKind::Dataset],
            PipelineStage::ModelDevelopmentTraining,
            "Model updated to new information without manual engineering",
            "Model reliably provides complete answers",
        ),
    )
    .expect("R2/U1");
    log.choose_updates(
        &r2,
        &["U1".into()],
        "Created a base of fundamental information that can be queried and explained to make it easier for patients to learn the basics of their condition.",
        &[],
    )
    .expect("R2 choose");
    stamp(log)
}

pub fn robustness_spec() -> MetricSpec {
    MetricSpec {
        name: "robustness".into(),
        description: "Accuracy on the Imagenet-A automotive test set".into(),
        direction: Direction::HigherBetter,
        unit: "%".into(),
        target: Some(Target {
            comparator: Comparator::Greater,
            value: pct(50),
        }),
        introduced_by: MetricOrigin::StartingPoint,
    }
}

/// The image recognition log up to (not including) finalization.
pub fn image_recognition_unfinalized() -> FeedbackLog {
    image_recognition_with(
        StakeholderRef::anonymous("Hypothetical external assessor", StakeholderCategory::Regulator),
        StakeholderRef::anonymous("Hypothetical compliance team", StakeholderCategory::Internal),
    )
}

fn image_recognition_with(assessor: StakeholderRef, compliance: StakeholderRef) -> FeedbackLog {
    let mut log = FeedbackLog::new(NewLog {
        title: "Image Recognition".into(),
        pipeline_name: "automotive-image-recognition".into(),
        owner: PersonRef::new("image-analyst", "Image recognition analyst"),
        starting_point: PipelineSnapshot {
            data_description: "Imagenet1K for training and validation datasets, consisting of 1000 image classes.".into(),
            model_description: "Convolutional Neural Network (ResNet50).".into(),
            metrics_note: "None defined yet.".into(),
            ..Default::default()
        },
    })
    .expect("image log");

    let r1 = log
        .open_record(elicit(
            vec![assessor],
            "Vested in the model. Require regulatory approval to use image recognition model in practice.",
            "Asked for minimum benchmark performance, similar to the 80 percent disparate impact rule.",
        ))
        .expect("R1");
    log.set_feedback(
        &r1,
        "Received a dataset containing adversarial examples of automotive vehicles, along with a minimum accuracy required for this dataset to test the model's robustness.",
    )
    .expect("feedback");
    log.add_candidate_update(
        &r1,
        row(
            "Imagenet-A with relevant automotive classes",
            &[UpdateKind::Dataset],
            PipelineStage::DataCollectionPreTraining,
            "Tests model robustness",
            "Testing dataset for model",
        ),
    )
    .expect("R1/U1");
    let mut minimum = row(
        "Minimum accuracy >50%",
        &[UpdateKind::Metrics],
        PipelineStage::ModelDevelopmentTraining,
        "Required for regulatory approval",
        "Benchmark when testing model",
    );
    minimum.introduces = vec![robustness_spec()];
    log.add_candidate_update(&r1, minimum).expect("R1/U2");
    log.choose_updates(
        &r1,
        &["U1".into(), "U2".into()],
        "Dataset update: provided new dataset to test the model's robustness when recognising automotive vehicles. Ecosystem update as part of metrics: added requirement that model should achieve >50% accuracy (robustness) on test dataset.",
        &[],
    )
    .expect("R1 choose");

    let r2 = log
        .open_record(elicit(
            vec![compliance],
            "Need to ensure model meets external requirements set by industry regulators, as well as internal company policies.",
            "Presented with current performance on testing dataset recommended by regulator, along with example predictions.",
        ))
        .expect("R2");
    log.add_reading(MetricReading::new(
        "robustness",
        pct(34),
        ReadingContext::Baseline {
            record_id: r2.clone(),
        },
        "current model on Imagenet-A",
    ))
    .expect("baseline");
    log.set_feedback(
        &r2,
        "Current robustness (34%) isn't sufficient to meet requirements. In addition, the model is overconfident in its predictions which may cause serious accidents that are unacceptable under company policy.",
    )
    .expect("feedback");
    let measured = |which: &str, kind: UpdateKind, stage: PipelineStage, why: &str, note: &str, value: i64| {
        let mut draft = row(which, &[kind], stage, why, note);
        draft.effect_readings = vec![ReadingDraft::new("robustness", pct(value), "")];
        draft
    };
    log.add_candidate_update(
        &r2,
        measured(
            "ResNet-101",
            UpdateKind::ParameterSpace,
            PipelineStage::DataCollectionPreTraining,
            "Identify complex features",
            "Robustness 39%",
            39,
        ),
    )
    .expect("R2/U1");
    log.add_candidate_update(
        &r2,
        measured(
            "MEAL V2",
            UpdateKind::LossFunction,
            PipelineStage::ModelDevelopmentTraining,
            "Soften labels",
            "Robustness: 47%",
            47,
        ),
    )
    .expect("R2/U2");
    log.add_candidate_update(
        &r2,
        measured(
            "CutMix",
            UpdateKind::Dataset,
            PipelineStage::DataCollectionPreTraining,
            "Background invariance",
            "Robustness: 48%",
            48,
        ),
    )
    .expect("R2/U3");
    log.choose_updates(
        &r2,
        &["U1".into(), "U3".into()],
        "Used ResNet-101 model with CutMix for data augmentation, since when both updates are used the robustness is 55%, which exceeds the minimum requirement of 50%.",
        &[ReadingDraft::new("robustness", pct(55), "ResNet-101 with CutMix")],
    )
    .expect("R2 choose");
    stamp(log)
}

/// The final snapshot of the image recognition log with the given
/// robustness reading.
pub fn image_final_snapshot(robustness: Decimal) -> PipelineSnapshot {
    PipelineSnapshot {
        data_description: "Imagenet1K augmented with CutMix for training, Imagenet-A with relevant automotive classes for testing.".into(),
        model_description: "Convolutional Neural Network (ResNet-101).".into(),
        metrics_note: String::new(),
        metrics: Vec::new(),
        readings: vec![MetricReading::new(
            "robustness",
            robustness,
            ReadingContext::Final,
            "on Imagenet-A testing dataset",
        )],
    }
}

pub fn image_recognition() -> FeedbackLog {
    let mut log = image_recognition_unfinalized();
    log.finalize(image_final_snapshot(pct(55))).expect("finalize");
    stamp(log)
}

/// The image recognition log with named, consenting stakeholders; input for
/// anonymization.
pub fn image_recognition_identified() -> FeedbackLog {
    let named = |label: &str, category| StakeholderRef {
        label: label.into(),
        category,
        identifiable: true,
        consent_recorded: true,
    };
    let mut log = image_recognition_with(
        named("Dana Whitfield", StakeholderCategory::Regulator),
        named("Priya Raman", StakeholderCategory::Internal),
    );
    log.records[0].feedback_text.push_str(" Dana Whitfield asked for a follow-up review.");
    log.records[1].elicitation.reason.push_str(" Priya Raman leads the review.");
    log.finalize(image_final_snapshot(pct(55))).expect("finalize");
    stamp(log)
}

pub fn recommender() -> FeedbackLog {
    let rate = |name: &str, description: &str| MetricSpec {
        name: name.into(),
        description: description.into(),
        direction: Direction::HigherBetter,
        unit: "%".into(),
        target: None,
        introduced_by: MetricOrigin::StartingPoint,
    };
    let mut log = FeedbackLog::new(NewLog {
        title: "TV Content Recommendation".into(),
        pipeline_name: "tv-recommendations".into(),
        owner: PersonRef::new("streaming-ml-lead", "Streaming ML lead"),
        starting_point: PipelineSnapshot {
            data_description: "User watch history of TV content (films, TV series, sports events), including time of day something was watched and the percentage of the content that was watched. User details, such as time being subscribed to the service.".into(),
            model_description: "Model uses a Convolutional Neural Network architecture to provide personalised recommendations for what to watch next.".into(),
            metrics_note: "Click-through rates of top-N provided recommendations and the watch percentage of the recommended content.".into(),
            metrics: vec![
                rate("click_through_rate", "Click-through rate of the top-N provided recommendations"),
                rate("watch_percentage", "Share of recommended content that was watched"),
            ],
            readings: Vec::new(),
        },
    })
    .expect("recommender log");

    let r1 = log
        .open_record(elicit(
            vec![
                StakeholderRef::anonymous("Machine Learning Engineers", StakeholderCategory::Internal),
                StakeholderRef::anonymous("Data Scientists", StakeholderCategory::Internal),
            ],
            "Poor performance on metrics, suggesting users were not watching the content that was recommended.",
            "Model metrics in the form of click through rates and watch percentages, and a test interface to view what content gets recommended based on different watch histories.",
        ))
        .expect("R1");
    log.set_feedback(
        &r1,
        "The evaluation metrics used were not adequate. If someone had watched what was recommended to them, but only watched the first half, this would be deemed a successful recommendation. Yet there is no indication that the user appreciated the recommendation or enjoyed the content.",
    )
    .expect("feedback");
    log.add_candidate_update(
        &r1,
        row(
            "'Like' buttons were added to content recommendations",
            &[UpdateKind::InterfaceUx, UpdateKind::Dataset],
            PipelineStage::ModelDeploymentPostTraining,
            "To provide user supervision for the recommendation algorithm",
            "Increased user click through rate and watch time",
        ),
    )
    .expect("R1/U1");
    log.choose_updates(
        &r1,
        &["U1".into()],
        "In order to better discern whether a particular recommendation was effective, the users of the TV service were given the ability to \u{201c}Like\u{201d} or \u{201c}Dislike\u{201d} particular content. This feedback was incorporated as a feature to the machine learning model, which tailored the machine learning model according to what the user liked and disliked. Users started to watch the recommended content more than they did previously.",
        &[],
    )
    .expect("R1 choose");
    stamp(log)
}

pub fn sexual_health() -> FeedbackLog {
    let metric = |name: &str, description: &str, direction, unit: &str| MetricSpec {
        name: name.into(),
        description: description.into(),
        direction,
        unit: unit.into(),
        target: None,
        introduced_by: MetricOrigin::StartingPoint,
    };
    let mut log = FeedbackLog::new(NewLog {
        title: "Sexual Health".into(),
        pipeline_name: "chlamydia-treatment-eligibility".into(),
        owner: PersonRef::new("sexual-health-team", "Sexual health digital team"),
        starting_point: PipelineSnapshot {
            data_description: "NHS standards provide mandatory questions which determine whether treatment can be given or not. For example, certain treatments for forbidden when patients are pregnant, or suffer from certain allergies.\nQualitative data: user requirements from generative user research, including those who are gender diverse or may have a learning disability.\nQuantitative data: number of misunderstandings from each questions/answer option during user testing.".into(),
            model_description: "Model objective is to decide which chlamydia positive patients are eligible to get chlamydia treatment. Through a range of online questions with multiple choice answer options (personalised risk assessment), it checks on medication use, allergies, and other variables that could impact the decision.".into(),
            metrics_note: "Randomized Control Trial will be conducted across the UK to measure safety and effectiveness in comparison to regular offline care. Number of true positives and negatives, false positives and negatives of prescriptions that the model suggested, compared to offline prescriptions by a clinician.".into(),
            metrics: vec![
                metric("time_to_treatment", "Time between testing positive and receiving treatment", Direction::LowerBetter, "days"),
                metric("people_treated", "Number of people receiving treatment", Direction::HigherBetter, "people"),
                metric("clinician_time", "Time clinicians spent on patient (offline and online support)", Direction::LowerBetter, "minutes"),
            ],
            readings: Vec::new(),
        },
    })
    .expect("sexual health log");

    let r1 = log
        .open_record(elicit(
            vec![
                StakeholderRef::anonymous("Patients with chlamydia", StakeholderCategory::EndUser),
                StakeholderRef::anonymous("Sexual health clinicians", StakeholderCategory::DomainExpert),
                StakeholderRef::anonymous("Health psychologists", StakeholderCategory::DomainExpert),
            ],
            "Legal requirements, safety risks (e.g. prescribing this treatment to people who are allergic/pregnant can severely impact health).",
            "Exploratory but also visually (at a later stage showing the questions and decision tree) to capture all relevant details and questions that needed to be included in the risk assessment/online consultation.",
        ))
        .expect("R1");
    log.set_feedback(
        &r1,
        "For vulnerable demographic groups, unaccompanied online consultations can be dangerous because the patient might not interpret the question correctly and may not know the information requested.",
    )
    .expect("feedback");
    log.add_candidate_update(
        &r1,
        row(
            "'I don't know' option was added to applicable questions",
            &[UpdateKind::Other("Forms and Decision Charts".into())],
            PipelineStage::DataCollectionPreTraining,
            "To ensure individuals who are unsure do not select a misleading option",
            "To be measured, but expect fewer false negatives",
        ),
    )
    .expect("R1/U1");
    log.choose_updates(
        &r1,
        &["U1".into()],
        "This prompted the inclusion of a \u{2018}don\u{2019}t know\u{2019} answer option which would lead to a help screen. In some cases, users are asked to call the helpline and discuss with a sexual health expert, allowing the interview process to proceed in a way that is more reliable.",
        &[],
    )
    .expect("R1 choose");
    stamp(log)
}

/// All four reference logs, ordered by id.
pub fn all() -> Vec<FeedbackLog> {
    let mut logs = vec![asthma(), image_recognition(), recommender(), sexual_health()];
    logs.sort_by(|a, b| a.id.cmp(&b.id));
    logs
}
