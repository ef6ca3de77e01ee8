//! The feedback log document model.
//!
//! A [`FeedbackLog`] bookends stakeholder involvement with a starting
//! [`PipelineSnapshot`] and an optional final one. Between them sits an
//! append-only list of [`Record`]s, each one a single practitioner and
//! stakeholder interaction: how feedback was elicited, what it said, which
//! updates were considered (the incorporation table) and which were chosen.
//!
//! Lifecycle operations live in [`ops`], metric arithmetic in [`metrics`],
//! and the structural invariant check used by the parser in [`structure`].

mod decimal;
mod error;
pub mod metrics;
pub mod ops;
pub mod structure;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use decimal::{Decimal, DecimalError, MAX_WHOLE};
pub use error::ModelError;
pub use metrics::{ReadingPosition, TargetCheck};
pub use ops::{NewLog, UpdateDraft};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersonRef {
    pub id: String,
    pub display_name: String,
}

impl PersonRef {
    pub fn new(id: impl Into<String>, display_name: impl Into<String>) -> Self {
        PersonRef {
            id: id.into(),
            display_name: display_name.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogStatus {
    Draft,
    Active,
    Finalized,
}

impl LogStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LogStatus::Draft => "draft",
            LogStatus::Active => "active",
            LogStatus::Finalized => "finalized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackLog {
    pub id: String,
    pub title: String,
    pub pipeline_name: String,
    pub owner: PersonRef,
    pub status: LogStatus,
    pub starting_point: PipelineSnapshot,
    pub records: Vec<Record>,
    pub final_summary: Option<PipelineSnapshot>,
    /// Metrics introduced by an update rather than declared up front.
    pub metrics: Vec<MetricSpec>,
    pub schema_version: u32,
    pub revision: u64,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

/// Data, model and metrics at one end of the stakeholder involvement.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSnapshot {
    pub data_description: String,
    pub model_description: String,
    /// Free-text remark on metrics, e.g. why none are defined yet.
    #[serde(default)]
    pub metrics_note: String,
    pub metrics: Vec<MetricSpec>,
    #[serde(default)]
    pub readings: Vec<MetricReading>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterOrEqual,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessOrEqual,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Greater => ">",
            Comparator::GreaterOrEqual => ">=",
            Comparator::Less => "<",
            Comparator::LessOrEqual => "<=",
        }
    }

    pub fn holds(self, value: Decimal, threshold: Decimal) -> bool {
        match self {
            Comparator::Greater => value > threshold,
            Comparator::GreaterOrEqual => value >= threshold,
            Comparator::Less => value < threshold,
            Comparator::LessOrEqual => value <= threshold,
        }
    }

    pub fn agrees_with(self, direction: Direction) -> bool {
        matches!(
            (direction, self),
            (Direction::HigherBetter, Comparator::Greater | Comparator::GreaterOrEqual)
                | (Direction::LowerBetter, Comparator::Less | Comparator::LessOrEqual)
        )
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            ">" => Ok(Comparator::Greater),
            ">=" | "≥" => Ok(Comparator::GreaterOrEqual),
            "<" => Ok(Comparator::Less),
            "<=" | "≤" => Ok(Comparator::LessOrEqual),
            other => Err(format!("unknown comparator {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub comparator: Comparator,
    pub value: Decimal,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.comparator.symbol(), self.value)
    }
}

impl FromStr for Target {
    type Err = String;

    /// `>50`, `<= 0.2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s
            .find(|c: char| !matches!(c, '<' | '>' | '=' | '≥' | '≤'))
            .unwrap_or(s.len());
        let comparator: Comparator = s[..split].parse()?;
        let value: Decimal = s[split..].trim().parse().map_err(|e: DecimalError| e.to_string())?;
        Ok(Target { comparator, value })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "higher_better" | "higher" => Ok(Direction::HigherBetter),
            "lower_better" | "lower" => Ok(Direction::LowerBetter),
            other => Err(format!("unknown direction {other:?}")),
        }
    }
}

/// Where a metric entered the log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricOrigin {
    StartingPoint,
    Update { record_id: String, update_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub name: String,
    pub description: String,
    pub direction: Direction,
    pub unit: String,
    pub target: Option<Target>,
    pub introduced_by: MetricOrigin,
}

/// Point in the document a reading was taken at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReadingContext {
    StartingPoint,
    Baseline { record_id: String },
    AfterUpdate { record_id: String, update_id: String },
    /// Effect of a record's chosen updates applied together.
    Combined { record_id: String },
    Final,
}

impl fmt::Display for ReadingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadingContext::StartingPoint => f.write_str("start"),
            ReadingContext::Baseline { record_id } => write!(f, "baseline:{record_id}"),
            ReadingContext::AfterUpdate {
                record_id,
                update_id,
            } => write!(f, "after:{record_id}/{update_id}"),
            ReadingContext::Combined { record_id } => write!(f, "combined:{record_id}"),
            ReadingContext::Final => f.write_str("final"),
        }
    }
}

impl FromStr for ReadingContext {
    type Err = String;

    /// Accepts `start`, `baseline:R2`, `after:R2/U3`, `combined:R2` and `final`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad reading context {s:?} (expected start, baseline:R<n>, after:R<n>/U<n>, combined:R<n> or final)");
        match s {
            "start" | "starting_point" => return Ok(ReadingContext::StartingPoint),
            "final" => return Ok(ReadingContext::Final),
            _ => {}
        }
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        match tag {
            "baseline" if is_record_id(rest) => Ok(ReadingContext::Baseline {
                record_id: rest.to_string(),
            }),
            "combined" if is_record_id(rest) => Ok(ReadingContext::Combined {
                record_id: rest.to_string(),
            }),
            "after" | "after_update" => {
                let (r, u) = rest.split_once('/').ok_or_else(bad)?;
                if is_record_id(r) && is_update_id(u) {
                    Ok(ReadingContext::AfterUpdate {
                        record_id: r.to_string(),
                        update_id: u.to_string(),
                    })
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricReading {
    pub metric_name: String,
    pub value: Decimal,
    pub context: ReadingContext,
    pub note: String,
}

impl MetricReading {
    pub fn new(
        metric_name: impl Into<String>,
        value: Decimal,
        context: ReadingContext,
        note: impl Into<String>,
    ) -> Self {
        MetricReading {
            metric_name: metric_name.into(),
            value,
            context,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub id: String,
    pub elicitation: Elicitation,
    pub feedback_text: String,
    pub candidate_updates: Vec<UpdateEntry>,
    pub chosen_update_ids: BTreeSet<String>,
    pub summary_text: String,
    pub inaction_justification: Option<String>,
    pub completed: bool,
    pub baseline_readings: Vec<MetricReading>,
    pub combined_readings: Vec<MetricReading>,
}

impl Record {
    pub fn update(&self, update_id: &str) -> Option<&UpdateEntry> {
        self.candidate_updates.iter().find(|u| u.id == update_id)
    }

    /// 1-based position parsed from the `R<n>` id.
    pub fn number(&self) -> u32 {
        id_number(&self.id, 'R').unwrap_or(0)
    }

    pub fn has_inaction_justification(&self) -> bool {
        self.inaction_justification
            .as_deref()
            .is_some_and(|j| !j.trim().is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Elicitation {
    pub stakeholders: Vec<StakeholderRef>,
    /// Who was consulted and what prompted the request.
    pub reason: String,
    /// What information was shown and how.
    pub presentation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StakeholderRef {
    pub label: String,
    pub category: StakeholderCategory,
    pub identifiable: bool,
    pub consent_recorded: bool,
}

impl StakeholderRef {
    /// A stakeholder recorded by role only.
    pub fn anonymous(label: impl Into<String>, category: StakeholderCategory) -> Self {
        StakeholderRef {
            label: label.into(),
            category,
            identifiable: false,
            consent_recorded: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StakeholderCategory {
    EndUser,
    Regulator,
    DomainExpert,
    Internal,
    Other(String),
}

impl StakeholderCategory {
    /// Human-readable form, e.g. `domain expert`.
    pub fn display_name(&self) -> String {
        match self {
            StakeholderCategory::Other(text) => text.clone(),
            other => other.key().replace('_', " "),
        }
    }

    /// The facet key used in search filters; `other` for free-text categories.
    pub fn key(&self) -> &str {
        match self {
            StakeholderCategory::EndUser => "end_user",
            StakeholderCategory::Regulator => "regulator",
            StakeholderCategory::DomainExpert => "domain_expert",
            StakeholderCategory::Internal => "internal",
            StakeholderCategory::Other(_) => "other",
        }
    }
}

impl fmt::Display for StakeholderCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StakeholderCategory::Other(text) => write!(f, "other:{text}"),
            other => f.write_str(other.key()),
        }
    }
}

impl FromStr for StakeholderCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "end_user" => Ok(StakeholderCategory::EndUser),
            "regulator" => Ok(StakeholderCategory::Regulator),
            "domain_expert" => Ok(StakeholderCategory::DomainExpert),
            "internal" => Ok(StakeholderCategory::Internal),
            other => match other.strip_prefix("other:") {
                Some(text) if !text.trim().is_empty() => {
                    Ok(StakeholderCategory::Other(text.to_string()))
                }
                _ => Err(format!("unknown stakeholder category {other:?}")),
            },
        }
    }
}

impl TryFrom<String> for StakeholderCategory {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<StakeholderCategory> for String {
    fn from(value: StakeholderCategory) -> Self {
        value.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateStatus {
    Considered,
    Implemented,
    Rejected,
}

/// One row of a record's incorporation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdateEntry {
    pub id: String,
    /// The update itself ("Which?").
    pub which: String,
    /// Update taxonomy ("Where?").
    pub kinds: BTreeSet<UpdateKind>,
    /// Lifecycle stage ("When?").
    pub stage: PipelineStage,
    pub why: String,
    pub effect_readings: Vec<MetricReading>,
    pub effect_note: String,
    pub status: UpdateStatus,
}

impl UpdateEntry {
    pub fn has_effect(&self) -> bool {
        !self.effect_readings.is_empty() || !self.effect_note.trim().is_empty()
    }

    pub fn class(&self) -> Option<UpdateClass> {
        classify_update(&self.kinds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum UpdateKind {
    Dataset,
    LossFunction,
    ParameterSpace,
    Prompt,
    Documentation,
    InterfaceUx,
    AccountabilityStructure,
    DeploymentDetails,
    Metrics,
    Other(String),
}

impl UpdateKind {
    pub const NAMED: [UpdateKind; 9] = [
        UpdateKind::Dataset,
        UpdateKind::LossFunction,
        UpdateKind::ParameterSpace,
        UpdateKind::Prompt,
        UpdateKind::Documentation,
        UpdateKind::InterfaceUx,
        UpdateKind::AccountabilityStructure,
        UpdateKind::DeploymentDetails,
        UpdateKind::Metrics,
    ];

    /// Model-side kinds change the model itself; the rest change its ecosystem.
    pub fn is_model_side(&self) -> bool {
        matches!(
            self,
            UpdateKind::Dataset
                | UpdateKind::LossFunction
                | UpdateKind::ParameterSpace
                | UpdateKind::Prompt
        )
    }

    pub fn key(&self) -> &str {
        match self {
            UpdateKind::Dataset => "dataset",
            UpdateKind::LossFunction => "loss_function",
            UpdateKind::ParameterSpace => "parameter_space",
            UpdateKind::Prompt => "prompt",
            UpdateKind::Documentation => "documentation",
            UpdateKind::InterfaceUx => "interface_ux",
            UpdateKind::AccountabilityStructure => "accountability_structure",
            UpdateKind::DeploymentDetails => "deployment_details",
            UpdateKind::Metrics => "metrics",
            UpdateKind::Other(_) => "other",
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            UpdateKind::Dataset => "Dataset".into(),
            UpdateKind::LossFunction => "Loss function".into(),
            UpdateKind::ParameterSpace => "Parameter space".into(),
            UpdateKind::Prompt => "Prompt".into(),
            UpdateKind::Documentation => "Documentation".into(),
            UpdateKind::InterfaceUx => "Interface/UX".into(),
            UpdateKind::AccountabilityStructure => "Accountability structure".into(),
            UpdateKind::DeploymentDetails => "Deployment details".into(),
            UpdateKind::Metrics => "Metrics".into(),
            UpdateKind::Other(text) => text.clone(),
        }
    }
}

impl fmt::Display for UpdateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateKind::Other(text) => write!(f, "other:{text}"),
            named => f.write_str(named.key()),
        }
    }
}

impl FromStr for UpdateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(kind) = UpdateKind::NAMED.iter().find(|k| k.key() == s) {
            return Ok(kind.clone());
        }
        match s.strip_prefix("other:") {
            Some(text) if !text.trim().is_empty() => Ok(UpdateKind::Other(text.to_string())),
            _ => Err(format!("unknown update kind {s:?}")),
        }
    }
}

impl TryFrom<String> for UpdateKind {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<UpdateKind> for String {
    fn from(value: UpdateKind) -> Self {
        value.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStage {
    DataCollectionPreTraining,
    ModelDevelopmentTraining,
    ModelDeploymentPostTraining,
}

impl PipelineStage {
    pub const ALL: [PipelineStage; 3] = [
        PipelineStage::DataCollectionPreTraining,
        PipelineStage::ModelDevelopmentTraining,
        PipelineStage::ModelDeploymentPostTraining,
    ];

    pub fn key(self) -> &'static str {
        match self {
            PipelineStage::DataCollectionPreTraining => "data_collection_pre_training",
            PipelineStage::ModelDevelopmentTraining => "model_development_training",
            PipelineStage::ModelDeploymentPostTraining => "model_deployment_post_training",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            PipelineStage::DataCollectionPreTraining => "Data collection (pre-training)",
            PipelineStage::ModelDevelopmentTraining => "Model development (training)",
            PipelineStage::ModelDeploymentPostTraining => "Model deployment (post-training)",
        }
    }
}

impl FromStr for PipelineStage {
    type Err = String;

    /// Accepts the canonical keys plus the short aliases used on the command
    /// line and in search filters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "data_collection_pre_training" | "data_collection" | "pre_training" | "pre" => {
                Ok(PipelineStage::DataCollectionPreTraining)
            }
            "model_development_training" | "model_development" | "training" => {
                Ok(PipelineStage::ModelDevelopmentTraining)
            }
            "model_deployment_post_training" | "model_deployment" | "deployment"
            | "post_training" | "post" => Ok(PipelineStage::ModelDeploymentPostTraining),
            _ => Err(format!("unknown pipeline stage {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateClass {
    Model,
    Ecosystem,
    Mixed,
}

/// Buckets a set of update kinds; `None` for an empty set.
pub fn classify_update(kinds: &BTreeSet<UpdateKind>) -> Option<UpdateClass> {
    if kinds.is_empty() {
        return None;
    }
    let model = kinds.iter().filter(|k| k.is_model_side()).count();
    Some(if model == kinds.len() {
        UpdateClass::Model
    } else if model == 0 {
        UpdateClass::Ecosystem
    } else {
        UpdateClass::Mixed
    })
}

pub fn is_slug(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('-')
        && !s.ends_with('-')
        && !s.contains("--")
        && s.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

/// Lowercases and collapses every run of non-alphanumerics into one hyphen.
pub fn slugify(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.is_empty() && !out.ends_with('-') {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    out
}

pub fn id_number(id: &str, prefix: char) -> Option<u32> {
    let digits = id.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn is_record_id(id: &str) -> bool {
    id_number(id, 'R').is_some()
}

pub fn is_update_id(id: &str) -> bool {
    id_number(id, 'U').is_some()
}

impl FeedbackLog {
    pub fn record(&self, record_id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == record_id)
    }

    pub fn record_index(&self, record_id: &str) -> Option<usize> {
        self.records.iter().position(|r| r.id == record_id)
    }

    /// Every metric spec in the log, in document order: starting point,
    /// update-introduced, final summary.
    pub fn metric_specs(&self) -> impl Iterator<Item = &MetricSpec> {
        self.starting_point
            .metrics
            .iter()
            .chain(self.metrics.iter())
            .chain(self.final_summary.iter().flat_map(|s| s.metrics.iter()))
    }

    pub fn metric_spec(&self, name: &str) -> Option<&MetricSpec> {
        self.metric_specs().find(|m| m.name == name)
    }

    /// Every reading in the log paired with its document path.
    pub fn readings(&self) -> Vec<(String, &MetricReading)> {
        let mut out = Vec::new();
        for (i, r) in self.starting_point.readings.iter().enumerate() {
            out.push((format!("starting_point.readings[{i}]"), r));
        }
        for (ri, record) in self.records.iter().enumerate() {
            for (i, r) in record.baseline_readings.iter().enumerate() {
                out.push((format!("records[{ri}].baseline_readings[{i}]"), r));
            }
            for (ui, update) in record.candidate_updates.iter().enumerate() {
                for (i, r) in update.effect_readings.iter().enumerate() {
                    out.push((
                        format!("records[{ri}].candidate_updates[{ui}].effect_readings[{i}]"),
                        r,
                    ));
                }
            }
            for (i, r) in record.combined_readings.iter().enumerate() {
                out.push((format!("records[{ri}].combined_readings[{i}]"), r));
            }
        }
        if let Some(summary) = &self.final_summary {
            for (i, r) in summary.readings.iter().enumerate() {
                out.push((format!("final_summary.readings[{i}]"), r));
            }
        }
        out
    }

    pub fn candidate_update_count(&self) -> usize {
        self.records.iter().map(|r| r.candidate_updates.len()).sum()
    }

    /// Every stakeholder reference with its path, in document order.
    pub fn stakeholders(&self) -> impl Iterator<Item = (usize, usize, &StakeholderRef)> {
        self.records.iter().enumerate().flat_map(|(ri, r)| {
            r.elicitation
                .stakeholders
                .iter()
                .enumerate()
                .map(move |(si, s)| (ri, si, s))
        })
    }
}
