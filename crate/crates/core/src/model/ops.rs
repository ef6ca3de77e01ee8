//! Lifecycle operations on a [`FeedbackLog`].
//!
//! Every successful mutation bumps `revision` by exactly one. Checks run
//! before anything is written, so a failed call leaves the log as it was.

use std::collections::BTreeSet;

use chrono::Utc;
use serde::{Deserialize, Serialize};

use super::{
    is_slug, slugify, Decimal, Elicitation, FeedbackLog, LogStatus, MetricOrigin, MetricReading,
    MetricSpec, ModelError, PersonRef, PipelineSnapshot, PipelineStage, ReadingContext,
    ReadingPosition, Record, UpdateEntry, UpdateKind, UpdateStatus, SCHEMA_VERSION,
};
use crate::lint::{self, LintFinding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewLog {
    pub title: String,
    pub pipeline_name: String,
    pub owner: PersonRef,
    pub starting_point: PipelineSnapshot,
}

/// A metric value whose context is implied by where it is attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingDraft {
    pub metric_name: String,
    pub value: Decimal,
    #[serde(default)]
    pub note: String,
}

impl ReadingDraft {
    pub fn new(metric_name: impl Into<String>, value: Decimal, note: impl Into<String>) -> Self {
        ReadingDraft {
            metric_name: metric_name.into(),
            value,
            note: note.into(),
        }
    }

    fn at(&self, context: ReadingContext) -> MetricReading {
        MetricReading {
            metric_name: self.metric_name.clone(),
            value: self.value,
            context,
            note: self.note.clone(),
        }
    }
}

/// A candidate update before it is assigned an id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateDraft {
    pub which: String,
    pub kinds: BTreeSet<UpdateKind>,
    pub stage: PipelineStage,
    pub why: String,
    #[serde(default)]
    pub effect_readings: Vec<ReadingDraft>,
    #[serde(default)]
    pub effect_note: String,
    /// Metrics this update introduces. Their origin is filled in.
    #[serde(default)]
    pub introduces: Vec<MetricSpec>,
}

fn blank(s: &str) -> bool {
    s.trim().is_empty()
}

fn require(field: &str, value: &str) -> Result<(), ModelError> {
    if blank(value) {
        Err(ModelError::EmptyField {
            field: field.to_string(),
        })
    } else {
        Ok(())
    }
}

fn check_spec_shape(spec: &MetricSpec) -> Result<(), ModelError> {
    if blank(&spec.name) {
        return Err(ModelError::EmptyField {
            field: "metric.name".into(),
        });
    }
    if let Some(target) = spec.target {
        if !target.comparator.agrees_with(spec.direction) {
            return Err(ModelError::InvalidMetric {
                name: spec.name.clone(),
                reason: format!(
                    "comparator {} contradicts direction {:?}",
                    target.comparator.symbol(),
                    spec.direction
                ),
            });
        }
    }
    Ok(())
}

fn check_elicitation(elicitation: &Elicitation) -> Result<(), ModelError> {
    for s in &elicitation.stakeholders {
        require("elicitation.stakeholders.label", &s.label)?;
        if s.identifiable && !s.consent_recorded {
            return Err(ModelError::ConsentMissing {
                label: s.label.clone(),
            });
        }
    }
    Ok(())
}

impl FeedbackLog {
    pub fn new(new: NewLog) -> Result<Self, ModelError> {
        Self::new_unique(new, |_| false)
    }

    /// Like [`FeedbackLog::new`], appending `-2`, `-3`, ... to the slugified
    /// title until `taken` reports the id free.
    pub fn new_unique(new: NewLog, taken: impl Fn(&str) -> bool) -> Result<Self, ModelError> {
        require("title", &new.title)?;
        require("owner.id", &new.owner.id)?;
        require("starting_point.data_description", &new.starting_point.data_description)?;
        require("starting_point.model_description", &new.starting_point.model_description)?;
        if !is_slug(&new.owner.id) {
            return Err(ModelError::InvalidState(format!(
                "owner id {:?} is not a slug",
                new.owner.id
            )));
        }
        let base = slugify(&new.title);
        if base.is_empty() {
            return Err(ModelError::EmptyField {
                field: "title".into(),
            });
        }
        let mut names = BTreeSet::new();
        for spec in &new.starting_point.metrics {
            check_spec_shape(spec)?;
            if spec.introduced_by != MetricOrigin::StartingPoint {
                return Err(ModelError::InvalidMetric {
                    name: spec.name.clone(),
                    reason: "starting point metrics must originate at the starting point".into(),
                });
            }
            if !names.insert(spec.name.as_str()) {
                return Err(ModelError::DuplicateMetric(spec.name.clone()));
            }
        }
        for reading in &new.starting_point.readings {
            if !names.contains(reading.metric_name.as_str()) {
                return Err(ModelError::UnknownMetric(reading.metric_name.clone()));
            }
            if reading.context != ReadingContext::StartingPoint {
                return Err(ModelError::ContextUnavailable(reading.context.to_string()));
            }
        }

        let mut id = base.clone();
        let mut suffix = 2;
        while taken(&id) {
            id = format!("{base}-{suffix}");
            suffix += 1;
        }
        let now = Utc::now();
        Ok(FeedbackLog {
            id,
            title: new.title,
            pipeline_name: new.pipeline_name,
            owner: new.owner,
            status: LogStatus::Draft,
            starting_point: new.starting_point,
            records: Vec::new(),
            final_summary: None,
            metrics: Vec::new(),
            schema_version: SCHEMA_VERSION,
            revision: 1,
            created_at: now,
            updated_at: now,
        })
    }

    fn touch(&mut self) {
        self.revision += 1;
        self.updated_at = Utc::now().max(self.updated_at);
    }

    fn ensure_open(&self) -> Result<(), ModelError> {
        if self.status == LogStatus::Finalized {
            Err(ModelError::LogFinalized)
        } else {
            Ok(())
        }
    }

    fn open_record_index(&self, record_id: &str) -> Result<usize, ModelError> {
        self.ensure_open()?;
        let idx = self
            .record_index(record_id)
            .ok_or_else(|| ModelError::UnknownRecord(record_id.to_string()))?;
        if self.records[idx].completed {
            return Err(ModelError::RecordCompleted(record_id.to_string()));
        }
        Ok(idx)
    }

    /// Checks that `reading` may be stored: metric known, context resolvable
    /// and not earlier than the metric's introduction.
    fn check_reading(&self, reading: &MetricReading) -> Result<(), ModelError> {
        let spec = self
            .metric_spec(&reading.metric_name)
            .ok_or_else(|| ModelError::UnknownMetric(reading.metric_name.clone()))?;
        self.check_context_resolves(&reading.context)?;
        let at = ReadingPosition::of_context(&reading.context)
            .ok_or_else(|| ModelError::ContextUnavailable(reading.context.to_string()))?;
        let introduced = ReadingPosition::of_origin(&spec.introduced_by)
            .ok_or_else(|| ModelError::ContextUnavailable(reading.context.to_string()))?;
        if at < introduced {
            return Err(ModelError::ContextBeforeIntroduction {
                metric: reading.metric_name.clone(),
                context: reading.context.to_string(),
            });
        }
        Ok(())
    }

    fn check_context_resolves(&self, context: &ReadingContext) -> Result<(), ModelError> {
        match context {
            ReadingContext::StartingPoint | ReadingContext::Final => Ok(()),
            ReadingContext::Baseline { record_id } | ReadingContext::Combined { record_id } => self
                .record(record_id)
                .map(|_| ())
                .ok_or_else(|| ModelError::UnknownRecord(record_id.clone())),
            ReadingContext::AfterUpdate {
                record_id,
                update_id,
            } => {
                let record = self
                    .record(record_id)
                    .ok_or_else(|| ModelError::UnknownRecord(record_id.clone()))?;
                record
                    .update(update_id)
                    .map(|_| ())
                    .ok_or_else(|| ModelError::UnknownUpdate {
                        record_id: record_id.clone(),
                        update_id: update_id.clone(),
                    })
            }
        }
    }

    /// Appends a record for a new stakeholder interaction and returns its id.
    pub fn open_record(&mut self, elicitation: Elicitation) -> Result<String, ModelError> {
        self.ensure_open()?;
        check_elicitation(&elicitation)?;
        let id = format!("R{}", self.records.len() + 1);
        self.records.push(Record {
            id: id.clone(),
            elicitation,
            feedback_text: String::new(),
            candidate_updates: Vec::new(),
            chosen_update_ids: BTreeSet::new(),
            summary_text: String::new(),
            inaction_justification: None,
            completed: false,
            baseline_readings: Vec::new(),
            combined_readings: Vec::new(),
        });
        self.status = LogStatus::Active;
        self.touch();
        Ok(id)
    }

    /// Replaces the elicitation of a record that is not yet completed.
    pub fn amend_elicitation(
        &mut self,
        record_id: &str,
        elicitation: Elicitation,
    ) -> Result<(), ModelError> {
        let idx = self.open_record_index(record_id)?;
        check_elicitation(&elicitation)?;
        self.records[idx].elicitation = elicitation;
        self.touch();
        Ok(())
    }

    pub fn set_feedback(&mut self, record_id: &str, text: &str) -> Result<(), ModelError> {
        let idx = self.open_record_index(record_id)?;
        self.records[idx].feedback_text = text.to_string();
        self.touch();
        Ok(())
    }

    /// Adds a row to the record's incorporation table; returns the new `U` id.
    pub fn add_candidate_update(
        &mut self,
        record_id: &str,
        draft: UpdateDraft,
    ) -> Result<String, ModelError> {
        let idx = self.open_record_index(record_id)?;
        let invalid = |field: &str, reason: &str| ModelError::InvalidEntry {
            field: field.to_string(),
            reason: reason.to_string(),
        };
        if blank(&draft.which) {
            return Err(invalid("which", "must not be empty"));
        }
        if draft.kinds.is_empty() {
            return Err(invalid("kinds", "at least one update kind is required"));
        }
        if blank(&draft.why) {
            return Err(invalid("why", "must not be empty"));
        }
        if draft.effect_readings.is_empty() && blank(&draft.effect_note) {
            return Err(invalid("effect", "an effect reading or note is required"));
        }

        let update_id = format!("U{}", self.records[idx].candidate_updates.len() + 1);
        let origin = MetricOrigin::Update {
            record_id: record_id.to_string(),
            update_id: update_id.clone(),
        };

        // Stage the new row and metrics on a scratch copy so readings that
        // reference metrics introduced by this very update can be checked.
        let mut staged = self.clone();
        let context = ReadingContext::AfterUpdate {
            record_id: record_id.to_string(),
            update_id: update_id.clone(),
        };
        staged.records[idx].candidate_updates.push(UpdateEntry {
            id: update_id.clone(),
            which: draft.which,
            kinds: draft.kinds,
            stage: draft.stage,
            why: draft.why,
            effect_readings: Vec::new(),
            effect_note: draft.effect_note,
            status: UpdateStatus::Considered,
        });
        for spec in &draft.introduces {
            let mut spec = spec.clone();
            spec.introduced_by = origin.clone();
            staged.insert_metric(spec)?;
        }
        for reading in &draft.effect_readings {
            let reading = reading.at(context.clone());
            staged.check_reading(&reading)?;
            staged.records[idx]
                .candidate_updates
                .last_mut()
                .expect("just pushed")
                .effect_readings
                .push(reading);
        }
        *self = staged;
        self.touch();
        Ok(update_id)
    }

    /// Marks a considered update as explicitly ruled out.
    pub fn reject_update(&mut self, record_id: &str, update_id: &str) -> Result<(), ModelError> {
        let idx = self.open_record_index(record_id)?;
        let entry = self.records[idx]
            .candidate_updates
            .iter_mut()
            .find(|u| u.id == update_id)
            .ok_or_else(|| ModelError::UnknownUpdate {
                record_id: record_id.to_string(),
                update_id: update_id.to_string(),
            })?;
        entry.status = UpdateStatus::Rejected;
        self.touch();
        Ok(())
    }

    /// Completes a record by choosing the updates that were implemented.
    /// `combined_effect` readings describe the chosen updates applied together.
    pub fn choose_updates(
        &mut self,
        record_id: &str,
        update_ids: &[String],
        summary_text: &str,
        combined_effect: &[ReadingDraft],
    ) -> Result<(), ModelError> {
        let idx = self.open_record_index(record_id)?;
        if update_ids.is_empty() {
            return Err(ModelError::InvalidState(
                "no updates chosen; record inaction with a justification instead".into(),
            ));
        }
        let record = &self.records[idx];
        for id in update_ids {
            match record.update(id) {
                None => {
                    return Err(ModelError::UnknownUpdate {
                        record_id: record_id.to_string(),
                        update_id: id.clone(),
                    })
                }
                Some(u) if u.status == UpdateStatus::Rejected => {
                    return Err(ModelError::InvalidState(format!(
                        "update {id} was rejected and cannot be chosen"
                    )))
                }
                Some(_) => {}
            }
        }
        if blank(summary_text) {
            return Err(ModelError::EmptySummary);
        }
        let context = ReadingContext::Combined {
            record_id: record_id.to_string(),
        };
        let combined: Vec<MetricReading> =
            combined_effect.iter().map(|r| r.at(context.clone())).collect();
        for reading in &combined {
            self.check_reading(reading)?;
        }

        let record = &mut self.records[idx];
        record.chosen_update_ids = update_ids.iter().cloned().collect();
        for entry in &mut record.candidate_updates {
            if record.chosen_update_ids.contains(&entry.id) {
                entry.status = UpdateStatus::Implemented;
            }
        }
        record.summary_text = summary_text.to_string();
        record.combined_readings.extend(combined);
        record.completed = true;
        self.touch();
        Ok(())
    }

    /// Completes a record without implementing any update.
    pub fn record_inaction(&mut self, record_id: &str, justification: &str) -> Result<(), ModelError> {
        self.ensure_open()?;
        let idx = self
            .record_index(record_id)
            .ok_or_else(|| ModelError::UnknownRecord(record_id.to_string()))?;
        let record = &self.records[idx];
        if !record.chosen_update_ids.is_empty() {
            return Err(ModelError::InvalidState(
                "record already has chosen updates; choose and inaction are exclusive".into(),
            ));
        }
        if record.completed {
            return Err(ModelError::RecordCompleted(record_id.to_string()));
        }
        if blank(justification) {
            return Err(ModelError::EmptyJustification);
        }
        let record = &mut self.records[idx];
        record.inaction_justification = Some(justification.to_string());
        if blank(&record.summary_text) {
            record.summary_text = format!("No update implemented: {justification}");
        }
        record.completed = true;
        self.touch();
        Ok(())
    }

    fn insert_metric(&mut self, spec: MetricSpec) -> Result<(), ModelError> {
        check_spec_shape(&spec)?;
        if self.metric_spec(&spec.name).is_some() {
            return Err(ModelError::DuplicateMetric(spec.name));
        }
        match &spec.introduced_by {
            MetricOrigin::StartingPoint => self.starting_point.metrics.push(spec),
            MetricOrigin::Update {
                record_id,
                update_id,
            } => {
                self.check_context_resolves(&ReadingContext::AfterUpdate {
                    record_id: record_id.clone(),
                    update_id: update_id.clone(),
                })?;
                self.metrics.push(spec);
            }
        }
        Ok(())
    }

    pub fn add_metric(&mut self, spec: MetricSpec) -> Result<(), ModelError> {
        self.ensure_open()?;
        self.insert_metric(spec)?;
        self.touch();
        Ok(())
    }

    /// Stores a reading at the place its context names. Final readings are
    /// only accepted through [`FeedbackLog::finalize`].
    pub fn add_reading(&mut self, reading: MetricReading) -> Result<(), ModelError> {
        self.ensure_open()?;
        if reading.context == ReadingContext::Final {
            return Err(ModelError::ContextUnavailable(reading.context.to_string()));
        }
        self.check_reading(&reading)?;
        match reading.context.clone() {
            ReadingContext::StartingPoint => self.starting_point.readings.push(reading),
            ReadingContext::Baseline { record_id } => {
                let idx = self.record_index(&record_id).expect("checked");
                self.records[idx].baseline_readings.push(reading);
            }
            ReadingContext::Combined { record_id } => {
                let idx = self.record_index(&record_id).expect("checked");
                self.records[idx].combined_readings.push(reading);
            }
            ReadingContext::AfterUpdate {
                record_id,
                update_id,
            } => {
                let idx = self.record_index(&record_id).expect("checked");
                let entry = self.records[idx]
                    .candidate_updates
                    .iter_mut()
                    .find(|u| u.id == update_id)
                    .expect("checked");
                entry.effect_readings.push(reading);
            }
            ReadingContext::Final => unreachable!("rejected above"),
        }
        self.touch();
        Ok(())
    }

    /// Closes the log with a final snapshot. Unmet targets do not block; they
    /// come back as findings.
    pub fn finalize(&mut self, final_snapshot: PipelineSnapshot) -> Result<Vec<LintFinding>, ModelError> {
        self.ensure_open()?;
        let open: Vec<String> = self
            .records
            .iter()
            .filter(|r| !r.completed)
            .map(|r| r.id.clone())
            .collect();
        if !open.is_empty() {
            return Err(ModelError::IncompleteRecords(open));
        }
        let mut staged = self.clone();
        let readings = final_snapshot.readings.clone();
        staged.final_summary = Some(PipelineSnapshot {
            readings: Vec::new(),
            metrics: Vec::new(),
            ..final_snapshot.clone()
        });
        for spec in final_snapshot.metrics {
            check_spec_shape(&spec)?;
            if staged.metric_spec(&spec.name).is_some() {
                return Err(ModelError::DuplicateMetric(spec.name));
            }
            staged
                .final_summary
                .as_mut()
                .expect("set above")
                .metrics
                .push(spec);
        }
        for (i, reading) in readings.into_iter().enumerate() {
            if reading.context != ReadingContext::Final {
                return Err(ModelError::InvalidEntry {
                    field: format!("final_summary.readings[{i}].context"),
                    reason: "final summary readings must use the final context".into(),
                });
            }
            staged.check_reading(&reading)?;
            staged
                .final_summary
                .as_mut()
                .expect("set above")
                .readings
                .push(reading);
        }
        staged.status = LogStatus::Finalized;
        *self = staged;
        self.touch();
        Ok(lint::target_findings(self))
    }
}
