//! Metric-impact arithmetic: document ordering of readings, deltas between
//! contexts, and target checks.

use serde::{Deserialize, Serialize};

use super::{id_number, Decimal, FeedbackLog, MetricOrigin, ModelError, ReadingContext};

/// Position of a reading context (or a metric's origin) in document order.
///
/// Within a record the order is baseline, then each update's effect in row
/// order, then the combined effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReadingPosition {
    StartingPoint,
    InRecord { record: u32, phase: u8, update: u32 },
    Final,
}

impl ReadingPosition {
    pub fn of_context(context: &ReadingContext) -> Option<Self> {
        Some(match context {
            ReadingContext::StartingPoint => ReadingPosition::StartingPoint,
            ReadingContext::Baseline { record_id } => ReadingPosition::InRecord {
                record: id_number(record_id, 'R')?,
                phase: 0,
                update: 0,
            },
            ReadingContext::AfterUpdate {
                record_id,
                update_id,
            } => ReadingPosition::InRecord {
                record: id_number(record_id, 'R')?,
                phase: 1,
                update: id_number(update_id, 'U')?,
            },
            ReadingContext::Combined { record_id } => ReadingPosition::InRecord {
                record: id_number(record_id, 'R')?,
                phase: 2,
                update: 0,
            },
            ReadingContext::Final => ReadingPosition::Final,
        })
    }

    pub fn of_origin(origin: &MetricOrigin) -> Option<Self> {
        match origin {
            MetricOrigin::StartingPoint => Some(ReadingPosition::StartingPoint),
            MetricOrigin::Update {
                record_id,
                update_id,
            } => Some(ReadingPosition::InRecord {
                record: id_number(record_id, 'R')?,
                phase: 1,
                update: id_number(update_id, 'U')?,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetCheck {
    Pass,
    Fail,
    NoTarget,
}

impl FeedbackLog {
    /// The single reading of `metric_name` at `context`.
    pub fn reading_at(&self, metric_name: &str, context: &ReadingContext) -> Result<Decimal, ModelError> {
        if self.metric_spec(metric_name).is_none() {
            return Err(ModelError::UnknownMetric(metric_name.to_string()));
        }
        let matches: Vec<Decimal> = self
            .readings()
            .into_iter()
            .filter(|(_, r)| r.metric_name == metric_name && &r.context == context)
            .map(|(_, r)| r.value)
            .collect();
        match matches.as_slice() {
            [value] => Ok(*value),
            [] => Err(ModelError::MissingReading {
                metric: metric_name.to_string(),
                context: context.to_string(),
            }),
            many => Err(ModelError::AmbiguousReading {
                metric: metric_name.to_string(),
                context: context.to_string(),
                count: many.len(),
            }),
        }
    }

    /// `value(to) - value(from)`; interpreting the sign is up to the caller.
    pub fn metric_delta(
        &self,
        metric_name: &str,
        from: &ReadingContext,
        to: &ReadingContext,
    ) -> Result<Decimal, ModelError> {
        let start = self.reading_at(metric_name, from)?;
        let end = self.reading_at(metric_name, to)?;
        Ok(end - start)
    }

    pub fn check_target(
        &self,
        metric_name: &str,
        context: &ReadingContext,
    ) -> Result<TargetCheck, ModelError> {
        let spec = self
            .metric_spec(metric_name)
            .ok_or_else(|| ModelError::UnknownMetric(metric_name.to_string()))?;
        let value = self.reading_at(metric_name, context)?;
        Ok(match spec.target {
            None => TargetCheck::NoTarget,
            Some(t) if t.comparator.holds(value, t.value) => TargetCheck::Pass,
            Some(_) => TargetCheck::Fail,
        })
    }
}
