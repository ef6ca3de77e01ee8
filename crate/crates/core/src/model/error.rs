use thiserror::Error;

/// Failure of a lifecycle or metric operation. A failed operation leaves the
/// log untouched.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{field} must not be empty")]
    EmptyField { field: String },
    #[error("log is finalized")]
    LogFinalized,
    #[error("stakeholder {label:?} is identifiable but has no recorded consent")]
    ConsentMissing { label: String },
    #[error("unknown record {0}")]
    UnknownRecord(String),
    #[error("record {0} is already completed")]
    RecordCompleted(String),
    #[error("invalid update entry: {field}: {reason}")]
    InvalidEntry { field: String, reason: String },
    #[error("unknown update {record_id}/{update_id}")]
    UnknownUpdate {
        record_id: String,
        update_id: String,
    },
    #[error("summary text must not be empty")]
    EmptySummary,
    #[error("justification for inaction must not be empty")]
    EmptyJustification,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("metric {0:?} already exists")]
    DuplicateMetric(String),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("invalid metric {name:?}: {reason}")]
    InvalidMetric { name: String, reason: String },
    #[error("metric {metric:?} is introduced after context {context}")]
    ContextBeforeIntroduction { metric: String, context: String },
    #[error("context {0} cannot take readings in the current log state")]
    ContextUnavailable(String),
    #[error("no reading of {metric:?} at {context}")]
    MissingReading { metric: String, context: String },
    #[error("{count} readings of {metric:?} at {context}")]
    AmbiguousReading {
        metric: String,
        context: String,
        count: usize,
    },
    #[error("records not completed: {}", .0.join(", "))]
    IncompleteRecords(Vec<String>),
}

impl ModelError {
    /// Request field an error points at, for API error bodies.
    pub fn path(&self) -> &str {
        match self {
            ModelError::EmptyField { field } => field,
            ModelError::InvalidEntry { field, .. } => field,
            ModelError::UnknownRecord(_) | ModelError::RecordCompleted(_) => "record_id",
            ModelError::UnknownUpdate { .. } => "update_id",
            ModelError::EmptySummary => "summary_text",
            ModelError::EmptyJustification => "justification",
            ModelError::ConsentMissing { .. } => "elicitation.stakeholders",
            ModelError::DuplicateMetric(_)
            | ModelError::UnknownMetric(_)
            | ModelError::InvalidMetric { .. } => "metric_name",
            ModelError::ContextBeforeIntroduction { .. }
            | ModelError::ContextUnavailable(_)
            | ModelError::MissingReading { .. }
            | ModelError::AmbiguousReading { .. } => "context",
            ModelError::LogFinalized
            | ModelError::InvalidState(_)
            | ModelError::IncompleteRecords(_) => "",
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::EmptyField { .. } => "EmptyField",
            ModelError::LogFinalized => "LogFinalized",
            ModelError::ConsentMissing { .. } => "ConsentMissing",
            ModelError::UnknownRecord(_) => "UnknownRecord",
            ModelError::RecordCompleted(_) => "RecordCompleted",
            ModelError::InvalidEntry { .. } => "InvalidEntry",
            ModelError::UnknownUpdate { .. } => "UnknownUpdate",
            ModelError::EmptySummary => "EmptySummary",
            ModelError::EmptyJustification => "EmptyJustification",
            ModelError::InvalidState(_) => "InvalidState",
            ModelError::DuplicateMetric(_) => "DuplicateMetric",
            ModelError::UnknownMetric(_) => "UnknownMetric",
            ModelError::InvalidMetric { .. } => "InvalidMetric",
            ModelError::ContextBeforeIntroduction { .. } => "ContextBeforeIntroduction",
            ModelError::ContextUnavailable(_) => "ContextUnavailable",
            ModelError::MissingReading { .. } => "MissingReading",
            ModelError::AmbiguousReading { .. } => "AmbiguousReading",
            ModelError::IncompleteRecords(_) => "IncompleteRecords",
        }
    }

    pub fn is_not_found(&self) -> bool {
        matches!(
            self,
            ModelError::UnknownRecord(_) | ModelError::UnknownUpdate { .. }
        )
    }
}
