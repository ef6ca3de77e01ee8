use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use crate::lint::LintFinding;
use crate::model::ModelError;
use crate::registry::RegistryError;

/// JSON error body: `{code, message, path}` plus lint findings on 422s
/// caused by validation.
#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<LintFinding>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>, path: Option<&str>) -> Self {
        ApiError {
            status,
            code: code.into(),
            message: message.into(),
            path: path.filter(|p| !p.is_empty()).map(str::to_string),
            findings: Vec::new(),
        }
    }

    pub fn bad_request(message: impl Into<String>, path: Option<&str>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "MalformedBody", message, path)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let status = if e.is_not_found() {
            StatusCode::NOT_FOUND
        } else if matches!(e, ModelError::LogFinalized | ModelError::RecordCompleted(_)) {
            StatusCode::CONFLICT
        } else {
            StatusCode::UNPROCESSABLE_ENTITY
        };
        ApiError::new(status, e.code(), e.to_string(), Some(e.path()))
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        use RegistryError as R;
        let message = e.to_string();
        let (status, code, path) = match &e {
            R::AccessDenied { actor, .. } if actor.is_empty() => (StatusCode::UNAUTHORIZED, "Unauthorized", None),
            R::AccessDenied { .. } => (StatusCode::FORBIDDEN, "AccessDenied", None),
            R::UnknownLog(_) => (StatusCode::NOT_FOUND, "UnknownLog", Some("log_id")),
            R::StaleRevision { .. } => (StatusCode::CONFLICT, "StaleRevision", Some("revision")),
            R::ValidationFailed { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "ValidationFailed", None),
            R::SchemaViolation { path, .. } => (StatusCode::UNPROCESSABLE_ENTITY, "SchemaViolation", Some(path.as_str())),
            R::SelfLink(_) => (StatusCode::UNPROCESSABLE_ENTITY, "SelfLink", Some("to_log_id")),
            R::DuplicateLink { .. } => (StatusCode::CONFLICT, "DuplicateLink", None),
            R::UnknownSection { .. } => (StatusCode::NOT_FOUND, "UnknownSection", Some("section_path")),
            R::MalformedQuery(_) => (StatusCode::BAD_REQUEST, "MalformedQuery", Some("q")),
            R::Model(m) => return ApiError::from(m.clone()),
            R::Corrupt { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "CorruptStore", None),
            R::Io { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "IoError", None),
        };
        let mut err = ApiError::new(status, code, message, path);
        if let R::ValidationFailed { findings, .. } = e {
            err.path = findings.first().map(|f| f.path.clone());
            err.findings = findings;
        }
        err
    }
}
