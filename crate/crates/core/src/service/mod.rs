//! HTTP/JSON facade over the registry and scanner.
//!
//! Callers authenticate with `Authorization: Bearer <token>`; the token file
//! is a JSON object mapping tokens to person ids. A missing or unknown token
//! makes the caller anonymous, which holds no grants.

mod error;

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use error::ApiError;

use crate::docformat;
use crate::lint;
use crate::model::ops::ReadingDraft;
use crate::model::{Elicitation, FeedbackLog, MetricReading, MetricSpec, NewLog, PersonRef, PipelineSnapshot, UpdateDraft};
use crate::registry::{LogLink, Registry, RegistryError};
use crate::scanner::{self, ScanConfig};

pub const DEFAULT_BIND: &str = "127.0.0.1:8787";

/// Token to person id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenMap(pub HashMap<String, String>);

impl TokenMap {
    pub fn load(path: &Path) -> std::io::Result<Self> {
        let bytes = std::fs::read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn actor(&self, headers: &HeaderMap) -> String {
        headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .and_then(|t| self.0.get(t.trim()))
            .cloned()
            .unwrap_or_default()
    }
}

pub struct ApiState {
    pub registry: Registry,
    pub tokens: TokenMap,
}

type Shared = Arc<ApiState>;
type ApiResult<T> = Result<T, ApiError>;

/// Runs registry work off the async executor.
async fn blocking<T: Send + 'static>(
    state: &Shared,
    f: impl FnOnce(&ApiState) -> ApiResult<T> + Send + 'static,
) -> ApiResult<T> {
    let state = state.clone();
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string(), None))?
}

fn parse_body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::bad_request(e.inner().to_string(), Some(if path == "." { "" } else { &path }))
    })
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/healthz", get(health))
        .route("/logs", get(list_logs).post(create_log))
        .route("/logs/{id}", get(get_log).put(put_log))
        .route("/logs/{id}/records", post(open_record))
        .route("/logs/{id}/records/{rid}/elicitation", post(amend_elicitation))
        .route("/logs/{id}/records/{rid}/feedback", post(set_feedback))
        .route("/logs/{id}/records/{rid}/updates", post(add_update))
        .route("/logs/{id}/records/{rid}/updates/{uid}/reject", post(reject_update))
        .route("/logs/{id}/records/{rid}/choose", post(choose))
        .route("/logs/{id}/records/{rid}/inaction", post(inaction))
        .route("/logs/{id}/metrics", post(add_metric))
        .route("/logs/{id}/readings", post(add_reading))
        .route("/logs/{id}/finalize", post(finalize))
        .route("/logs/{id}/validate", get(validate))
        .route("/logs/{id}/export", get(export))
        .route("/logs/{id}/checklist", get(checklist))
        .route("/logs/{id}/provenance", get(provenance))
        .route("/logs/{id}/assignments", get(list_assignments).post(assign))
        .route("/logs/{id}/assignments/complete", post(complete_assignment))
        .route("/logs/{id}/anonymize", post(anonymize))
        .route("/search", get(search))
        .route("/links", get(list_links).post(add_link))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such endpoint", None) })
        .with_state(state)
}

pub struct ServeConfig {
    pub registry_root: PathBuf,
    pub bind: SocketAddr,
    pub token_file: Option<PathBuf>,
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServeConfig) -> std::io::Result<()> {
    let registry = Registry::open(&config.registry_root).map_err(std::io::Error::other)?;
    let tokens = match &config.token_file {
        Some(p) => TokenMap::load(p)?,
        None => TokenMap::default(),
    };
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    eprintln!("fblog service listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(ApiState { registry, tokens }))).await
}

async fn health(State(s): State<Shared>) -> ApiResult<Json<Value>> {
    let count = blocking(&s, |s| Ok(s.registry.log_count()?)).await?;
    Ok(Json(json!({ "ok": true, "version": env!("CARGO_PKG_VERSION"), "log_count": count })))
}

#[derive(Serialize)]
struct LogSummary {
    id: String,
    title: String,
    status: &'static str,
    revision: u64,
    owner: PersonRef,
}

#[derive(Deserialize)]
struct Page {
    limit: Option<usize>,
    offset: Option<usize>,
}

async fn list_logs(State(s): State<Shared>, headers: HeaderMap, Query(page): Query<Page>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let logs = blocking(&s, move |s| Ok(s.registry.visible_logs(&actor)?)).await?;
    let total = logs.len();
    let items: Vec<LogSummary> = logs
        .into_iter()
        .skip(page.offset.unwrap_or(0))
        .take(page.limit.unwrap_or(usize::MAX))
        .map(|l| LogSummary { status: l.status.as_str(), id: l.id, title: l.title, revision: l.revision, owner: l.owner })
        .collect();
    Ok(Json(json!({ "total": total, "logs": items })))
}

async fn get_log(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>) -> ApiResult<Json<FeedbackLog>> {
    let actor = s.tokens.actor(&headers);
    Ok(Json(blocking(&s, move |s| Ok(s.registry.get(&id, &actor)?)).await?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateLog {
    title: String,
    #[serde(default)]
    pipeline_name: String,
    owner: Option<PersonRef>,
    starting_point: PipelineSnapshot,
}

async fn create_log(State(s): State<Shared>, headers: HeaderMap, body: Bytes) -> ApiResult<(StatusCode, Json<FeedbackLog>)> {
    let actor = s.tokens.actor(&headers);
    let req: CreateLog = parse_body(&body)?;
    let log = blocking(&s, move |s| {
        if actor.is_empty() {
            return Err(RegistryError::AccessDenied { actor, action: "create logs".into() }.into());
        }
        let owner = match req.owner {
            Some(o) => o,
            None => {
                let access = s.registry.access()?;
                access.members.into_iter().find(|m| m.id == actor).unwrap_or_else(|| PersonRef::new(&actor, &actor))
            }
        };
        let new = NewLog { title: req.title, pipeline_name: req.pipeline_name, owner, starting_point: req.starting_point };
        let log = FeedbackLog::new_unique(new, |id| s.registry.exists(id))?;
        s.registry.put(&log, &actor)?;
        Ok(log)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(log)))
}

async fn put_log(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let log = docformat::parse_unchecked(&body).map_err(|e| match e {
        docformat::FormatError::SchemaViolation { path, message } => ApiError::bad_request(message, Some(&path)),
        other => ApiError::bad_request(other.to_string(), None),
    })?;
    if log.id != id {
        return Err(ApiError::bad_request(format!("body id {} does not match {id}", log.id), Some("id")));
    }
    let outcome = blocking(&s, move |s| Ok(s.registry.put(&log, &actor)?)).await?;
    Ok(Json(json!({ "outcome": outcome })))
}

/// Applies a lifecycle operation to a stored log and returns `{log, ...extra}`.
async fn mutate<T: Serialize + Send + 'static>(
    s: &Shared,
    headers: &HeaderMap,
    id: String,
    op: impl FnOnce(&mut FeedbackLog) -> Result<T, crate::model::ModelError> + Send + 'static,
) -> ApiResult<(FeedbackLog, T)> {
    let actor = s.tokens.actor(headers);
    blocking(s, move |s| Ok(s.registry.edit(&id, &actor, op)?)).await
}

async fn open_record(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let e: Elicitation = parse_body(&body)?;
    let (log, rid) = mutate(&s, &headers, id, move |l| l.open_record(e)).await?;
    Ok((StatusCode::CREATED, Json(json!({ "record_id": rid, "log": log }))))
}

async fn amend_elicitation(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid)): UrlPath<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let e: Elicitation = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| l.amend_elicitation(&rid, e)).await?;
    Ok(Json(json!({ "log": log })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TextBody {
    text: String,
}

/// Also the entry point for stakeholder-submitted feedback: it writes into
/// the open record's feedback field and needs an editor role like any edit.
async fn set_feedback(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid)): UrlPath<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let b: TextBody = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| l.set_feedback(&rid, &b.text)).await?;
    Ok(Json(json!({ "log": log })))
}

async fn add_update(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid)): UrlPath<(String, String)>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let draft: UpdateDraft = parse_body(&body)?;
    let (log, uid) = mutate(&s, &headers, id, move |l| l.add_candidate_update(&rid, draft)).await?;
    Ok((StatusCode::CREATED, Json(json!({ "update_id": uid, "log": log }))))
}

async fn reject_update(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid, uid)): UrlPath<(String, String, String)>,
) -> ApiResult<Json<Value>> {
    let (log, ()) = mutate(&s, &headers, id, move |l| l.reject_update(&rid, &uid)).await?;
    Ok(Json(json!({ "log": log })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChooseBody {
    update_ids: Vec<String>,
    summary: String,
    #[serde(default)]
    combined_readings: Vec<ReadingDraft>,
}

async fn choose(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid)): UrlPath<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let b: ChooseBody = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| {
        l.choose_updates(&rid, &b.update_ids, &b.summary, &b.combined_readings)
    })
    .await?;
    Ok(Json(json!({ "log": log })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InactionBody {
    justification: String,
}

async fn inaction(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath((id, rid)): UrlPath<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let b: InactionBody = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| l.record_inaction(&rid, &b.justification)).await?;
    Ok(Json(json!({ "log": log })))
}

async fn add_metric(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let spec: MetricSpec = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| l.add_metric(spec)).await?;
    Ok(Json(json!({ "log": log })))
}

async fn add_reading(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let reading: MetricReading = parse_body(&body)?;
    let (log, ()) = mutate(&s, &headers, id, move |l| l.add_reading(reading)).await?;
    Ok(Json(json!({ "log": log })))
}

async fn finalize(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let snap: PipelineSnapshot = parse_body(&body)?;
    let (log, findings) = mutate(&s, &headers, id, move |l| l.finalize(snap)).await?;
    Ok(Json(json!({ "log": log, "findings": findings })))
}

async fn validate(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let log = blocking(&s, move |s| Ok(s.registry.get(&id, &actor)?)).await?;
    let findings = lint::validate(&log);
    Ok(Json(json!({ "log_id": log.id, "errors": lint::error_count(&findings), "findings": findings })))
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

async fn export(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ExportQuery>,
) -> ApiResult<Response> {
    let actor = s.tokens.actor(&headers);
    let format = q.format.unwrap_or_else(|| "md".into());
    if format != "md" && format != "html" {
        return Err(ApiError::bad_request(format!("unknown format {format:?}"), Some("format")));
    }
    let log = blocking(&s, move |s| Ok(s.registry.get(&id, &actor)?)).await?;
    Ok(if format == "md" {
        ([(header::CONTENT_TYPE, "text/markdown; charset=utf-8")], docformat::export_markdown(&log)).into_response()
    } else {
        ([(header::CONTENT_TYPE, "text/html; charset=utf-8")], docformat::export_html(&log)).into_response()
    })
}

#[derive(Deserialize)]
struct ChecklistQuery {
    scan_root: String,
}

async fn checklist(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ChecklistQuery>,
) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    blocking(&s, move |s| {
        let log = s.registry.get(&id, &actor)?;
        let report = scanner::scan(&ScanConfig::new(&q.scan_root)).map_err(|e| {
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "ScanFailed", e.to_string(), Some("scan_root"))
        })?;
        let checklist = scanner::checklist(&log, &report.annotations);
        Ok(Json(json!({ "checklist": checklist, "warnings": report.warnings })))
    })
    .await
}

#[derive(Deserialize)]
struct SearchParams {
    q: String,
}

async fn search(State(s): State<Shared>, headers: HeaderMap, Query(p): Query<SearchParams>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let hits = blocking(&s, move |s| Ok(s.registry.search(&p.q, &actor)?)).await?;
    Ok(Json(json!({ "hits": hits })))
}

async fn add_link(State(s): State<Shared>, headers: HeaderMap, body: Bytes) -> ApiResult<(StatusCode, Json<LogLink>)> {
    let actor = s.tokens.actor(&headers);
    let link: LogLink = parse_body(&body)?;
    let stored = link.clone();
    blocking(&s, move |s| Ok(s.registry.add_link(link, &actor)?)).await?;
    Ok((StatusCode::CREATED, Json(stored)))
}

async fn list_links(State(s): State<Shared>, headers: HeaderMap) -> ApiResult<Json<Vec<LogLink>>> {
    let actor = s.tokens.actor(&headers);
    let links = blocking(&s, move |s| {
        let visible = s.registry.list(&actor)?;
        Ok(s.registry
            .links()?
            .into_iter()
            .filter(|l| visible.contains(&l.from_log_id) && visible.contains(&l.to_log_id))
            .collect())
    })
    .await?;
    Ok(Json(links))
}

async fn provenance(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    blocking(&s, move |s| {
        s.registry.get(&id, &actor)?;
        let chain = s.registry.provenance_chain(&id)?;
        Ok(Json(json!({ "log_id": id, "chain": chain })))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignBody {
    section_path: String,
    assignee: PersonRef,
}

async fn assign(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let actor = s.tokens.actor(&headers);
    let b: AssignBody = parse_body(&body)?;
    let a = blocking(&s, move |s| Ok(s.registry.assign_section(&id, &b.section_path, b.assignee, &actor)?)).await?;
    Ok((StatusCode::CREATED, Json(json!(a))))
}

async fn list_assignments(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let all = blocking(&s, move |s| Ok(s.registry.assignments(&id, &actor)?)).await?;
    Ok(Json(json!({ "assignments": all })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompleteBody {
    section_path: String,
}

async fn complete_assignment(
    State(s): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let b: CompleteBody = parse_body(&body)?;
    let all = blocking(&s, move |s| {
        s.registry.complete_section(&id, &b.section_path, &actor)?;
        Ok(s.registry.assignments(&id, &actor)?)
    })
    .await?;
    Ok(Json(json!({ "assignments": all })))
}

async fn anonymize(State(s): State<Shared>, headers: HeaderMap, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let actor = s.tokens.actor(&headers);
    let (log, mapping) = blocking(&s, move |s| Ok(s.registry.anonymized(&id, &actor)?)).await?;
    let mut body = BTreeMap::new();
    body.insert("log", json!(log));
    if let Some(m) = mapping {
        body.insert("mapping", json!(m));
    }
    Ok(Json(json!(body)))
}
