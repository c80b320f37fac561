//! HTTP service over one registry directory.
//!
//! Reads (conversion preview, query, search, case retrieval) share a read
//! lock; adding a case takes the write lock, persists, and only then swaps
//! the new registry in, so a failed request never changes the registry.

use std::collections::HashMap;
use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use sesforge_core::store::{is_case_id, QueryPattern, Registry, StoreError};
use sesforge_core::syntax::{serialize_turtle, Format, PhraseTable};
use tokio::sync::RwLock;

use crate::convert::{convert_document, ConvertError};

/// Header selecting the input format: `owl`, `cxl` or `ttl`.
pub const FORMAT_HEADER: &str = "x-format";
/// Optional header naming the case in a `/convert` report.
pub const CASE_ID_HEADER: &str = "x-case-id";
/// Case id used by `/convert` when no header is given.
pub const DEFAULT_CASE_ID: &str = "upload";

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub registry_dir: PathBuf,
    pub phrases: PhraseTable,
    pub max_upload_bytes: usize,
}

pub struct AppState {
    registry: RwLock<Registry>,
    dir: PathBuf,
    phrases: PhraseTable,
}

impl AppState {
    pub fn new(registry: Registry, dir: PathBuf, phrases: PhraseTable) -> Self {
        AppState {
            registry: RwLock::new(registry),
            dir,
            phrases,
        }
    }
}

const TURTLE: &str = "text/turtle; charset=utf-8";
const TEXT: &str = "text/plain; charset=utf-8";
const TSV: &str = "text/tab-separated-values; charset=utf-8";

fn reply(status: StatusCode, content_type: &'static str, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, content_type)], body).into_response()
}

fn text(status: StatusCode, body: impl Into<String>) -> Response {
    let mut body = body.into();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    reply(status, TEXT, body)
}

fn format_of(headers: &HeaderMap) -> Result<Format, &'static str> {
    let value = headers
        .get(FORMAT_HEADER)
        .ok_or("missing X-Format header (owl, cxl or ttl)")?;
    value
        .to_str()
        .ok()
        .and_then(Format::from_name)
        .ok_or("unknown X-Format (use owl, cxl or ttl)")
}

fn convert_failure(e: ConvertError) -> Response {
    match e {
        ConvertError::Parse(p) => text(StatusCode::BAD_REQUEST, format!("parse error: {p}")),
        other => text(StatusCode::UNPROCESSABLE_ENTITY, other.to_string()),
    }
}

async fn convert(State(state): State<Arc<AppState>>, headers: HeaderMap, body: String) -> Response {
    let format = match format_of(&headers) {
        Ok(f) => f,
        Err(msg) => return text(StatusCode::BAD_REQUEST, msg),
    };
    let case_id = headers
        .get(CASE_ID_HEADER)
        .and_then(|v| v.to_str().ok())
        .unwrap_or(DEFAULT_CASE_ID)
        .to_string();
    let reg = state.registry.read().await;
    match convert_document(&reg, &body, format, &state.phrases, &case_id, &[]) {
        Ok(c) if c.has_errors() => reply(StatusCode::UNPROCESSABLE_ENTITY, TURTLE, c.output),
        Ok(c) => reply(StatusCode::OK, TURTLE, c.output),
        Err(e) => convert_failure(e),
    }
}

async fn add_case(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: String,
) -> Response {
    if !is_case_id(&id) {
        return text(StatusCode::BAD_REQUEST, StoreError::InvalidCaseId(id).to_string());
    }
    let format = match format_of(&headers) {
        Ok(f) => f,
        Err(msg) => return text(StatusCode::BAD_REQUEST, msg),
    };
    let mut reg = state.registry.write().await;
    if reg.case(&id).is_some() {
        return text(StatusCode::CONFLICT, StoreError::DuplicateCase(id).to_string());
    }
    let conversion = match convert_document(&reg, &body, format, &state.phrases, &id, &[]) {
        Ok(c) => c,
        Err(e) => return convert_failure(e),
    };
    if conversion.has_errors() {
        return reply(StatusCode::UNPROCESSABLE_ENTITY, TURTLE, conversion.output);
    }
    let mut next = reg.clone();
    if let Err(e) = next.commit(conversion.prepared) {
        let status = match e {
            StoreError::DuplicateCase(_) => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        return text(status, e.to_string());
    }
    if let Err(e) = next.save(&state.dir) {
        return text(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    *reg = next;
    reply(StatusCode::CREATED, TURTLE, conversion.output)
}

async fn get_case(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    let reg = state.registry.read().await;
    match reg.case(&id) {
        Some(g) => reply(StatusCode::OK, TURTLE, serialize_turtle(g, &reg.prefixes())),
        None => text(StatusCode::NOT_FOUND, StoreError::UnknownCase(id).to_string()),
    }
}

async fn list_cases(State(state): State<Arc<AppState>>) -> Response {
    let reg = state.registry.read().await;
    let body: String = reg.cases().keys().map(|id| format!("{id}\n")).collect();
    reply(StatusCode::OK, TEXT, body)
}

async fn query(State(state): State<Arc<AppState>>, body: String) -> Response {
    let reg = state.registry.read().await;
    let pm = reg.prefixes();
    match QueryPattern::parse(&body, &pm, reg.vocab()) {
        Ok(q) => reply(StatusCode::OK, TSV, reg.bgp_query(&q).to_tsv(&pm)),
        Err(e) => text(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

async fn search(State(state): State<Arc<AppState>>, Query(params): Query<HashMap<String, String>>) -> Response {
    let q = params.get("q").map(|q| q.trim()).unwrap_or("");
    if q.is_empty() {
        return text(StatusCode::BAD_REQUEST, "missing search text `q`");
    }
    let reg = state.registry.read().await;
    let pm = reg.prefixes();
    let body: String = reg
        .keyword_search(q)
        .into_iter()
        .map(|(iri, score)| format!("{score}\t{}\n", pm.compact(&iri)))
        .collect();
    reply(StatusCode::OK, TEXT, body)
}

pub fn router(state: Arc<AppState>, max_upload_bytes: usize) -> Router {
    Router::new()
        .route("/convert", post(convert))
        .route("/cases", get(list_cases))
        .route("/cases/{id}", get(get_case).post(add_case))
        .route("/query", post(query))
        .route("/search", get(search))
        .layer(DefaultBodyLimit::max(max_upload_bytes))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(cfg: ServiceConfig, registry: Registry) -> io::Result<()> {
    let state = Arc::new(AppState::new(registry, cfg.registry_dir.clone(), cfg.phrases.clone()));
    let listener = tokio::net::TcpListener::bind(cfg.listen).await?;
    eprintln!("sesforge: listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, cfg.max_upload_bytes)).await
}
