//! Read-only HTTP/JSON service over the current snapshot.
//!
//! | method | path                         | response              |
//! |--------|------------------------------|-----------------------|
//! | GET    | `/healthz`                   | `Health`              |
//! | GET    | `/scholars?q=&limit=`        | `QueryAnswer`         |
//! | GET    | `/scholars/{id}`             | `ScholarProfile`      |
//! | GET    | `/scholars/{id}/ego?kind=&geo=&series=&from=&to=` | `EgoNetworkDoc` |
//! | GET    | `/rankings/{measure}?offset=&limit=` | `RankingPage` |
//! | POST   | `/recommend/advisor?limit=`  | `RecommendationSet`   |
//! | GET    | `/export?format=nodelink`    | node-link document    |
//! | GET    | `/schemas/{name}`            | JSON Schema           |
//! | GET    | `/ui/...`                    | static UI assets      |
//!
//! Every failure is an `ApiError` body. Requests capture the current engine
//! once, so a snapshot swap never affects a request already in flight.

use crate::engine::{EgoOptions, Engine};
use crate::export::export_graph;
use crate::mine::profile::YearRange;
use crate::model::{EdgeKind, ScholarId};
use crate::ranking::{Measure, RankEntry};
use crate::recommend::{PreferenceForm, RecommendError};
use crate::snapshot::{load_snapshot, SnapshotError, FORMAT_VERSION};
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use std::future::Future;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use tower_http::services::ServeDir;

pub const DEFAULT_SEARCH_LIMIT: usize = 20;
pub const DEFAULT_PAGE_LIMIT: usize = 50;
pub const MAX_LIMIT: usize = 1000;

/// Published JSON Schemas, by name.
pub const SCHEMAS: [(&str, &str); 8] = [
    ("api_error", include_str!("../schemas/api_error.json")),
    ("health", include_str!("../schemas/health.json")),
    ("query_answer", include_str!("../schemas/query_answer.json")),
    ("scholar_profile", include_str!("../schemas/scholar_profile.json")),
    ("ego_network", include_str!("../schemas/ego_network.json")),
    ("ranking_page", include_str!("../schemas/ranking_page.json")),
    ("recommendation_set", include_str!("../schemas/recommendation_set.json")),
    ("nodelink", include_str!("../schemas/nodelink.json")),
];

pub fn schema(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    SCHEMAS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub status: u16,
    pub kind: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        Self { status: status.as_u16(), kind: kind.to_owned(), message: message.into() }
    }

    fn bad_request(kind: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, kind, message)
    }

    fn not_found(kind: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, kind, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::bad_request("bad_query_parameter", r.body_text())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request("bad_body", r.body_text())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// The swappable engine plus where it was loaded from.
#[derive(Debug)]
pub struct AppState {
    engine: RwLock<Arc<Engine>>,
    snapshot_path: Option<PathBuf>,
}

impl AppState {
    pub fn new(engine: Engine, snapshot_path: Option<PathBuf>) -> Self {
        Self { engine: RwLock::new(Arc::new(engine)), snapshot_path }
    }

    pub fn load(path: PathBuf) -> Result<Self, SnapshotError> {
        let graph = load_snapshot(&path)?;
        Ok(Self::new(Engine::new(graph), Some(path)))
    }

    pub fn current(&self) -> Arc<Engine> {
        Arc::clone(&self.engine.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Atomically replaces the engine; in-flight requests keep the old one.
    pub fn swap(&self, engine: Engine) {
        *self.engine.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(engine);
    }

    /// Reloads from the snapshot path. On error the current engine stays.
    pub fn reload(&self) -> Result<u64, SnapshotError> {
        let Some(path) = &self.snapshot_path else {
            return Err(SnapshotError::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "no snapshot path configured")));
        };
        let engine = Engine::new(load_snapshot(path)?);
        let generation = engine.graph().generation();
        self.swap(engine);
        Ok(generation)
    }
}

type Shared = State<Arc<AppState>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub snapshot_version: u32,
    pub generation: u64,
    pub scholars: usize,
    pub publications: usize,
    pub edges: usize,
}

async fn healthz(State(state): Shared) -> Json<Health> {
    let engine = state.current();
    let g = engine.graph();
    let publications = g.publications().len();
    Json(Health {
        status: "ok".into(),
        snapshot_version: FORMAT_VERSION,
        generation: g.generation(),
        scholars: g.scholar_count(),
        publications,
        edges: g.edge_count(),
    })
}

fn clamp_limit(limit: Option<usize>, default: usize) -> Result<usize, ApiError> {
    match limit.unwrap_or(default) {
        0 => Err(ApiError::bad_request("bad_query_parameter", "limit must be at least 1")),
        n => Ok(n.min(MAX_LIMIT)),
    }
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    q: Option<String>,
    limit: Option<usize>,
}

async fn search(State(state): Shared, params: Result<Query<SearchParams>, QueryRejection>) -> ApiResult<crate::query::QueryAnswer> {
    let Query(params) = params?;
    let limit = clamp_limit(params.limit, DEFAULT_SEARCH_LIMIT)?;
    let text = params.q.unwrap_or_default();
    state
        .current()
        .search(&text, limit)
        .map(Json)
        .map_err(|e| ApiError::bad_request("empty_query", e.to_string()))
}

fn unknown_scholar(id: &str) -> ApiError {
    ApiError::not_found("unknown_scholar", format!("no scholar with id `{id}`"))
}

async fn profile(State(state): Shared, Path(id): Path<String>) -> ApiResult<crate::engine::ScholarProfile> {
    state.current().profile(&ScholarId::new(&id)).map(Json).ok_or_else(|| unknown_scholar(&id))
}

#[derive(Debug, Deserialize)]
struct EgoParams {
    kind: Option<String>,
    #[serde(default)]
    geo: bool,
    #[serde(default)]
    series: bool,
    from: Option<i32>,
    to: Option<i32>,
}

async fn ego(
    State(state): Shared,
    Path(id): Path<String>,
    params: Result<Query<EgoParams>, QueryRejection>,
) -> ApiResult<crate::engine::EgoNetworkDoc> {
    let Query(p) = params?;
    let kind: EdgeKind = p
        .kind
        .as_deref()
        .unwrap_or("coauthor")
        .parse()
        .map_err(|e: crate::model::UnknownKind| ApiError::bad_request("unknown_kind", e.to_string()))?;
    let default = YearRange::default();
    let range = YearRange { from: p.from.unwrap_or(default.from), to: p.to.unwrap_or(default.to) };
    if range.from > range.to {
        return Err(ApiError::bad_request("bad_query_parameter", "`from` is after `to`"));
    }
    let opts = EgoOptions { geo: p.geo, series: p.series.then_some(range) };
    state.current().ego(&ScholarId::new(&id), kind, opts).map(Json).map_err(|_| unknown_scholar(&id))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedScholar {
    pub rank: usize,
    pub scholar_id: ScholarId,
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingPage {
    pub measure: Measure,
    pub label: String,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub computed_at: u64,
    pub entries: Vec<RankedScholar>,
}

#[derive(Debug, Deserialize)]
struct PageParams {
    offset: Option<usize>,
    limit: Option<usize>,
}

async fn rankings(
    State(state): Shared,
    Path(measure): Path<String>,
    params: Result<Query<PageParams>, QueryRejection>,
) -> ApiResult<RankingPage> {
    let Query(p) = params?;
    let measure: Measure = measure.parse().map_err(|e: crate::ranking::UnknownMeasure| {
        ApiError::bad_request("unknown_measure", e.to_string())
    })?;
    let offset = p.offset.unwrap_or(0);
    let limit = clamp_limit(p.limit, DEFAULT_PAGE_LIMIT)?;
    let engine = state.current();
    let list = engine.ranking(measure);
    let entries = list
        .page(offset, limit)
        .iter()
        .enumerate()
        .map(|(i, RankEntry { scholar_id, value })| RankedScholar {
            rank: offset + i + 1,
            name: engine.index().display_name(scholar_id).unwrap_or_default().to_owned(),
            scholar_id: scholar_id.clone(),
            value: *value,
        })
        .collect();
    Ok(Json(RankingPage {
        measure,
        label: measure.label().to_owned(),
        total: list.entries.len(),
        offset,
        limit,
        computed_at: list.computed_at,
        entries,
    }))
}

#[derive(Debug, Deserialize)]
struct LimitParams {
    limit: Option<usize>,
}

async fn recommend(
    State(state): Shared,
    params: Result<Query<LimitParams>, QueryRejection>,
    form: Result<Json<PreferenceForm>, JsonRejection>,
) -> ApiResult<crate::recommend::RecommendationSet> {
    let Query(p) = params?;
    let Json(form) = form?;
    let limit = clamp_limit(p.limit, DEFAULT_SEARCH_LIMIT)?;
    state.current().recommend(&form, limit).map(Json).map_err(|e| match e {
        RecommendError::EmptyForm => ApiError::bad_request("empty_form", e.to_string()),
        RecommendError::BadWeights(_) => ApiError::bad_request("bad_weights", e.to_string()),
    })
}

#[derive(Debug, Deserialize)]
struct ExportParams {
    format: Option<String>,
}

async fn export(State(state): Shared, params: Result<Query<ExportParams>, QueryRejection>) -> Result<Response, ApiError> {
    let Query(p) = params?;
    match p.format.as_deref().unwrap_or("nodelink") {
        "nodelink" => {
            let body = export_graph(state.current().graph());
            Ok(([(header::CONTENT_TYPE, "application/json")], body).into_response())
        }
        other => Err(ApiError::bad_request("unsupported_format", format!("unsupported export format `{other}`; expected nodelink"))),
    }
}

async fn get_schema(Path(name): Path<String>) -> Result<Response, ApiError> {
    schema(&name)
        .map(|s| ([(header::CONTENT_TYPE, "application/schema+json")], s).into_response())
        .ok_or_else(|| ApiError::not_found("unknown_schema", format!("no schema named `{name}`")))
}

async fn not_found() -> ApiError {
    ApiError::not_found("not_found", "no such endpoint")
}

async fn method_not_allowed() -> ApiError {
    ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed on this endpoint")
}

async fn ui_missing() -> ApiError {
    ApiError::not_found("ui_not_installed", "no UI assets directory configured")
}

/// Builds the router. `ui_dir`, when given, is served under `/ui/`.
pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/healthz", get(healthz))
        .route("/scholars", get(search))
        .route("/scholars/{id}", get(profile))
        .route("/scholars/{id}/ego", get(ego))
        .route("/rankings/{measure}", get(rankings))
        .route("/recommend/advisor", post(recommend))
        .route("/export", get(export))
        .route("/schemas/{name}", get(get_schema))
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(state);
    let api = match ui_dir {
        Some(dir) => api.nest_service("/ui", ServeDir::new(dir).append_index_html_on_directories(true)),
        None => api.route("/ui", get(ui_missing)).route("/ui/", get(ui_missing)).route("/ui/{*rest}", get(ui_missing)),
    };
    api.fallback(not_found)
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Arc<AppState>,
    ui_dir: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(state, ui_dir)).with_graceful_shutdown(shutdown).await
}

/// Reloads the snapshot whenever the process receives SIGHUP.
#[cfg(unix)]
pub fn spawn_reload_on_sighup(state: Arc<AppState>) -> std::io::Result<tokio::task::JoinHandle<()>> {
    use tokio::signal::unix::{signal, SignalKind};
    let mut hup = signal(SignalKind::hangup())?;
    Ok(tokio::spawn(async move {
        while hup.recv().await.is_some() {
            match state.reload() {
                Ok(generation) => tracing::info!(generation, "snapshot reloaded"),
                Err(e) => tracing::error!(error = %e, "snapshot reload failed; keeping current snapshot"),
            }
        }
    }))
}
