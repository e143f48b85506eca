//! Stateless HTTP API over a loaded [`Catalog`].
//!
//! Clients resend the full answer set on every call; the server holds only
//! the immutable catalog. All bodies are JSON and every 4xx carries one of
//! the codes in [`ERROR_CODES`].

mod error;
pub mod wire;

use std::io::Write;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Instant;

use axum::body::{to_bytes, Body};
use axum::extract::rejection::PathRejection;
use axum::extract::{Path, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use qsa_core::catalog::Catalog;
use qsa_core::engine::{auto_select, compare_whatif, recommend, Session};
use qsa_core::{DecisionModel, DesignArea, Gateway};
use serde::Serialize;
use serde_json::json;
use tokio::net::TcpListener;

pub use error::{ApiError, ERROR_CODES};

/// Request bodies above this size are rejected with `payload-too-large`.
pub const MAX_BODY_BYTES: usize = 1 << 20;

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Origins allowed to POST from a browser. `*` allows any.
    pub allowed_origins: Vec<String>,
    /// Print one JSON line per request on stdout.
    pub log_requests: bool,
}

impl ServiceConfig {
    fn origin_allowed(&self, origin: &str) -> bool {
        self.allowed_origins.iter().any(|o| o == "*" || o == origin)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error("server failed: {0}")]
    Serve(#[from] std::io::Error),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Bind { .. } => "bind-failed",
            ServiceError::Serve(_) => "serve-failed",
        }
    }
}

struct AppState {
    catalog: Catalog,
    config: ServiceConfig,
}

type Shared = Arc<AppState>;

pub fn router(catalog: Catalog, config: ServiceConfig) -> Router {
    let state: Shared = Arc::new(AppState { catalog, config });
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/areas", get(list_areas))
        .route("/v1/areas/{area}/model", get(get_model))
        .route("/v1/areas/{area}/next-questions", post(next_questions))
        .route("/v1/areas/{area}/recommend", post(recommend_handler))
        .route("/v1/areas/{area}/auto-select", post(auto_select_handler))
        .route("/v1/areas/{area}/compare", post(compare_handler))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(middleware::from_fn_with_state(state.clone(), cors))
        .layer(middleware::from_fn_with_state(state.clone(), log_request))
        .with_state(state)
}

pub async fn bind(addr: &str) -> Result<TcpListener, ServiceError> {
    TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr: addr.to_string(), source })
}

/// Serves until interrupted.
pub async fn serve(listener: TcpListener, catalog: Catalog, config: ServiceConfig) -> Result<(), ServiceError> {
    let app = router(catalog, config);
    axum::serve(listener, app.into_make_service_with_connect_info::<SocketAddr>())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

pub(crate) fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => {
            (status, [(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], bytes)
                .into_response()
        }
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

fn ok<T: Serialize>(body: &T) -> Response {
    json_response(StatusCode::OK, body)
}

/// `If-None-Match` handling for GET resources versioned by `etag`.
fn cached<T: Serialize>(headers: &HeaderMap, etag: &str, body: &T) -> Response {
    let fresh = headers
        .get_all(header::IF_NONE_MATCH)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .map(|t| t.trim().trim_start_matches("W/"))
        .any(|t| t == etag || t == "*");
    let mut resp = if fresh { StatusCode::NOT_MODIFIED.into_response() } else { ok(body) };
    if let Ok(v) = HeaderValue::from_str(etag) {
        resp.headers_mut().insert(header::ETAG, v);
    }
    resp
}

fn model_for<'a>(state: &'a AppState, area: Result<Path<String>, PathRejection>) -> Result<&'a DecisionModel, ApiError> {
    let Path(area) = area.map_err(|_| ApiError::unknown_area(""))?;
    area.parse::<DesignArea>()
        .ok()
        .and_then(|a| state.catalog.model(a))
        .ok_or_else(|| ApiError::unknown_area(&area))
}

async fn read_object(body: Body) -> Result<serde_json::Map<String, serde_json::Value>, ApiError> {
    let bytes = to_bytes(body, MAX_BODY_BYTES).await.map_err(|_| {
        ApiError::new(
            StatusCode::PAYLOAD_TOO_LARGE,
            "payload-too-large",
            format!("body exceeds {MAX_BODY_BYTES} bytes"),
        )
    })?;
    wire::parse_object(&bytes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Health<'a> {
    pub status: &'a str,
    pub checksum: &'a str,
    pub models: usize,
}

async fn health(State(state): State<Shared>) -> Response {
    let c = &state.catalog;
    ok(&Health { status: "ok", checksum: c.checksum(), models: c.models().count() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AreaSummary {
    pub area: DesignArea,
    pub title: String,
    pub patterns: usize,
    pub gateways: usize,
}

pub fn area_summaries(catalog: &Catalog) -> Vec<AreaSummary> {
    catalog
        .models()
        .map(|m| AreaSummary {
            area: m.area,
            title: m.meta.title.clone(),
            patterns: m.patterns.len(),
            gateways: m.gateways.len(),
        })
        .collect()
}

async fn list_areas(State(state): State<Shared>, headers: HeaderMap) -> Response {
    let etag = format!("\"{}\"", state.catalog.checksum());
    cached(&headers, &etag, &area_summaries(&state.catalog))
}

async fn get_model(
    State(state): State<Shared>,
    area: Result<Path<String>, PathRejection>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let model = model_for(&state, area)?;
    let etag = format!("\"{}-{}\"", state.catalog.checksum(), model.area);
    Ok(cached(&headers, &etag, model))
}

/// Pending questions for an answer set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NextQuestions {
    pub questions: Vec<Gateway>,
    pub active_patterns: Vec<String>,
    pub complete: bool,
}

impl NextQuestions {
    pub fn from_session(session: &Session<'_>) -> Self {
        let model = session.model();
        NextQuestions {
            questions: session.frontier().iter().map(|g| model.gateways[g].clone()).collect(),
            active_patterns: session.active_patterns().map(str::to_string).collect(),
            complete: session.is_complete(),
        }
    }
}

async fn next_questions(
    State(state): State<Shared>,
    area: Result<Path<String>, PathRejection>,
    body: Body,
) -> Result<Response, ApiError> {
    let model = model_for(&state, area)?;
    let req = read_object(body).await?;
    wire::expect_fields(&req, &["answers"])?;
    let answers = wire::decode_answers(req.get("answers"))?;
    let session = Session::from_answers(model, &answers)?;
    Ok(ok(&NextQuestions::from_session(&session)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recommendations {
    pub recommendations: Vec<qsa_core::engine::Recommendation>,
}

async fn recommend_handler(
    State(state): State<Shared>,
    area: Result<Path<String>, PathRejection>,
    body: Body,
) -> Result<Response, ApiError> {
    let model = model_for(&state, area)?;
    let req = read_object(body).await?;
    wire::expect_fields(&req, &["answers", "weights", "k"])?;
    let answers = wire::decode_answers(req.get("answers"))?;
    let weights = wire::decode_weights(req.get("weights"), "weights", state.catalog.vocabulary())?;
    let top = wire::decode_top(req.get("k"))?;
    let recommendations = recommend(model, &answers, &weights, top)?;
    Ok(ok(&Recommendations { recommendations }))
}

async fn auto_select_handler(
    State(state): State<Shared>,
    area: Result<Path<String>, PathRejection>,
    body: Body,
) -> Result<Response, ApiError> {
    let model = model_for(&state, area)?;
    let req = read_object(body).await?;
    wire::expect_fields(&req, &["weights"])?;
    let weights = wire::decode_weights(req.get("weights"), "weights", state.catalog.vocabulary())?;
    Ok(ok(&auto_select(model, &weights)?))
}

async fn compare_handler(
    State(state): State<Shared>,
    area: Result<Path<String>, PathRejection>,
    body: Body,
) -> Result<Response, ApiError> {
    let model = model_for(&state, area)?;
    let req = read_object(body).await?;
    wire::expect_fields(&req, &["answers", "weights_a", "weights_b"])?;
    let vocab = state.catalog.vocabulary();
    let answers = wire::decode_answers(req.get("answers"))?;
    let wa = wire::decode_weights(req.get("weights_a"), "weights_a", vocab)?;
    let wb = wire::decode_weights(req.get("weights_b"), "weights_b", vocab)?;
    Ok(ok(&compare_whatif(model, &answers, &wa, &wb)?))
}

async fn not_found(req: Request) -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not-found", format!("no route for {}", req.uri().path()))
}

async fn method_not_allowed(req: Request) -> ApiError {
    ApiError::new(
        StatusCode::METHOD_NOT_ALLOWED,
        "method-not-allowed",
        format!("{} is not supported on {}", req.method(), req.uri().path()),
    )
}

const ALLOW_METHODS: &str = "GET, POST, OPTIONS";
const ALLOW_HEADERS: &str = "content-type, if-none-match";

/// GETs are readable from any origin; POSTs only from configured origins.
async fn cors(State(state): State<Shared>, req: Request, next: Next) -> Response {
    let origin = req.headers().get(header::ORIGIN).and_then(|o| o.to_str().ok()).map(str::to_string);
    let preflight = req.method() == Method::OPTIONS
        && req.headers().contains_key(header::ACCESS_CONTROL_REQUEST_METHOD);

    if preflight {
        let wanted = req
            .headers()
            .get(header::ACCESS_CONTROL_REQUEST_METHOD)
            .and_then(|m| m.to_str().ok())
            .unwrap_or_default()
            .to_ascii_uppercase();
        let allow_origin = match (wanted.as_str(), &origin) {
            ("GET" | "HEAD", _) => "*".to_string(),
            (_, Some(o)) if state.config.origin_allowed(o) => o.clone(),
            _ => {
                return ApiError::new(StatusCode::FORBIDDEN, "origin-not-allowed", "origin may not POST to this API")
                    .with_detail(json!({ "origin": origin }))
                    .into_response()
            }
        };
        let mut resp = StatusCode::NO_CONTENT.into_response();
        let h = resp.headers_mut();
        h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static(ALLOW_METHODS));
        h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static(ALLOW_HEADERS));
        h.insert(header::ACCESS_CONTROL_MAX_AGE, HeaderValue::from_static("600"));
        set_allow_origin(h, &allow_origin);
        return resp;
    }

    let method = req.method().clone();
    let mut resp = next.run(req).await;
    let h = resp.headers_mut();
    if method == Method::GET || method == Method::HEAD {
        set_allow_origin(h, "*");
        h.insert(header::ACCESS_CONTROL_EXPOSE_HEADERS, HeaderValue::from_static("etag"));
    } else if let Some(o) = origin.filter(|o| state.config.origin_allowed(o)) {
        set_allow_origin(h, &o);
    }
    resp
}

fn set_allow_origin(h: &mut HeaderMap, origin: &str) {
    if let Ok(v) = HeaderValue::from_str(origin) {
        h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, v);
    }
    if origin != "*" {
        h.insert(header::VARY, HeaderValue::from_static("origin"));
    }
}

async fn log_request(State(state): State<Shared>, req: Request, next: Next) -> Response {
    if !state.config.log_requests {
        return next.run(req).await;
    }
    let method = req.method().to_string();
    let path = req.uri().path().to_string();
    let started = Instant::now();
    let resp = next.run(req).await;
    let line = json!({
        "method": method,
        "path": path,
        "status": resp.status().as_u16(),
        "duration_ms": started.elapsed().as_secs_f64() * 1000.0,
    });
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    resp
}
