//! Stateless HTTP facade: `POST /v1/{validate,check,sets,probe,experiment}`.
//!
//! Request body: `{"network": <document>, "predictor": <predictor>?,
//! "options": {...}?}`. Responses are reports in the same schema the
//! command line writes; `/v1/experiment` streams line-delimited JSON events.

use std::convert::Infallible;
use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::Router;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use tokio::sync::Semaphore;
use tower_http::cors::{Any, CorsLayer};

use crate::error::Error;
use crate::harness::experiment::{check_config, ExperimentConfig};
use crate::model::doc;
use crate::report::{self, CheckConfig, Inputs, Report};

pub const BODY_LIMIT: usize = 1 << 20;
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: String,
    pub jobs: usize,
    /// Allowed CORS origin; any origin when `None`.
    pub cors_origin: Option<String>,
}

impl ServiceConfig {
    /// Reads `NETINFORM_ADDR`, `NETINFORM_JOBS` and `NETINFORM_CORS_ORIGIN`.
    pub fn from_env() -> Self {
        let jobs = std::env::var("NETINFORM_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&j: &usize| j > 0)
            .unwrap_or(1);
        ServiceConfig {
            addr: std::env::var("NETINFORM_ADDR").unwrap_or_else(|_| DEFAULT_ADDR.into()),
            jobs,
            cors_origin: std::env::var("NETINFORM_CORS_ORIGIN").ok(),
        }
    }
}

#[derive(Clone)]
struct AppState {
    workers: Arc<Semaphore>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    pointer: Option<String>,
}

impl ApiError {
    fn bad_request(message: impl Into<String>, pointer: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
            pointer: Some(pointer.into()),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.into(),
            pointer: None,
        }
    }

    /// Maps a library error; schema pointers are prefixed with `prefix`.
    fn from_error(e: Error, prefix: &str) -> Self {
        match e {
            Error::Schema { pointer, message } => Self::bad_request(message, format!("{prefix}{pointer}")),
            Error::UnknownLabel { label, pointer } => {
                Self::bad_request(format!("unknown label `{label}`"), format!("{prefix}{pointer}"))
            }
            Error::Io(m) => ApiError {
                status: StatusCode::INTERNAL_SERVER_ERROR,
                message: m,
                pointer: None,
            },
            other => Self::unprocessable(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({"error": self.message});
        if let Some(p) = self.pointer {
            body["pointer"] = Value::String(p);
        }
        (self.status, axum::Json(body)).into_response()
    }
}

type ApiResult = std::result::Result<Response, ApiError>;

struct Request {
    inputs: Inputs,
    options: Value,
}

fn parse_request(body: &Bytes) -> std::result::Result<Request, ApiError> {
    let v: Value = serde_json::from_slice(body).map_err(|e| ApiError::bad_request(e.to_string(), ""))?;
    let obj = v.as_object().ok_or_else(|| ApiError::bad_request("expected object", ""))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "network" | "predictor" | "options") {
            return Err(ApiError::bad_request("unknown field", format!("/{key}")));
        }
    }
    let network = obj
        .get("network")
        .cloned()
        .ok_or_else(|| ApiError::bad_request("missing field", "/network"))?;
    let parsed = doc::parse_value(&network).map_err(|e| ApiError::from_error(e, "/network"))?;
    let predictor = obj.get("predictor").cloned();
    if let Some(p) = &predictor {
        doc::parse_predictor_doc(p, &parsed.network).map_err(|e| ApiError::from_error(e, "/predictor"))?;
    }
    let inputs = Inputs::from_values(network, predictor).map_err(|e| ApiError::from_error(e, ""))?;
    Ok(Request {
        inputs,
        options: obj.get("options").cloned().unwrap_or_else(|| json!({})),
    })
}

fn options<T: DeserializeOwned>(v: &Value) -> std::result::Result<T, ApiError> {
    serde_json::from_value(v.clone()).map_err(|e| ApiError::bad_request(e.to_string(), "/options"))
}

fn json_response(r: &Report) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], r.to_json()).into_response()
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> std::result::Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
        pointer: None,
    })
}

async fn validate(body: Bytes) -> ApiResult {
    let req = parse_request(&body)?;
    Ok(json_response(&report::run_validate(&req.inputs)))
}

async fn sets(body: Bytes) -> ApiResult {
    let req = parse_request(&body)?;
    let r = report::run_sets(&req.inputs).map_err(|e| ApiError::from_error(e, ""))?;
    Ok(json_response(&r))
}

async fn check(body: Bytes) -> ApiResult {
    let req = parse_request(&body)?;
    let cfg: CheckConfig = options(&req.options)?;
    let r = blocking(move || report::run_check(&req.inputs, &cfg))
        .await?
        .map_err(|e| ApiError::from_error(e, ""))?;
    if let Some(h) = r.errors.iter().find(|e| e.starts_with("hypothesis violated")) {
        return Err(ApiError::unprocessable(h.clone()));
    }
    Ok(json_response(&r))
}

async fn probe(body: Bytes) -> ApiResult {
    let req = parse_request(&body)?;
    let cfg: CheckConfig = options(&req.options)?;
    let r = blocking(move || report::run_probe(&req.inputs, &cfg))
        .await?
        .map_err(|e| ApiError::from_error(e, ""))?;
    Ok(json_response(&r))
}

async fn experiment(State(state): State<AppState>, body: Bytes) -> ApiResult {
    let req = parse_request(&body)?;
    let mut cfg: ExperimentConfig = options(&req.options)?;
    cfg.jobs = 1;
    check_config(&cfg).map_err(|e| ApiError::unprocessable(e.to_string()))?;
    req.inputs.predictor().map_err(|e| ApiError::from_error(e, ""))?;
    let permit = state.workers.clone().acquire_owned().await.map_err(|e| ApiError {
        status: StatusCode::SERVICE_UNAVAILABLE,
        message: e.to_string(),
        pointer: None,
    })?;
    let (tx, rx) = tokio::sync::mpsc::unbounded_channel::<String>();
    tokio::task::spawn_blocking(move || {
        let _permit = permit;
        let progress_tx = tx.clone();
        let progress = move |p: crate::harness::experiment::Progress| {
            let mut v = serde_json::to_value(&p).expect("progress");
            v["event"] = json!("progress");
            let _ = progress_tx.send(format!("{v}\n"));
        };
        let line = match report::run_experiment(&req.inputs, &cfg, &progress) {
            Ok(r) => json!({"event": "report", "report": r}),
            Err(e) => json!({"event": "error", "error": e.to_string()}),
        };
        let _ = tx.send(format!("{line}\n"));
    });
    let stream = futures::stream::unfold(rx, |mut rx| async move {
        rx.recv().await.map(|line| (Ok::<_, Infallible>(line), rx))
    });
    Ok((
        [(header::CONTENT_TYPE, "application/x-ndjson")],
        Body::from_stream(stream),
    )
        .into_response())
}

pub fn router(cfg: &ServiceConfig) -> Router {
    let cors = match cfg.cors_origin.as_deref().and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(origin) => CorsLayer::new().allow_origin(origin),
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);
    let state = AppState {
        workers: Arc::new(Semaphore::new(cfg.jobs.max(1))),
    };
    Router::new()
        .route("/v1/validate", post(validate))
        .route("/v1/check", post(check))
        .route("/v1/sets", post(sets))
        .route("/v1/probe", post(probe))
        .route("/v1/experiment", post(experiment))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(&cfg.addr).await?;
    axum::serve(listener, router(&cfg)).await
}
