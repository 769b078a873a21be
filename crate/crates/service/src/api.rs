//! HTTP routes.
//!
//! | method | path                         | body / query                          |
//! |--------|------------------------------|---------------------------------------|
//! | POST   | `/api/sessions`              | `{age_range, gender, expertise}`      |
//! | GET    | `/api/sessions/{id}/next`    |                                       |
//! | POST   | `/api/comparisons/{id}`      | `{outcome, duration_ms}`              |
//! | GET    | `/api/rankings`              | `?dataset=&prompt=&max_rd=`           |
//! | GET    | `/api/export`                | JSON lines                            |
//! | GET    | `/images/{dataset}/{id}`     | image bytes                           |

use std::collections::HashMap;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard};

use aesthia_core::ranking::{Choice, Prompt};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::demographics::{Demographics, DemographicsInput};
use crate::error::ServiceError;
use crate::survey::Survey;

pub type SharedSurvey = Arc<Mutex<Survey>>;

pub struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        Self(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, field) = match &self.0 {
            ServiceError::Invalid { field, .. } => (StatusCode::BAD_REQUEST, Some(*field)),
            ServiceError::NotFound(_) => (StatusCode::NOT_FOUND, None),
            ServiceError::Conflict(_) => (StatusCode::CONFLICT, None),
            ServiceError::Core(aesthia_core::Error::Malformed(_)) => (StatusCode::BAD_REQUEST, None),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, None),
        };
        if status.is_server_error() {
            log::error!("{}", self.0);
        }
        let mut body = json!({ "error": self.0.to_string() });
        if let Some(f) = field {
            body["field"] = json!(f);
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn lock(state: &SharedSurvey) -> MutexGuard<'_, Survey> {
    // A panic mid-update cannot leave a half-applied event: journals are
    // written before in-memory state changes.
    state.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn parse_body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(bytes).map_err(|e| ServiceError::invalid("body", e.to_string()))
}

async fn create_session(State(state): State<SharedSurvey>, body: Bytes) -> ApiResult<Response> {
    let input: DemographicsInput = parse_body(&body)?;
    let demographics = Demographics::validate(input)?;
    let session = lock(&state).create_session(demographics)?;
    Ok((StatusCode::CREATED, Json(json!({ "session_id": session.session_id })))
        .into_response())
}

async fn next_comparison(State(state): State<SharedSurvey>, Path(id): Path<String>) -> ApiResult<Response> {
    let issued = lock(&state).next_comparison(&id)?;
    Ok(Json(issued).into_response())
}

#[derive(Deserialize)]
struct Submission {
    outcome: Option<serde_json::Value>,
    duration_ms: Option<serde_json::Value>,
}

async fn submit(State(state): State<SharedSurvey>, Path(id): Path<String>, body: Bytes) -> ApiResult<Response> {
    let sub: Submission = parse_body(&body)?;
    let outcome: Choice = sub
        .outcome
        .as_ref()
        .and_then(|v| v.as_str())
        .ok_or_else(|| ServiceError::invalid("outcome", "expected \"left\", \"right\" or \"tie\""))?
        .parse()
        .map_err(|e: aesthia_core::Error| ServiceError::invalid("outcome", e.to_string()))?;
    let duration_ms = sub
        .duration_ms
        .as_ref()
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ServiceError::invalid("duration_ms", "expected a non-negative integer"))?;
    lock(&state).submit(&id, outcome, duration_ms)?;
    Ok(Json(json!({ "ok": true })).into_response())
}

async fn rankings(State(state): State<SharedSurvey>, Query(q): Query<HashMap<String, String>>) -> ApiResult<Response> {
    let dataset = q.get("dataset").ok_or_else(|| ServiceError::invalid("dataset", "missing"))?;
    let prompt: Prompt = q
        .get("prompt")
        .ok_or_else(|| ServiceError::invalid("prompt", "missing"))?
        .parse()
        .map_err(|e: aesthia_core::Error| ServiceError::invalid("prompt", e.to_string()))?;
    let max_rd = match q.get("max_rd").filter(|s| !s.is_empty()) {
        None => None,
        Some(s) => Some(s.parse::<f64>().map_err(|_| ServiceError::invalid("max_rd", format!("'{s}' is not a number")))?),
    };
    let list = lock(&state).rankings(dataset, prompt, max_rd)?;
    Ok(Json(list).into_response())
}

async fn export(State(state): State<SharedSurvey>) -> Response {
    let body = lock(&state).export();
    ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response()
}

fn content_type(path: &FsPath) -> &'static str {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        Some("gif") => "image/gif",
        Some("webp") => "image/webp",
        Some("svg") => "image/svg+xml",
        _ => "application/octet-stream",
    }
}

async fn image(State(state): State<SharedSurvey>, Path((dataset, id)): Path<(String, String)>) -> ApiResult<Response> {
    let path = lock(&state)
        .image_path(&dataset, &id)
        .ok_or_else(|| ServiceError::NotFound(format!("image '{dataset}/{id}'")))?;
    let bytes = tokio::fs::read(&path).await.map_err(|e| ServiceError::io(&path, e))?;
    Ok(([(header::CONTENT_TYPE, content_type(&path))], bytes).into_response())
}

pub fn router(state: SharedSurvey, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}/next", get(next_comparison))
        .route("/api/comparisons/{id}", post(submit))
        .route("/api/rankings", get(rankings))
        .route("/api/export", get(export))
        .route("/images/{dataset}/{id}", get(image))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
