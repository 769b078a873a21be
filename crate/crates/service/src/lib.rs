//! HTTP backend for a pairwise image comparison survey.
//!
//! Participants open a session, receive random image pairs with one of two
//! prompts, and submit a choice. Every submission is appended to a JSON-lines
//! event log and applied to per-prompt Glicko ratings; the ratings are always
//! a replay of that log.

pub mod api;
pub mod config;
pub mod demographics;
pub mod error;
pub mod journal;
pub mod survey;

use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

pub use api::{router, SharedSurvey};
pub use config::ServiceConfig;
pub use error::ServiceError;
pub use survey::Survey;

/// Opens the survey state described by `cfg` and wraps it for sharing.
pub fn open(cfg: &ServiceConfig) -> Result<SharedSurvey, ServiceError> {
    Ok(Arc::new(Mutex::new(Survey::open(cfg)?)))
}

/// Binds and serves until the process is stopped.
pub async fn serve(cfg: ServiceConfig) -> Result<(), ServiceError> {
    let state = open(&cfg)?;
    let app = router(state, cfg.static_dir.clone());
    let addr = SocketAddr::new(cfg.host, cfg.port);
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| ServiceError::Config(format!("bind {addr}: {e}")))?;
    log::info!("listening on http://{addr}");
    axum::serve(listener, app).await.map_err(|e| ServiceError::Config(e.to_string()))
}
