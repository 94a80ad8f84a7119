//! HTTP front end: `POST /classify` and `GET /health`.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use opinion_core::MulticlassModel;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MAX_BODY_BYTES: usize = 64 * 1024;

#[derive(Debug, Deserialize)]
pub struct ClassifyRequest {
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassifyResponse {
    pub label: String,
    pub scores: BTreeMap<String, f64>,
}

pub fn classify_response(model: &MulticlassModel, text: &str) -> ClassifyResponse {
    let p = model.classify_text(text);
    ClassifyResponse { label: p.label.to_string(), scores: p.named_scores().collect() }
}

fn error_body(status: StatusCode, message: String) -> Response {
    (status, Json(serde_json::json!({ "error": message }))).into_response()
}

async fn classify(
    State(model): State<Arc<MulticlassModel>>,
    body: Result<Json<ClassifyRequest>, JsonRejection>,
) -> Response {
    match body {
        Ok(Json(req)) => Json(classify_response(&model, &req.text)).into_response(),
        Err(rejection) => {
            let status = match rejection.status() {
                StatusCode::PAYLOAD_TOO_LARGE => StatusCode::PAYLOAD_TOO_LARGE,
                _ => StatusCode::BAD_REQUEST,
            };
            error_body(status, rejection.body_text())
        }
    }
}

async fn health() -> &'static str {
    "ok"
}

pub fn router(model: Arc<MulticlassModel>) -> Router {
    Router::new()
        .route("/classify", post(classify))
        .route("/health", get(health))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(model)
}

/// Binds `127.0.0.1:<port>` and serves until the process is stopped.
pub fn serve(model: MulticlassModel, port: u16) -> Result<(), CliError> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Internal(format!("runtime: {e}")))?;
    rt.block_on(async move {
        let addr = SocketAddr::from(([127, 0, 0, 1], port));
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Domain(format!("cannot bind {addr}: {e}")))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(Arc::new(model)))
            .await
            .map_err(|e| CliError::Internal(format!("server: {e}")))
    })
}
