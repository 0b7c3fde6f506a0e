//! Stateless local JSON service.

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};

use crate::api::{handle_compute, handle_degeneracy, ComputeRequest, ErrorBody};
use crate::document::{config_from_value, DocumentError};

fn bad_request(error: DocumentError) -> Response {
    (StatusCode::BAD_REQUEST, Json(ErrorBody { error })).into_response()
}

fn parse_body(body: &Bytes) -> Result<Value, DocumentError> {
    serde_json::from_slice(body).map_err(|e| DocumentError {
        field: "$".into(),
        message: format!("invalid JSON: {e}"),
    })
}

async fn compute(body: Bytes) -> Response {
    let req = match parse_body(&body).and_then(|v| ComputeRequest::from_value(&v)) {
        Ok(r) => r,
        Err(e) => return bad_request(e),
    };
    let resp = tokio::task::spawn_blocking(move || handle_compute(&req))
        .await
        .expect("compute task panicked");
    Json(resp).into_response()
}

async fn degeneracy(body: Bytes) -> Response {
    match parse_body(&body).and_then(|v| config_from_value(&v)) {
        Ok(c) => Json(handle_degeneracy(&c)).into_response(),
        Err(e) => bad_request(e),
    }
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

pub fn router() -> Router {
    Router::new()
        .route("/api/compute", post(compute))
        .route("/api/degeneracy", post(degeneracy))
        .route("/api/health", get(health))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
