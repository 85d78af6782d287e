//! HTTP API over a loaded [`Library`].
//!
//! | route | response |
//! |---|---|
//! | `GET /api/toc` | topic tree, `[{id, title, anchor, children}]` |
//! | `GET /api/book` | book records in order, `[{id, kind, anchor, html}]` |
//! | `GET /api/node/{id}` | `{id, kind, anchor, html, edges: {label: [id]}}` |
//! | `POST /api/query` | `QueryRequest` in, `QueryResponse` out |
//! | `GET /` | static reader assets, or a placeholder page |
//!
//! Errors are `{"error": message}` with status 400 or 404.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use textgraph_core::NodeRef;
use tower_http::services::ServeDir;

use crate::library::{Library, QueryRequest};

const PLACEHOLDER: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>textgraph</title></head>\n<body><p>No reader assets configured. The API is under <code>/api/</code>.</p></body></html>\n";

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

async fn toc(State(lib): State<Arc<Library>>) -> impl IntoResponse {
    Json(lib.toc())
}

async fn book(State(lib): State<Arc<Library>>) -> impl IntoResponse {
    Json(lib.book())
}

async fn node(State(lib): State<Arc<Library>>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let node = NodeRef::parse(&id).map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
    lib.node(&node)
        .map(Json)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown node {node}")))
}

async fn query(State(lib): State<Arc<Library>>, Json(req): Json<QueryRequest>) -> Result<impl IntoResponse, ApiError> {
    lib.query(&req)
        .map(Json)
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))
}

pub fn router(lib: Arc<Library>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/toc", get(toc))
        .route("/api/book", get(book))
        .route("/api/node/{id}", get(node))
        .route("/api/query", post(query))
        .with_state(lib);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER) })),
    }
}

/// Serves until interrupted.
pub async fn serve(lib: Library, addr: SocketAddr, ui_dir: Option<PathBuf>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(lib), ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
