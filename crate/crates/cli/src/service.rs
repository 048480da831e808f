//! JSON-over-HTTP endpoints for the explorer front end.
//!
//! Every endpoint takes a POST body of the form `{"problem": {...}, ...}`;
//! `/analyze`, `/path` and `/number` also accept a bare problem object.
//! Malformed bodies get 400, illegal moves and oversized inputs 422.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use descent_core::dc::{DcMove, Goal, SchubertProblem};
use descent_core::perm::Permutation;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ops::{self, Failure, MonkRequest};

pub fn router() -> Router {
    Router::new()
        .route("/health", get(|| async { Json(serde_json::json!({ "status": "ok" })) }))
        .route("/analyze", post(analyze).options(preflight))
        .route("/move", post(apply_move).options(preflight))
        .route("/path", post(path).options(preflight))
        .route("/number", post(number).options(preflight))
        .route("/monk", post(monk).options(preflight))
        .fallback(fallback)
        .layer(axum::middleware::map_response(allow_any_origin))
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

async fn allow_any_origin(mut res: Response) -> Response {
    let h = res.headers_mut();
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("content-type"));
    h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, OPTIONS"));
    res
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn fallback(method: Method) -> Response {
    if method == Method::OPTIONS {
        return StatusCode::NO_CONTENT.into_response();
    }
    error_response(StatusCode::NOT_FOUND, Failure::usage("not_found", "no such endpoint"))
}

fn status_of(f: &Failure) -> StatusCode {
    match f {
        Failure::Usage { .. } => StatusCode::BAD_REQUEST,
        Failure::IllegalMove { .. } | Failure::Resource(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Failure::Mismatch(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

fn error_response(status: StatusCode, f: Failure) -> Response {
    (status, Json(f.to_json())).into_response()
}

fn respond<T: Serialize>(result: Result<T, Failure>) -> Response {
    match result {
        Ok(body) => Json(body).into_response(),
        Err(f) => error_response(status_of(&f), f),
    }
}

fn malformed(e: impl std::fmt::Display) -> Failure {
    Failure::usage("malformed_request", e.to_string())
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, Failure> {
    serde_json::from_slice(body).map_err(malformed)
}

/// The `problem` member if present, else the whole body.
fn problem_of(body: &Value) -> Result<SchubertProblem, Failure> {
    let raw = body.get("problem").unwrap_or(body);
    ops::checked(SchubertProblem::deserialize(raw).map_err(malformed)?)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, Failure> + Send + 'static) -> Result<T, Failure> {
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| Err(Failure::Mismatch(format!("worker failed: {e}"))))
}

async fn analyze(body: Bytes) -> Response {
    respond(parse::<Value>(&body).and_then(|v| problem_of(&v)).map(|p| ops::analyze(&p)))
}

#[derive(Deserialize)]
struct MoveBody {
    problem: Value,
    #[serde(rename = "move")]
    mv: DcMove,
}

async fn apply_move(body: Bytes) -> Response {
    let result = parse::<MoveBody>(&body).and_then(|b| {
        let p = problem_of(&b.problem)?;
        ops::apply_move(&p, b.mv)
    });
    respond(result)
}

#[derive(Deserialize, Default)]
struct PathOptions {
    #[serde(default)]
    goal: Option<Goal>,
}

async fn path(body: Bytes) -> Response {
    let prepared = parse::<Value>(&body).and_then(|v| {
        let opts: PathOptions = PathOptions::deserialize(&v).map_err(malformed)?;
        Ok((problem_of(&v)?, opts.goal.unwrap_or(Goal::Easy)))
    });
    respond(match prepared {
        Ok((p, goal)) => blocking(move || ops::path(&p, goal)).await,
        Err(f) => Err(f),
    })
}

#[derive(Deserialize, Default)]
struct NumberOptions {
    #[serde(default)]
    double: bool,
}

async fn number(body: Bytes) -> Response {
    let prepared = parse::<Value>(&body).and_then(|v| {
        let opts: NumberOptions = NumberOptions::deserialize(&v).map_err(malformed)?;
        Ok((problem_of(&v)?, opts.double))
    });
    respond(match prepared {
        Ok((p, double)) => blocking(move || ops::number(&p, double)).await,
        Err(f) => Err(f),
    })
}

#[derive(Deserialize)]
struct MonkBody {
    pi: Permutation,
    i: usize,
    sigma: Permutation,
}

async fn monk(body: Bytes) -> Response {
    let prepared = parse::<MonkBody>(&body);
    respond(match prepared {
        Ok(b) => {
            if b.pi.degree() > ops::MAX_HEAVY_DEGREE {
                Err(Failure::Resource(format!("degree {} is above the limit", b.pi.degree())))
            } else {
                blocking(move || ops::monk(MonkRequest { pi: b.pi, i: b.i, sigma: b.sigma })).await
            }
        }
        Err(f) => Err(f),
    })
}
