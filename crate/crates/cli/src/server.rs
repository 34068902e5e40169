//! HTTP API backing the explorer UI.

use std::sync::{Arc, Mutex};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use qvgr::cluster::{QuantumSeed, SeedJson};
use qvgr::monomial::Site;

use crate::{quiver_json, QuiverJson};

#[derive(Debug, Deserialize)]
pub struct MutateRequest {
    pub vertex: Site,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeedView {
    pub seed: SeedJson,
    pub quiver: QuiverJson,
    /// Vertices mutated so far, oldest first.
    pub history: Vec<Site>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

struct Session {
    current: QuantumSeed,
    stack: Vec<(Site, QuantumSeed)>,
}

type Shared = Arc<Mutex<Session>>;

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

impl From<qvgr::Error> for ApiError {
    fn from(e: qvgr::Error) -> Self {
        let code = match e {
            qvgr::Error::UnknownVertex(_) => StatusCode::NOT_FOUND,
            qvgr::Error::Frozen(_) | qvgr::Error::Missing(_) => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(code, e.to_string())
    }
}

fn view(s: &Session) -> SeedView {
    SeedView {
        seed: s.current.to_json(),
        quiver: quiver_json(&s.current),
        history: s.stack.iter().map(|(v, _)| *v).collect(),
    }
}

async fn get_seed(State(st): State<Shared>) -> Json<SeedView> {
    Json(view(&st.lock().unwrap()))
}

async fn mutate(State(st): State<Shared>, Json(req): Json<MutateRequest>) -> Result<Json<SeedView>, ApiError> {
    let mut s = st.lock().unwrap();
    let next = s.current.mutate_at(req.vertex)?;
    let prev = std::mem::replace(&mut s.current, next);
    s.stack.push((req.vertex, prev));
    Ok(Json(view(&s)))
}

async fn undo(State(st): State<Shared>) -> Result<Json<SeedView>, ApiError> {
    let mut s = st.lock().unwrap();
    let (_, prev) = s
        .stack
        .pop()
        .ok_or_else(|| ApiError(StatusCode::CONFLICT, "nothing to undo".into()))?;
    s.current = prev;
    Ok(Json(view(&s)))
}

pub fn router(initial: QuantumSeed) -> Router {
    let st: Shared = Arc::new(Mutex::new(Session { current: initial, stack: Vec::new() }));
    Router::new()
        .route("/seed", get(get_seed))
        .route("/mutate", post(mutate))
        .route("/undo", post(undo))
        .with_state(st)
}

pub async fn serve(initial: QuantumSeed, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(initial)).await
}
