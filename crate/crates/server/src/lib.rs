//! Interactive program sessions over HTTP and WebSocket.
//!
//! Routes:
//!
//! - `GET /api/libraries`: `.ppglib` file names in the library directory
//! - `GET /api/libraries/{lib}/entries`: `[{"name", "comment"}]`
//! - `POST /api/sessions` with `{"lib", "entry"}` or `{"source"}`: `{"id"}`
//! - `GET /api/sessions/{id}`: state and pending prompt
//! - `POST /api/sessions/{id}/answer` with `{"type":"answer","answer":...}`
//! - `GET /api/sessions/{id}/ws`, also `/api/sessions/{id}` with an upgrade:
//!   prompt and result stream
//! - `GET /api/sessions/{id}/result.svg`

pub mod session;
pub mod wire;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::ws::rejection::WebSocketUpgradeRejection;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pgen_core::builtins::Registry;
use pgen_core::library::{Library, LibraryError};
use pgen_core::pipeline::compile_source;
use pgen_core::vm::Limits;
use serde::Serialize;
use serde_json::json;

pub use session::{Session, State as SessionState, SubmitError};
pub use wire::{ClientMessage, Outcome, ServerMessage, SessionRequest};

pub const DEFAULT_PORT: u16 = 8741;

pub struct AppState {
    lib_dir: PathBuf,
    limits: Limits,
    next_id: AtomicU64,
    sessions: Mutex<HashMap<String, Arc<Session>>>,
}

impl AppState {
    pub fn new(lib_dir: impl Into<PathBuf>, limits: Limits) -> Arc<Self> {
        Arc::new(Self {
            lib_dir: lib_dir.into(),
            limits,
            next_id: AtomicU64::new(1),
            sessions: Mutex::new(HashMap::new()),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no session '{id}'")))
    }

    fn library(&self, name: &str) -> Result<Library, ApiError> {
        let plain = !name.is_empty()
            && FsPath::new(name).file_name().is_some_and(|f| f == name)
            && name.ends_with(".ppglib");
        if !plain {
            return Err(ApiError::not_found(format!("no library '{name}'")));
        }
        Library::open_existing(self.lib_dir.join(name)).map_err(|e| match e {
            LibraryError::Io(ref io) if io.kind() == std::io::ErrorKind::NotFound => {
                ApiError::not_found(format!("no library '{name}'"))
            }
            e => ApiError::internal(e.to_string()),
        })
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, message)
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<SubmitError> for ApiError {
    fn from(e: SubmitError) -> Self {
        let status = StatusCode::from_u16(e.status()).unwrap_or(StatusCode::CONFLICT);
        Self::new(status, e.message())
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn app(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/libraries", get(list_libraries))
        .route("/api/libraries/{lib}/entries", get(list_entries))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(session_status))
        .route("/api/sessions/{id}/ws", get(session_socket))
        .route("/api/sessions/{id}/answer", post(answer))
        .route("/api/sessions/{id}/result.svg", get(result_svg))
        .with_state(state)
}

/// Serves until the process ends.
pub async fn serve(addr: SocketAddr, lib_dir: PathBuf) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app(AppState::new(lib_dir, Limits::default()))).await
}

async fn list_libraries(State(st): State<Arc<AppState>>) -> ApiResult<Json<Vec<String>>> {
    let dir = std::fs::read_dir(&st.lib_dir).map_err(|e| ApiError::internal(e.to_string()))?;
    let mut names: Vec<String> = dir
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "ppglib") && e.path().is_file())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();
    Ok(Json(names))
}

#[derive(Serialize)]
struct EntryInfo {
    name: String,
    comment: String,
}

async fn list_entries(State(st): State<Arc<AppState>>, Path(lib): Path<String>) -> ApiResult<Json<Vec<EntryInfo>>> {
    let lib = st.library(&lib)?;
    Ok(Json(
        lib.list_entries()
            .into_iter()
            .map(|(name, comment)| EntryInfo { name, comment })
            .collect(),
    ))
}

async fn create_session(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    let req: SessionRequest = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let cp = match req {
        SessionRequest::Library(r) => st.library(&r.lib)?.load_entry(&r.entry, Registry::global()).map_err(|e| match e {
            LibraryError::UnknownName(_) => ApiError::not_found(format!("no entry '{}' in '{}'", r.entry, r.lib)),
            e => ApiError::internal(e.to_string()),
        })?,
        SessionRequest::Source(s) => compile_source(&s.source).map_err(|diags| {
            let lines: Vec<String> = diags
                .iter()
                .map(|d| format!("{}:{}: {}", d.pos.line, d.pos.column, d.message))
                .collect();
            ApiError::bad_request(lines.join("\n"))
        })?,
    };
    let id = format!("s{}", st.next_id.fetch_add(1, Ordering::Relaxed));
    let session = Session::start(id.clone(), cp, st.limits);
    st.sessions.lock().unwrap().insert(id.clone(), session);
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))))
}

async fn session_status(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    ws: Result<WebSocketUpgrade, WebSocketUpgradeRejection>,
) -> ApiResult<Response> {
    let session = st.session(&id)?;
    if let Ok(ws) = ws {
        return Ok(ws.on_upgrade(move |socket| drive_socket(socket, session)));
    }
    let view = session.view();
    Ok(Json(json!({
        "id": id,
        "state": view.state,
        "prompt": view.pending.map(|(_, p)| p),
    }))
    .into_response())
}

async fn session_socket(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    ws: WebSocketUpgrade,
) -> ApiResult<Response> {
    let session = st.session(&id)?;
    Ok(ws.on_upgrade(move |socket| drive_socket(socket, session)))
}

async fn answer(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<StatusCode> {
    let session = st.session(&id)?;
    let ClientMessage::Answer { answer } =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    session.submit(answer)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn result_svg(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = st.session(&id)?;
    match session.view().result {
        Some(done) => Ok(([(header::CONTENT_TYPE, "image/svg+xml")], done.svg).into_response()),
        None => Err(ApiError::new(StatusCode::CONFLICT, "session has not finished")),
    }
}

async fn send(socket: &mut WebSocket, msg: &ServerMessage) -> bool {
    socket.send(Message::Text(msg.to_json().into())).await.is_ok()
}

async fn drive_socket(mut socket: WebSocket, session: Arc<Session>) {
    let mut changes = session.subscribe();
    let mut sent_prompt = 0;
    loop {
        let view = session.view();
        if let Some(done) = view.result {
            let _ = send(&mut socket, &ServerMessage::result(&done.outcome, done.svg)).await;
            let _ = socket.send(Message::Close(None)).await;
            return;
        }
        if let Some((seq, prompt)) = view.pending {
            if seq != sent_prompt {
                sent_prompt = seq;
                if !send(&mut socket, &ServerMessage::Prompt { prompt }).await {
                    session.abort();
                    return;
                }
            }
        }
        tokio::select! {
            changed = changes.changed() => {
                if changed.is_err() {
                    return;
                }
            }
            msg = socket.recv() => {
                let text = match msg {
                    Some(Ok(Message::Text(t))) => t,
                    Some(Ok(Message::Ping(_) | Message::Pong(_))) => continue,
                    Some(Ok(Message::Binary(_))) => {
                        let reply = ServerMessage::Error { status: 400, message: "binary frames are not accepted".into() };
                        if !send(&mut socket, &reply).await {
                            session.abort();
                            return;
                        }
                        continue;
                    }
                    _ => {
                        session.abort();
                        return;
                    }
                };
                let reply = match serde_json::from_str::<ClientMessage>(&text) {
                    Err(e) => Some(ServerMessage::Error { status: 400, message: e.to_string() }),
                    Ok(ClientMessage::Answer { answer }) => session
                        .submit(answer)
                        .err()
                        .map(|e| ServerMessage::Error { status: e.status(), message: e.message() }),
                };
                if let Some(reply) = reply {
                    if !send(&mut socket, &reply).await {
                        session.abort();
                        return;
                    }
                }
            }
        }
    }
}
