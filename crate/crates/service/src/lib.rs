//! HTTP/JSON API over exploration sessions and contexts.
//!
//! Every mutation is appended to an optional JSONL journal before the
//! response is sent; [`Store::open`] replays it to rebuild the same state.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fca_core::exploration::{violation_check, Answer, ExplorationSession};
use fca_core::implications::duquenne_guigues_base;
use fca_core::io::{parse_context, ContextFormat, ContextJson};
use fca_core::lattice::ConceptLattice;
use fca_core::{FcaError, FormalContext};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::RwLock;

pub struct ContextEntry {
    pub context: FormalContext,
    lattice: OnceLock<std::result::Result<Value, FcaError>>,
}

type SessionCell = Arc<RwLock<ExplorationSession>>;

/// Journal line.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum Event {
    Context { id: String, context: ContextJson },
    Session {
        id: String,
        #[serde(rename = "contextId")]
        context_id: String,
    },
    Answer { id: String, answer: Answer },
    Delete { id: String },
}

#[derive(Default)]
struct Maps {
    contexts: HashMap<String, Arc<ContextEntry>>,
    sessions: HashMap<String, SessionCell>,
    next_id: u64,
}

pub struct Store {
    maps: Mutex<Maps>,
    journal: Mutex<Option<File>>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("unknown {what} {id:?}"))
    }
}

impl From<FcaError> for ApiError {
    fn from(e: FcaError) -> Self {
        let status = if e.is_size_guard() {
            StatusCode::PAYLOAD_TOO_LARGE
        } else {
            StatusCode::BAD_REQUEST
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

fn journal_error(e: std::io::Error) -> ApiError {
    ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("journal write failed: {e}"))
}

impl Store {
    pub fn in_memory() -> Store {
        Store {
            maps: Mutex::new(Maps::default()),
            journal: Mutex::new(None),
        }
    }

    /// Replays `path` if it exists, then appends to it.
    pub fn open(path: &Path) -> std::io::Result<Store> {
        let store = Store::in_memory();
        if path.exists() {
            for (n, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let bad = |m: String| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("journal line {}: {m}", n + 1));
                let ev: Event = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
                store.apply(ev).map_err(|e| bad(format!("{:?}", e.body)))?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        *store.journal.lock().unwrap() = Some(file);
        Ok(store)
    }

    fn record(&self, ev: &Event) -> ApiResult<()> {
        if let Some(f) = self.journal.lock().unwrap().as_mut() {
            let line = serde_json::to_string(ev).expect("serializable") + "\n";
            f.write_all(line.as_bytes()).and_then(|_| f.flush()).map_err(journal_error)?;
        }
        Ok(())
    }

    fn fresh_id(maps: &mut Maps, prefix: &str) -> String {
        maps.next_id += 1;
        format!("{prefix}{}", maps.next_id)
    }

    fn bump(maps: &mut Maps, id: &str) {
        if let Some(n) = id.get(1..).and_then(|s| s.parse::<u64>().ok()) {
            maps.next_id = maps.next_id.max(n);
        }
    }

    /// Replays one journal event without writing it back.
    fn apply(&self, ev: Event) -> ApiResult<()> {
        match ev {
            Event::Context { id, context } => {
                let ctx = FormalContext::try_from(context)?;
                let mut m = self.maps.lock().unwrap();
                Self::bump(&mut m, &id);
                m.contexts.insert(id, Arc::new(entry(ctx)));
            }
            Event::Session { id, context_id } => {
                let ctx = self.context(&context_id)?;
                let s = ExplorationSession::start(ctx.context.clone())?;
                let mut m = self.maps.lock().unwrap();
                Self::bump(&mut m, &id);
                m.sessions.insert(id, Arc::new(RwLock::new(s)));
            }
            Event::Answer { id, answer } => {
                let cell = self.session(&id)?;
                let mut s = cell.try_write().expect("replay is single-threaded");
                s.answer(answer)?;
            }
            Event::Delete { id } => {
                self.maps.lock().unwrap().sessions.remove(&id);
            }
        }
        Ok(())
    }

    pub fn add_context(&self, ctx: FormalContext) -> ApiResult<String> {
        let mut m = self.maps.lock().unwrap();
        let id = Self::fresh_id(&mut m, "c");
        self.record(&Event::Context {
            id: id.clone(),
            context: ContextJson::from(&ctx),
        })?;
        m.contexts.insert(id.clone(), Arc::new(entry(ctx)));
        Ok(id)
    }

    pub fn context(&self, id: &str) -> ApiResult<Arc<ContextEntry>> {
        self.maps
            .lock()
            .unwrap()
            .contexts
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("context", id))
    }

    fn session(&self, id: &str) -> ApiResult<SessionCell> {
        self.maps
            .lock()
            .unwrap()
            .sessions
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("session", id))
    }

    pub fn open_session(&self, context_id: &str) -> ApiResult<(String, ExplorationSession)> {
        let ctx = self.context(context_id)?;
        let s = ExplorationSession::start(ctx.context.clone())?;
        let mut m = self.maps.lock().unwrap();
        let id = Self::fresh_id(&mut m, "s");
        self.record(&Event::Session {
            id: id.clone(),
            context_id: context_id.to_string(),
        })?;
        m.sessions.insert(id.clone(), Arc::new(RwLock::new(s.clone())));
        Ok((id, s))
    }

    pub async fn snapshot(&self, id: &str) -> ApiResult<ExplorationSession> {
        Ok(self.session(id)?.read().await.clone())
    }

    /// Applies an answer under the session's write lock; the journal line is
    /// written before the lock is released.
    pub async fn answer(&self, id: &str, answer: Answer) -> ApiResult<ExplorationSession> {
        let cell = self.session(id)?;
        let mut s = cell.write().await;
        let Some(question) = s.next_question().cloned() else {
            return Err(ApiError::new(StatusCode::CONFLICT, "session is not awaiting an answer"));
        };
        if let Answer::Counterexample { attributes, .. } = &answer {
            let attrs = s.context().attribute_set(attributes)?;
            let check = violation_check(&question, &attrs);
            let mut next = s.clone();
            if let Err(e) = next.answer(answer.clone()) {
                return Err(ApiError {
                    status: StatusCode::UNPROCESSABLE_ENTITY,
                    body: json!({ "error": e.to_string(), "check": check }),
                });
            }
            self.record(&Event::Answer { id: id.to_string(), answer })?;
            *s = next;
        } else {
            self.record(&Event::Answer { id: id.to_string(), answer: answer.clone() })?;
            s.answer(answer)?;
        }
        Ok(s.clone())
    }

    pub fn delete_session(&self, id: &str) -> ApiResult<()> {
        let mut m = self.maps.lock().unwrap();
        if !m.sessions.contains_key(id) {
            return Err(ApiError::not_found("session", id));
        }
        self.record(&Event::Delete { id: id.to_string() })?;
        m.sessions.remove(id);
        Ok(())
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.maps.lock().unwrap().sessions.keys().cloned().collect();
        ids.sort();
        ids
    }
}

fn entry(context: FormalContext) -> ContextEntry {
    ContextEntry {
        context,
        lattice: OnceLock::new(),
    }
}

impl ContextEntry {
    /// Lattice export, computed once per context.
    pub fn lattice_json(&self) -> std::result::Result<Value, FcaError> {
        self.lattice
            .get_or_init(|| ConceptLattice::from_context(&self.context).map(|l| l.to_json(&self.context)))
            .clone()
    }
}

/// Upload body: either a context in JSON form or `{format, data}` with the
/// text of a cxt/csv/json file.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum Upload {
    Text { format: String, data: String },
    Json(ContextJson),
}

#[derive(Deserialize)]
struct OpenSession {
    #[serde(rename = "contextId")]
    context_id: String,
}

fn progress(s: &ExplorationSession) -> Value {
    json!({
        "state": s.state(),
        "pending": s.next_question().map(|q| s.rule_json(q)),
    })
}

async fn post_context(State(store): State<Arc<Store>>, Json(up): Json<Upload>) -> ApiResult<(StatusCode, Json<Value>)> {
    let ctx = match up {
        Upload::Json(j) => FormalContext::try_from(j)?,
        Upload::Text { format, data } => parse_context(data.as_bytes(), format.parse::<ContextFormat>()?)?,
    };
    let id = store.add_context(ctx)?;
    Ok((StatusCode::CREATED, Json(json!({ "contextId": id }))))
}

async fn get_context(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let e = store.context(&id)?;
    Ok(Json(serde_json::to_value(ContextJson::from(&e.context)).expect("serializable")))
}

async fn get_lattice(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let e = store.context(&id)?;
    let v = tokio::task::spawn_blocking(move || e.lattice_json())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(v))
}

async fn get_dg_base(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let e = store.context(&id)?;
    Ok(Json(duquenne_guigues_base(&e.context).to_json(&e.context)))
}

async fn post_session(State(store): State<Arc<Store>>, Json(req): Json<OpenSession>) -> ApiResult<(StatusCode, Json<Value>)> {
    let (id, s) = store.open_session(&req.context_id)?;
    let mut body = progress(&s);
    body["sessionId"] = json!(id);
    Ok((StatusCode::CREATED, Json(body)))
}

async fn get_session(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    Ok(Json(store.snapshot(&id).await?.to_json()))
}

async fn post_answer(
    State(store): State<Arc<Store>>,
    UrlPath(id): UrlPath<String>,
    Json(answer): Json<Answer>,
) -> ApiResult<Json<Value>> {
    let s = store.answer(&id, answer).await?;
    Ok(Json(progress(&s)))
}

async fn delete_session(State(store): State<Arc<Store>>, UrlPath(id): UrlPath<String>) -> ApiResult<StatusCode> {
    store.delete_session(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/contexts", post(post_context))
        .route("/contexts/{id}", get(get_context))
        .route("/contexts/{id}/lattice", get(get_lattice))
        .route("/contexts/{id}/dg-base", get(get_dg_base))
        .route("/sessions", post(post_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/answer", post(post_answer))
        .with_state(store)
}
