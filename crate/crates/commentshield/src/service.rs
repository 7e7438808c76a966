//! HTTP/JSON service: prediction, feedback submission, a ranked feed and
//! reader profiles over one in-memory store.
//!
//! Feedback changes reader vectors immediately (they are rebuilt per
//! request) but heads are never retrained online. Readers with at least one
//! feedback record can be scored by personalized models; the stricter
//! `eligibility_min` only gates training and is reported by the profile.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use commentshield_core::commenter::CommenterModel;
use commentshield_core::corpus::{CorpusStore, FeedbackRecord};
use commentshield_core::encoder::PairEncoder;
use commentshield_core::personalizer::{Featurizer, ModelKind, OffensiveHead};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::artifacts::{self, AnyEncoder};
use crate::config::{RunConfig, ServiceConfig};
use crate::{jsonl, pipeline, Error, Result};

pub type Clock = Arc<dyn Fn() -> i64 + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs() as i64))
}

pub struct AppState {
    store: RwLock<CorpusStore>,
    encoder: AnyEncoder,
    commenter: Option<CommenterModel>,
    heads: BTreeMap<ModelKind, OffensiveHead>,
    cap: usize,
    eligibility_min: usize,
    settings: ServiceConfig,
    clock: Clock,
    feedback_log: Option<Mutex<(PathBuf, File)>>,
}

impl AppState {
    pub fn new(
        store: CorpusStore,
        encoder: AnyEncoder,
        commenter: Option<CommenterModel>,
        heads: BTreeMap<ModelKind, OffensiveHead>,
        config: &RunConfig,
    ) -> Result<Self> {
        for head in heads.values() {
            head.validate_fingerprints(encoder.fingerprint(), commenter.as_ref().map(CommenterModel::fingerprint))?;
        }
        let feedback_log = match &config.service.feedback_log {
            Some(path) => {
                let file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| Error::io(path, e))?;
                Some(Mutex::new((path.clone(), file)))
            }
            None => None,
        };
        Ok(Self {
            store: RwLock::new(store),
            encoder,
            commenter,
            heads,
            cap: config.cap,
            eligibility_min: config.eligibility_min,
            settings: config.service.clone(),
            clock: system_clock(),
            feedback_log,
        })
    }

    /// Loads the corpus and every head listed in `config.models`.
    pub fn load(config: &RunConfig) -> Result<Self> {
        let store = pipeline::load_store(config)?;
        let encoder = pipeline::build_encoder(config)?;
        let dir = &config.artifacts_dir;
        let commenter = if config.models.iter().any(|k| k.needs_commenter_model()) {
            Some(artifacts::load_commenter(&artifacts::commenter_path(dir), &encoder)?)
        } else {
            None
        };
        let mut heads = BTreeMap::new();
        for &kind in &config.models {
            let cm = if kind.needs_commenter_model() { commenter.as_ref() } else { None };
            heads.insert(kind, artifacts::load_head(&artifacts::head_path(dir, kind), &encoder, cm)?);
        }
        Self::new(store, encoder, commenter, heads, config)
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    fn read_store(&self) -> std::sync::RwLockReadGuard<'_, CorpusStore> {
        self.store.read().unwrap_or_else(|e| e.into_inner())
    }

    /// Scores `comment_ids` for one reader under one model kind.
    fn score(
        &self,
        store: &CorpusStore,
        model: &str,
        reader_id: Option<&str>,
        comment_ids: &[&str],
    ) -> Result<Vec<f64>, ApiError> {
        let kind: ModelKind =
            model.parse().map_err(|_| ApiError::bad_request(format!("unknown model kind `{model}`")))?;
        let head =
            self.heads.get(&kind).ok_or_else(|| ApiError::bad_request(format!("model kind `{kind}` is not loaded")))?;
        let reader = reader_id.unwrap_or_default();
        if kind.is_personalized() {
            if reader.is_empty() {
                return Err(ApiError::bad_request(format!("reader_id is required for model kind `{kind}`")));
            }
            if !store.has_reader(reader) {
                return Err(ApiError::not_found(format!("unknown reader `{reader}`")));
            }
            if store.feedback_count(reader) == 0 {
                return Err(ApiError::new(
                    StatusCode::CONFLICT,
                    "ineligible",
                    format!("reader `{reader}` has no offensive feedback; mark a comment or use no_personalization"),
                ));
            }
        }
        let cm = if kind.needs_commenter_model() { self.commenter.as_ref() } else { None };
        let mut f = Featurizer::new(store, &self.encoder, cm, self.cap)?;
        comment_ids
            .iter()
            .map(|cid| {
                store.comment(cid)?;
                let x = f.input_vector(kind, reader, cid)?;
                Ok(head.predict(&x)?)
            })
            .collect()
    }

    fn profile(&self, store: &CorpusStore, reader_id: &str) -> Profile {
        let feedback_count = store.feedback_count(reader_id);
        let model_kinds_available =
            self.heads.keys().copied().filter(|k| !k.is_personalized() || feedback_count > 0).collect();
        Profile {
            reader_id: reader_id.to_string(),
            feedback_count,
            eligible: feedback_count >= self.eligibility_min,
            model_kinds_available,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    error: &'static str,
    detail: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, detail: String) -> Self {
        Self { status, error, detail }
    }

    fn bad_request(detail: String) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", detail)
    }

    fn not_found(detail: String) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", detail)
    }
}

impl From<commentshield_core::Error> for ApiError {
    fn from(e: commentshield_core::Error) -> Self {
        use commentshield_core::Error as E;
        let detail = e.to_string();
        match e {
            E::Unknown { .. } | E::DanglingReference { .. } => Self::not_found(detail),
            E::EmptyFeedback(_) => Self::new(StatusCode::CONFLICT, "ineligible", detail),
            E::FeedbackConflict { .. } => Self::new(StatusCode::CONFLICT, "conflict", detail),
            E::InvalidRecord(_) | E::InvalidConfig(_) => Self::bad_request(detail),
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", detail),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::bad_request(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        Self::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.error, detail: self.detail })).into_response()
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictRequest {
    #[serde(default)]
    pub reader_id: Option<String>,
    pub comment_id: String,
    pub model: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictResponse {
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackRequest {
    pub reader_id: String,
    pub comment_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackResponse {
    pub accepted: bool,
    pub feedback_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedQuery {
    pub reader_id: Option<String>,
    pub model: String,
    pub threshold: Option<f64>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedItem {
    pub comment_id: String,
    pub news_text: String,
    pub comment_text: String,
    pub commenter_id: String,
    pub score: f64,
    /// `score >= threshold`.
    pub hidden: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub reader_id: String,
    pub feedback_count: usize,
    /// Enough feedback for training (`eligibility_min`).
    pub eligible: bool,
    pub model_kinds_available: Vec<ModelKind>,
}

type Shared = State<Arc<AppState>>;

async fn predict(
    State(state): Shared,
    body: Result<Json<PredictRequest>, JsonRejection>,
) -> Result<Json<PredictResponse>, ApiError> {
    let Json(req) = body?;
    let store = state.read_store();
    let score = state.score(&store, &req.model, req.reader_id.as_deref(), &[req.comment_id.as_str()])?[0];
    Ok(Json(PredictResponse { score }))
}

async fn feedback(
    State(state): Shared,
    body: Result<Json<FeedbackRequest>, JsonRejection>,
) -> Result<Json<FeedbackResponse>, ApiError> {
    let Json(req) = body?;
    let record = FeedbackRecord { reader_id: req.reader_id, comment_id: req.comment_id, rated_at: (state.clock)() };
    let mut store = state.store.write().unwrap_or_else(|e| e.into_inner());
    store.comment(&record.comment_id)?;
    let accepted = store.add_feedback(record.clone())?;
    if accepted {
        if let Some(log) = &state.feedback_log {
            let mut guard = log.lock().unwrap_or_else(|e| e.into_inner());
            let (path, file) = &mut *guard;
            let written =
                jsonl::append_to(file, &record, path).and_then(|()| file.flush().map_err(|e| Error::io(&*path, e)));
            if let Err(e) = written {
                eprintln!("feedback log: {e}");
            }
        }
    }
    Ok(Json(FeedbackResponse { accepted, feedback_count: store.feedback_count(&record.reader_id) }))
}

async fn feed(
    State(state): Shared,
    query: Result<Query<FeedQuery>, QueryRejection>,
) -> Result<Json<Vec<FeedItem>>, ApiError> {
    let Query(q) = query?;
    let threshold = q.threshold.unwrap_or(state.settings.default_threshold);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ApiError::bad_request(format!("threshold {threshold} is outside [0, 1]")));
    }
    let limit = q.limit.unwrap_or(state.settings.default_limit);
    let store = state.read_store();
    let comments = store.most_recent_comments(limit);
    let ids: Vec<&str> = comments.iter().map(|c| c.id.as_str()).collect();
    let scores = state.score(&store, &q.model, q.reader_id.as_deref(), &ids)?;
    let mut items = Vec::with_capacity(comments.len());
    for (c, score) in comments.iter().zip(scores) {
        items.push(FeedItem {
            comment_id: c.id.clone(),
            news_text: store.news_of(c)?.text.clone(),
            comment_text: c.text.clone(),
            commenter_id: c.commenter_id.clone(),
            score,
            hidden: score >= threshold,
        });
    }
    items.sort_by(|a, b| a.score.total_cmp(&b.score).then_with(|| a.comment_id.cmp(&b.comment_id)));
    Ok(Json(items))
}

async fn profile(State(state): Shared, Path(reader_id): Path<String>) -> Json<Profile> {
    let store = state.read_store();
    Json(state.profile(&store, &reader_id))
}

fn cors(origins: &[String]) -> Result<CorsLayer> {
    let layer = CorsLayer::new().allow_methods([Method::GET, Method::POST]).allow_headers(Any);
    if origins.iter().any(|o| o == "*") {
        return Ok(layer.allow_origin(Any));
    }
    let values = origins
        .iter()
        .map(|o| HeaderValue::from_str(o).map_err(|_| Error::Config(format!("invalid CORS origin `{o}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(layer.allow_origin(AllowOrigin::list(values)))
}

pub fn router(state: Arc<AppState>) -> Result<Router> {
    let cors = cors(&state.settings.cors_origins)?;
    Ok(Router::new()
        .route("/predict", post(predict))
        .route("/feedback", post(feedback))
        .route("/feed", get(feed))
        .route("/readers/{id}/profile", get(profile))
        .layer(cors)
        .with_state(state))
}

/// Serves until Ctrl-C.
pub async fn serve(state: AppState) -> Result<()> {
    let addr = format!("{}:{}", state.settings.host, state.settings.port);
    let app = router(Arc::new(state))?;
    let listener = tokio::net::TcpListener::bind(&addr).await.map_err(|e| Error::io(&addr, e))?;
    let local: SocketAddr = listener.local_addr().map_err(|e| Error::io(&addr, e))?;
    println!("{}", serde_json::json!({ "command": "serve", "listening": local.to_string() }));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(&addr, e))
}
