use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, Request, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use crate::session::{Role, ServiceError, SessionManager};

#[derive(Debug, Clone, Default)]
pub struct HttpConfig {
    /// Allowed browser origin; any origin when unset.
    pub cors_origin: Option<String>,
    /// Directory of static UI files served under `/`.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub role: Role,
}

#[derive(Debug, Deserialize)]
pub struct AnswerRequest {
    pub answer: usize,
}

#[derive(Debug, Deserialize)]
pub struct GuessRequest {
    pub word: String,
}

/// Error body: `{"error": kind, "message": text, "reason": rejection}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, kind, reason) = match &self {
            ServiceError::Unavailable => (StatusCode::SERVICE_UNAVAILABLE, "unavailable", None),
            ServiceError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found", None),
            ServiceError::Conflict(_) => (StatusCode::CONFLICT, "conflict", None),
            ServiceError::Validation { reason, .. } => (
                StatusCode::UNPROCESSABLE_ENTITY,
                "validation",
                reason.map(|r| r.code().to_owned()),
            ),
            ServiceError::Engine(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal", None),
        };
        let body = ErrorBody {
            error: kind.to_owned(),
            message: self.to_string(),
            reason,
        };
        (status, Json(body)).into_response()
    }
}

/// `Json` whose rejections use the service's error body.
struct Body<T>(T);

impl<S, T> FromRequest<S> for Body<T>
where
    Json<T>: FromRequest<S, Rejection = JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ServiceError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(e) => Err(ServiceError::Validation {
                message: e.body_text(),
                reason: None,
            }),
        }
    }
}

type Shared = Arc<SessionManager>;

/// Runs blocking game logic off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ServiceError>
where
    F: FnOnce() -> Result<T, ServiceError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.expect("session task panicked")
}

async fn create(State(m): State<Shared>, Body(req): Body<CreateRequest>) -> Result<impl IntoResponse, ServiceError> {
    let view = blocking(move || m.create(req.role)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn answer(
    State(m): State<Shared>,
    Path(id): Path<String>,
    Body(req): Body<AnswerRequest>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || m.answer(&id, req.answer)).await?))
}

async fn guess(
    State(m): State<Shared>,
    Path(id): Path<String>,
    Body(req): Body<GuessRequest>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || m.guess(&id, &req.word)).await?))
}

async fn session(State(m): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(m.get(&id)?))
}

async fn meta(State(m): State<Shared>) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(m.meta()?))
}

pub fn router(manager: Arc<SessionManager>, config: &HttpConfig) -> Router {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match config.cors_origin.as_deref().map(HeaderValue::from_str) {
        Some(Ok(origin)) => cors.allow_origin(origin),
        Some(Err(_)) => {
            log::warn!("ignoring unparsable CORS origin");
            cors.allow_origin(Any)
        }
        None => cors.allow_origin(Any),
    };
    let api = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(session))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/guess", post(guess))
        .route("/meta", get(meta))
        .with_state(manager);
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(cors)
}

/// Serves until Ctrl-C.
pub async fn serve(manager: SessionManager, config: HttpConfig, addr: SocketAddr) -> std::io::Result<()> {
    let app = router(Arc::new(manager), &config);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
