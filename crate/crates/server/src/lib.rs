//! Stateless HTTP API over the SplitWeave library, plus static hosting of
//! the playground build.
//!
//! | method | path                   | body                                   |
//! |--------|------------------------|----------------------------------------|
//! | POST   | `/api/render`          | `{program, seed}` → `{svg, diagnostics}` |
//! | POST   | `/api/sample`          | `{style, seed}` → `{program}`          |
//! | POST   | `/api/edit`            | `{program, edit}` → `{program}`        |
//! | POST   | `/api/quartet/preview` | `{progA, edit, progB, seed}` → `{a, aPrime, b, bPrime}` |
//! | GET    | `/api/motifs`          | → `{motifs: [{id, source}]}`           |
//!
//! Every route is also mounted under `/api/v1`.

mod api;
mod error;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::DefaultBodyLimit;
use axum::response::Html;
use axum::routing::{get, post};
use axum::Router;
use tower_http::services::ServeDir;

use splitweave::motifs::MotifRegistry;
use splitweave::samplers::SamplerConfig;

pub use error::ApiError;

pub const DEFAULT_PORT: u16 = 8787;
pub const BODY_LIMIT: usize = 256 * 1024;
pub const RENDER_BUDGET: Duration = Duration::from_secs(5);

const PLACEHOLDER: &str = "<!doctype html>\n<title>SplitWeave</title>\n<p>The playground build was not found. The API is available under <code>/api/v1</code>.</p>\n";

/// Read-only configuration shared by all requests.
#[derive(Clone, Debug)]
pub struct AppState {
    pub registry: Arc<MotifRegistry>,
    pub config: Arc<SamplerConfig>,
    /// Wall-clock budget per request's pipeline run.
    pub budget: Duration,
}

impl Default for AppState {
    fn default() -> AppState {
        AppState { registry: Arc::new(MotifRegistry::builtin()), config: Arc::new(SamplerConfig::default()), budget: RENDER_BUDGET }
    }
}

fn api_routes() -> Router<AppState> {
    Router::new()
        .route("/render", post(api::render_handler))
        .route("/sample", post(api::sample))
        .route("/edit", post(api::edit))
        .route("/quartet/preview", post(api::quartet_preview))
        .route("/motifs", get(api::motifs))
}

/// API routes plus static files from `static_dir` at `/`, or a placeholder
/// page when no build is present.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let app = Router::new().nest("/api", api_routes()).nest("/api/v1", api_routes());
    let app = match static_dir.filter(|d| d.join("index.html").is_file()) {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(|| async { Html(PLACEHOLDER) })),
    };
    app.layer(DefaultBodyLimit::max(BODY_LIMIT)).with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, static_dir)).await
}
