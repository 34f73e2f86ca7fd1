use std::future::Future;
use std::path::PathBuf;

use phytobase_core::narration::LanguageTag;
use phytobase_core::store::Database;
use phytobase_core::StoreError;
use thiserror::Error;
use tokio::net::TcpListener;

use crate::api::{app, AppState};
use crate::error::ApiError;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    /// `host:port`.
    pub bind: String,
    pub data: PathBuf,
    pub read_only: bool,
    pub default_language: LanguageTag,
}

impl ServiceConfig {
    pub fn new(data: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            bind: DEFAULT_BIND.to_string(),
            data: data.into(),
            read_only: false,
            default_language: LanguageTag::english(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("cannot bind {addr}: {source}")]
    BindFailure {
        addr: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("invalid configuration: {0}")]
    Config(ApiError),
    #[error("server failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Loads the store, binds, and serves until interrupted.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let db = Database::open(&config.data, config.read_only)?;
    let state = AppState::new(db, config.default_language.clone()).map_err(ServeError::Config)?;
    let listener =
        TcpListener::bind(&config.bind)
            .await
            .map_err(|source| ServeError::BindFailure {
                addr: config.bind.clone(),
                source,
            })?;
    tracing::info!(
        addr = %listener.local_addr()?,
        data = %config.data.display(),
        read_only = config.read_only,
        "serving"
    );
    serve_on(listener, state, shutdown_signal()).await
}

/// Serves on an already-bound listener until `shutdown` resolves, then
/// compacts the operation log into a fresh snapshot.
pub async fn serve_on(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    let db = state.db.clone();
    axum::serve(listener, app(state))
        .with_graceful_shutdown(shutdown)
        .await?;
    tracing::info!("shutting down");
    db.compact()?;
    Ok(())
}

async fn shutdown_signal() {
    if tokio::signal::ctrl_c().await.is_err() {
        std::future::pending::<()>().await;
    }
}
