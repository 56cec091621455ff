//! JSON-over-HTTP access to a journal file for the web client and scripts.
//!
//! Every mutation is serialized through one writer and saved atomically
//! before its response is sent; queries read the last committed snapshot.

mod error;
mod extract;
mod routes;
mod state;

use std::future::Future;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;
use timestream_core::store::{load_or_default, StoreError};
use tokio::net::TcpListener;

pub use error::{status_for, ApiError};
pub use routes::{layout_config, router, ActiveEntry, BinsResponse, DatedGeometry, DayView, ToggleResponse, ViewQuery};
pub use state::AppState;

pub const DEFAULT_PORT: u16 = 8787;
pub const JOURNAL_FILE: &str = "journal.json";

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("invalid port {0:?}")]
    InvalidPort(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl ServeError {
    pub fn code(&self) -> &'static str {
        match self {
            ServeError::PortInUse(_) => "PortInUse",
            ServeError::InvalidPort(_) => "InvalidPort",
            ServeError::Io(_) => "IoFailure",
            ServeError::Store(e) => e.code(),
        }
    }
}

/// `$AR_DATA_DIR/journal.json`, defaulting to the working directory.
pub fn journal_path_from_env() -> PathBuf {
    let dir = std::env::var_os("AR_DATA_DIR").map_or_else(|| PathBuf::from("."), PathBuf::from);
    dir.join(JOURNAL_FILE)
}

pub fn port_from_env() -> Result<u16, ServeError> {
    match std::env::var("AR_PORT") {
        Ok(v) => v.parse().map_err(|_| ServeError::InvalidPort(v)),
        Err(_) => Ok(DEFAULT_PORT),
    }
}

/// Loads the journal at `path`, or starts an empty one if there is none.
pub fn open_state(path: &Path) -> Result<Arc<AppState>, ServeError> {
    let journal = load_or_default(path)?;
    Ok(Arc::new(AppState::new(path, journal)))
}

pub async fn bind(port: u16) -> Result<TcpListener, ServeError> {
    TcpListener::bind(("127.0.0.1", port)).await.map_err(|e| match e.kind() {
        io::ErrorKind::AddrInUse => ServeError::PortInUse(port),
        _ => ServeError::Io(e),
    })
}

/// Serves until `shutdown` resolves, then writes the journal one last time.
pub async fn run(
    listener: TcpListener,
    state: Arc<AppState>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    axum::serve(listener, router(Arc::clone(&state)))
        .with_graceful_shutdown(shutdown)
        .await?;
    state.flush().await.map_err(|e| ServeError::Io(io::Error::other(e.message)))
}

/// Serves `path` on localhost until interrupted.
pub async fn serve(path: &Path, port: u16) -> Result<(), ServeError> {
    let state = open_state(path)?;
    let listener = bind(port).await?;
    eprintln!("serving {} on http://127.0.0.1:{port}", path.display());
    run(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
