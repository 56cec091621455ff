use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use timestream_core::store::save_journal;
use timestream_core::Journal;
use tokio::sync::Mutex;

use crate::error::ApiError;

/// Readers take cheap snapshots; writers queue on one mutex, edit a copy,
/// persist it and only then publish it.
pub struct AppState {
    path: PathBuf,
    snapshot: RwLock<Arc<Journal>>,
    writer: Mutex<()>,
}

impl AppState {
    pub fn new(path: impl Into<PathBuf>, journal: Journal) -> Self {
        AppState {
            path: path.into(),
            snapshot: RwLock::new(Arc::new(journal)),
            writer: Mutex::new(()),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn snapshot(&self) -> Arc<Journal> {
        Arc::clone(&self.snapshot.read().expect("snapshot lock poisoned"))
    }

    /// Applies `f` to a copy of the journal. Nothing changes, on disk or in
    /// memory, unless `f` and the save both succeed.
    pub async fn mutate<T>(&self, f: impl FnOnce(&mut Journal) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let _guard = self.writer.lock().await;
        let mut next = (*self.snapshot()).clone();
        let out = f(&mut next)?;
        save_journal(&next, &self.path)?;
        *self.snapshot.write().expect("snapshot lock poisoned") = Arc::new(next);
        Ok(out)
    }

    /// Writes the current snapshot, waiting for any in-flight mutation.
    pub async fn flush(&self) -> Result<(), ApiError> {
        let _guard = self.writer.lock().await;
        save_journal(&self.snapshot(), &self.path)?;
        Ok(())
    }
}
