//! Journal persistence: one pretty-printed JSON document per journal.
//!
//! Saves go through a temp file in the target directory followed by a rename,
//! so the target path always holds either the previous or the new document.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::error::DomainError;
use crate::journal::{Journal, JOURNAL_VERSION};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed journal: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("journal violates schema: {0}")]
    Schema(#[from] DomainError),
    #[error("unsupported journal version {0} (expected {JOURNAL_VERSION})")]
    UnsupportedVersion(u64),
}

impl StoreError {
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::Io { .. } => "IoFailure",
            StoreError::Parse(_) => "ParseError",
            StoreError::Schema(_) => "SchemaViolation",
            StoreError::UnsupportedVersion(_) => "UnsupportedVersion",
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        StoreError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Canonical text form: fixed field order, sorted days, trailing newline.
pub fn to_canonical_string(journal: &Journal) -> String {
    let mut canonical = journal.clone();
    for day in canonical.days.values_mut() {
        day.canonicalize();
    }
    let mut text = serde_json::to_string_pretty(&canonical).expect("journal serializes");
    text.push('\n');
    text
}

#[derive(Deserialize)]
struct VersionProbe {
    version: serde_json::Value,
}

/// Parses and validates a journal document.
pub fn parse_journal(text: &str) -> Result<Journal, StoreError> {
    let probe: VersionProbe = serde_json::from_str(text)?;
    match probe.version.as_u64() {
        Some(v) if v == u64::from(JOURNAL_VERSION) => {}
        Some(v) => return Err(StoreError::UnsupportedVersion(v)),
        None => {
            return Err(StoreError::Parse(serde::de::Error::custom(
                "version must be a non-negative integer",
            )))
        }
    }
    let mut journal: Journal = serde_json::from_str(text)?;
    for (date, day) in journal.days.iter_mut() {
        day.date = *date;
        day.canonicalize();
    }
    journal.validate()?;
    Ok(journal)
}

pub fn save_journal(journal: &Journal, path: &Path) -> Result<(), StoreError> {
    write_atomic(path, to_canonical_string(journal).as_bytes())
}

pub fn load_journal(path: &Path) -> Result<Journal, StoreError> {
    let text = fs::read_to_string(path).map_err(|e| StoreError::io(path, e))?;
    parse_journal(&text)
}

/// Loads the journal at `path`, or a fresh one when there is no file yet.
pub fn load_or_default(path: &Path) -> Result<Journal, StoreError> {
    match fs::metadata(path) {
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Journal::new()),
        _ => load_journal(path),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".journal-")
        .suffix(".tmp")
        .tempfile_in(dir)
        .map_err(|e| StoreError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| StoreError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| StoreError::io(path, e))?;
    tmp.persist(path).map_err(|e| StoreError::io(path, e.error))?;
    Ok(())
}

/// Exclusive advisory lock on `<journal>.lock`, held for the guard's lifetime.
#[derive(Debug)]
pub struct JournalLock {
    _file: File,
}

impl JournalLock {
    pub fn acquire(journal_path: &Path) -> Result<Self, StoreError> {
        let mut lock_path = journal_path.as_os_str().to_owned();
        lock_path.push(".lock");
        let lock_path = PathBuf::from(lock_path);
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| StoreError::io(&lock_path, e))?;
        file.lock().map_err(|e| StoreError::io(&lock_path, e))?;
        Ok(JournalLock { _file: file })
    }
}
