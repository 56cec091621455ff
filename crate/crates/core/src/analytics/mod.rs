//! Plan-versus-log reflection: deviation patterns and adherence scores.

mod adherence;
mod matching;
mod patterns;

pub use adherence::{adherence_score, day_adherence, AdherenceReport};
pub use matching::{match_intervals, Matching};
pub use patterns::{detect, detect_patterns, sort_events, DetectorConfig, PatternEvent, PatternKind};
