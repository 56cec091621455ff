//! Core engine for planning, logging and reflecting on self-defined daily
//! activities.
//!
//! A [`Journal`] holds activities, per-day planned and logged intervals, live
//! timers and bankable goals. [`layout`] turns a day into mirrored stacked
//! waves (logged above the baseline, planned below), [`analytics`] diffs plan
//! against log, and [`sim`] generates labelled scenario days.

pub mod activity;
pub mod analytics;
pub mod bins;
pub mod day;
pub mod error;
pub mod goal;
pub mod interval;
pub mod journal;
pub mod layout;
pub mod sim;
pub mod store;
pub mod time;

pub use activity::{ActivityDef, ActivityId};
pub use bins::{bin_day, BinMatrix};
pub use day::{ActiveTimer, DayRecord, ToggleOutcome};
pub use error::{DomainError, ErrorClass};
pub use goal::{bankable_progress, BankableGoal, GoalProgress};
pub use interval::{Interval, IntervalKey, IntervalKind};
pub use journal::{ActivityPatch, Journal, JOURNAL_VERSION};
