use thiserror::Error;

use crate::activity::ActivityId;

/// Coarse grouping of domain failures, used by the service and CLI surfaces
/// to pick a status code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    NotFound,
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("activity name must not be empty")]
    EmptyName,
    #[error("invalid color {0:?}, expected #RRGGBB")]
    InvalidColor(String),
    #[error("an active activity named {0:?} already exists")]
    DuplicateName(String),
    #[error("stack order {0} is already used by another activity")]
    DuplicateOrder(u32),
    #[error("unknown activity {0}")]
    UnknownActivity(ActivityId),
    #[error("activity {0} is archived")]
    ArchivedActivity(ActivityId),
    #[error("invalid range {start}..{end}, expected 0 <= start < end <= 1440")]
    InvalidRange { start: u32, end: u32 },
    #[error("interval {start}..{end} overlaps an existing interval of activity {activity}")]
    OverlapSameActivity {
        activity: ActivityId,
        start: u16,
        end: u16,
    },
    #[error("clock went backwards: {now} is before the timer start {started_at}")]
    ClockRegression { started_at: u16, now: u16 },
    #[error("activity {0} has no running timer")]
    NotActive(ActivityId),
    #[error("activity {0} already has a running timer")]
    AlreadyActive(ActivityId),
    #[error("no interval {0}")]
    UnknownInterval(String),
    #[error("unknown goal {0}")]
    UnknownGoal(String),
    #[error("target must be between 1 and 1440 minutes, got {0}")]
    InvalidTarget(u32),
    #[error("goal is for {goal}, not {requested}")]
    DateMismatch {
        goal: chrono::NaiveDate,
        requested: chrono::NaiveDate,
    },
}

impl DomainError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            DomainError::EmptyName => "EmptyName",
            DomainError::InvalidColor(_) => "InvalidColor",
            DomainError::DuplicateName(_) => "DuplicateName",
            DomainError::DuplicateOrder(_) => "DuplicateOrder",
            DomainError::UnknownActivity(_) => "UnknownActivity",
            DomainError::ArchivedActivity(_) => "ArchivedActivity",
            DomainError::InvalidRange { .. } => "InvalidRange",
            DomainError::OverlapSameActivity { .. } => "OverlapSameActivity",
            DomainError::ClockRegression { .. } => "ClockRegression",
            DomainError::NotActive(_) => "NotActive",
            DomainError::AlreadyActive(_) => "AlreadyActive",
            DomainError::UnknownInterval(_) => "UnknownInterval",
            DomainError::UnknownGoal(_) => "UnknownGoal",
            DomainError::InvalidTarget(_) => "InvalidTarget",
            DomainError::DateMismatch { .. } => "DateMismatch",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            DomainError::EmptyName
            | DomainError::InvalidColor(_)
            | DomainError::DuplicateName(_)
            | DomainError::DuplicateOrder(_)
            | DomainError::InvalidRange { .. }
            | DomainError::InvalidTarget(_)
            | DomainError::DateMismatch { .. } => ErrorClass::Validation,
            DomainError::UnknownActivity(_)
            | DomainError::UnknownInterval(_)
            | DomainError::UnknownGoal(_) => ErrorClass::NotFound,
            DomainError::ArchivedActivity(_)
            | DomainError::OverlapSameActivity { .. }
            | DomainError::ClockRegression { .. }
            | DomainError::NotActive(_)
            | DomainError::AlreadyActive(_) => ErrorClass::Conflict,
        }
    }
}
