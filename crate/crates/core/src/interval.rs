use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::activity::ActivityId;
use crate::error::DomainError;
use crate::time::{self, MINUTES_PER_DAY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Planned,
    Logged,
}

impl IntervalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalKind::Planned => "planned",
            IntervalKind::Logged => "logged",
        }
    }
}

impl fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Half-open `[start, end)` span of one activity within one day. Whether it
/// is planned or logged is given by the list that holds it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub activity: ActivityId,
    pub start: u16,
    pub end: u16,
}

impl Interval {
    /// Builds an interval, checking `0 <= start < end <= 1440`.
    pub fn new(activity: ActivityId, start: u32, end: u32) -> Result<Self, DomainError> {
        check_range(start, end)?;
        Ok(Interval {
            activity,
            start: start as u16,
            end: end as u16,
        })
    }

    pub fn duration(&self) -> u16 {
        self.end - self.start
    }

    pub fn overlap(&self, other: &Interval) -> u16 {
        time::overlap(self.start, self.end, other.start, other.end)
    }

    /// Identifier used by the service and CLI: `<activity>@<start>`. Stable
    /// because same-activity intervals of one kind never share a start.
    pub fn key(&self) -> IntervalKey {
        IntervalKey {
            activity: self.activity.clone(),
            start: self.start,
        }
    }

    pub(crate) fn sort_key(&self) -> (u16, u16, &ActivityId) {
        (self.start, self.end, &self.activity)
    }
}

pub(crate) fn check_range(start: u32, end: u32) -> Result<(), DomainError> {
    if start < end && end <= u32::from(MINUTES_PER_DAY) {
        Ok(())
    } else {
        Err(DomainError::InvalidRange { start, end })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalKey {
    pub activity: ActivityId,
    pub start: u16,
}

impl fmt::Display for IntervalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.activity, self.start)
    }
}

impl FromStr for IntervalKey {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || DomainError::UnknownInterval(s.to_string());
        let (activity, start) = s.rsplit_once('@').ok_or_else(unknown)?;
        if activity.is_empty() {
            return Err(unknown());
        }
        let start = start.parse().map_err(|_| unknown())?;
        Ok(IntervalKey {
            activity: ActivityId::new(activity),
            start,
        })
    }
}
