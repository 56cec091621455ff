use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::activity::ActivityId;
use crate::day::DayRecord;
use crate::error::DomainError;
use crate::time::MINUTES_PER_DAY;

/// A duration target for an activity whose placement in the day is flexible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankableGoal {
    pub id: String,
    pub activity: ActivityId,
    pub target_minutes: u32,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoalProgress {
    pub logged_minutes: u32,
    /// Not capped at 1.
    pub fraction: f64,
    pub met: bool,
}

pub fn validate_target(target_minutes: u32) -> Result<(), DomainError> {
    if (1..=u32::from(MINUTES_PER_DAY)).contains(&target_minutes) {
        Ok(())
    } else {
        Err(DomainError::InvalidTarget(target_minutes))
    }
}

/// Accumulates every logged minute of the goal's activity on `day`.
pub fn bankable_progress(goal: &BankableGoal, day: &DayRecord) -> Result<GoalProgress, DomainError> {
    if goal.date != day.date {
        return Err(DomainError::DateMismatch {
            goal: goal.date,
            requested: day.date,
        });
    }
    let logged_minutes: u32 = day
        .logged
        .iter()
        .filter(|iv| iv.activity == goal.activity)
        .map(|iv| u32::from(iv.duration()))
        .sum();
    Ok(GoalProgress {
        logged_minutes,
        fraction: f64::from(logged_minutes) / f64::from(goal.target_minutes),
        met: logged_minutes >= goal.target_minutes,
    })
}
