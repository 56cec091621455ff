use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::activity::ActivityId;
use crate::error::DomainError;
use crate::interval::{check_range, Interval, IntervalKey, IntervalKind};
use crate::time::MINUTES_PER_DAY;

/// A running on-the-go timer. Several distinct activities may run at once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActiveTimer {
    pub activity: ActivityId,
    pub started_at: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToggleOutcome {
    Started(ActiveTimer),
    Stopped(Interval),
    /// The timer was closed at the minute it started; nothing was logged.
    Discarded(ActiveTimer),
}

impl ToggleOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            ToggleOutcome::Started(_) => "started",
            ToggleOutcome::Stopped(_) => "stopped",
            ToggleOutcome::Discarded(_) => "discarded",
        }
    }
}

/// Everything recorded for one calendar date. Interval lists are kept sorted
/// by `(start, end, activity)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DayRecord {
    #[serde(skip)]
    pub date: NaiveDate,
    #[serde(default)]
    pub planned: Vec<Interval>,
    #[serde(default)]
    pub logged: Vec<Interval>,
    #[serde(default)]
    pub active: Vec<ActiveTimer>,
}

impl DayRecord {
    pub fn new(date: NaiveDate) -> Self {
        DayRecord {
            date,
            ..Default::default()
        }
    }

    pub fn intervals(&self, kind: IntervalKind) -> &[Interval] {
        match kind {
            IntervalKind::Planned => &self.planned,
            IntervalKind::Logged => &self.logged,
        }
    }

    fn intervals_mut(&mut self, kind: IntervalKind) -> &mut Vec<Interval> {
        match kind {
            IntervalKind::Planned => &mut self.planned,
            IntervalKind::Logged => &mut self.logged,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.planned.is_empty() && self.logged.is_empty() && self.active.is_empty()
    }

    /// Inserts an interval, rejecting same-activity overlap within the kind.
    /// Existence of the activity is the caller's concern.
    pub fn add_interval(&mut self, kind: IntervalKind, interval: Interval) -> Result<(), DomainError> {
        check_range(interval.start.into(), interval.end.into())?;
        let list = self.intervals_mut(kind);
        if list
            .iter()
            .any(|iv| iv.activity == interval.activity && iv.overlap(&interval) > 0)
        {
            return Err(DomainError::OverlapSameActivity {
                activity: interval.activity,
                start: interval.start,
                end: interval.end,
            });
        }
        let pos = list.partition_point(|iv| iv.sort_key() <= interval.sort_key());
        list.insert(pos, interval);
        Ok(())
    }

    pub fn remove_interval(&mut self, kind: IntervalKind, key: &IntervalKey) -> Result<Interval, DomainError> {
        let list = self.intervals_mut(kind);
        let pos = list
            .iter()
            .position(|iv| iv.activity == key.activity && iv.start == key.start)
            .ok_or_else(|| DomainError::UnknownInterval(key.to_string()))?;
        Ok(list.remove(pos))
    }

    pub fn timer(&self, activity: &ActivityId) -> Option<&ActiveTimer> {
        self.active.iter().find(|t| &t.activity == activity)
    }

    /// Starts a timer for `activity` if none runs, otherwise closes it into a
    /// logged `[started_at, now)`. Fails without side effects.
    pub fn toggle(&mut self, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        match self.timer(activity) {
            None => self.start_timer(activity, now),
            Some(_) => self.stop_timer(activity, now),
        }
    }

    pub fn start_timer(&mut self, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        if self.timer(activity).is_some() {
            return Err(DomainError::AlreadyActive(activity.clone()));
        }
        if now >= MINUTES_PER_DAY {
            return Err(DomainError::InvalidRange {
                start: now.into(),
                end: u32::from(now) + 1,
            });
        }
        let timer = ActiveTimer {
            activity: activity.clone(),
            started_at: now,
        };
        self.active.push(timer.clone());
        Ok(ToggleOutcome::Started(timer))
    }

    pub fn stop_timer(&mut self, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        let pos = self
            .active
            .iter()
            .position(|t| &t.activity == activity)
            .ok_or_else(|| DomainError::NotActive(activity.clone()))?;
        let started_at = self.active[pos].started_at;
        if now < started_at {
            return Err(DomainError::ClockRegression { started_at, now });
        }
        if now == started_at {
            let timer = self.active.remove(pos);
            return Ok(ToggleOutcome::Discarded(timer));
        }
        let interval = Interval::new(activity.clone(), started_at.into(), now.into())?;
        self.add_interval(IntervalKind::Logged, interval.clone())?;
        self.active.remove(pos);
        Ok(ToggleOutcome::Stopped(interval))
    }

    /// Closes every running timer at midnight and reopens it at 00:00 on a
    /// fresh record for the following date.
    ///
    /// A closing segment that would overlap an already logged interval of the
    /// same activity is dropped; the diary entry takes precedence.
    pub fn midnight_rollover(&self) -> (DayRecord, DayRecord) {
        let mut today = self.clone();
        let next_date = self.date.succ_opt().unwrap_or(self.date);
        let mut next = DayRecord::new(next_date);
        for timer in std::mem::take(&mut today.active) {
            let closed = Interval {
                activity: timer.activity.clone(),
                start: timer.started_at,
                end: MINUTES_PER_DAY,
            };
            let _ = today.add_interval(IntervalKind::Logged, closed);
            next.active.push(ActiveTimer {
                activity: timer.activity,
                started_at: 0,
            });
        }
        (today, next)
    }

    /// Checks range, overlap and timer invariants.
    pub fn validate(&self) -> Result<(), DomainError> {
        for kind in [IntervalKind::Planned, IntervalKind::Logged] {
            let mut probe = DayRecord::new(self.date);
            for iv in self.intervals(kind) {
                probe.add_interval(kind, iv.clone())?;
            }
        }
        for (i, timer) in self.active.iter().enumerate() {
            if timer.started_at >= MINUTES_PER_DAY {
                return Err(DomainError::InvalidRange {
                    start: timer.started_at.into(),
                    end: u32::from(timer.started_at) + 1,
                });
            }
            if self.active[..i].iter().any(|t| t.activity == timer.activity) {
                return Err(DomainError::AlreadyActive(timer.activity.clone()));
            }
        }
        Ok(())
    }

    /// Restores the canonical ordering of the interval lists.
    pub fn canonicalize(&mut self) {
        self.planned.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.logged.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }

    pub fn activities(&self) -> impl Iterator<Item = &ActivityId> {
        self.planned
            .iter()
            .chain(&self.logged)
            .map(|iv| &iv.activity)
            .chain(self.active.iter().map(|t| &t.activity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day() -> DayRecord {
        DayRecord::new(NaiveDate::from_ymd_opt(2024, 3, 4).unwrap())
    }

    fn iv(a: &str, s: u32, e: u32) -> Interval {
        Interval::new(ActivityId::from(a), s, e).unwrap()
    }

    #[test]
    fn insert_into_empty_day() {
        let mut d = day();
        d.add_interval(IntervalKind::Planned, iv("study", 840, 900)).unwrap();
        assert_eq!(d.planned.len(), 1);
        assert!(d.logged.is_empty());
    }

    #[test]
    fn same_activity_overlap_rejected() {
        let mut d = day();
        d.add_interval(IntervalKind::Planned, iv("study", 840, 900)).unwrap();
        let err = d.add_interval(IntervalKind::Planned, iv("study", 870, 930)).unwrap_err();
        assert_eq!(err.code(), "OverlapSameActivity");
        assert_eq!(d.planned.len(), 1);
        // touching is fine, and the other kind is independent
        d.add_interval(IntervalKind::Planned, iv("study", 900, 930)).unwrap();
        d.add_interval(IntervalKind::Logged, iv("study", 870, 930)).unwrap();
    }

    #[test]
    fn cross_activity_overlap_kept() {
        let mut d = day();
        d.add_interval(IntervalKind::Planned, iv("study", 840, 900)).unwrap();
        d.add_interval(IntervalKind::Planned, iv("leisure", 840, 900)).unwrap();
        assert_eq!(d.planned.len(), 2);
        d.validate().unwrap();
    }

    #[test]
    fn toggle_start_then_stop() {
        let mut d = day();
        let study = ActivityId::from("study");
        let out = d.toggle(&study, 540).unwrap();
        assert_eq!(out.label(), "started");
        assert_eq!(d.active, vec![ActiveTimer { activity: study.clone(), started_at: 540 }]);
        let out = d.toggle(&study, 600).unwrap();
        assert_eq!(out, ToggleOutcome::Stopped(iv("study", 540, 600)));
        assert!(d.active.is_empty());
        assert_eq!(d.logged, vec![iv("study", 540, 600)]);
    }

    #[test]
    fn concurrent_timers() {
        let mut d = day();
        d.toggle(&"study".into(), 540).unwrap();
        d.toggle(&"sleep".into(), 560).unwrap();
        assert_eq!(d.active.len(), 2);
    }

    #[test]
    fn zero_length_toggle_discards() {
        let mut d = day();
        d.toggle(&"study".into(), 540).unwrap();
        let out = d.toggle(&"study".into(), 540).unwrap();
        assert_eq!(out.label(), "discarded");
        assert!(d.active.is_empty() && d.logged.is_empty());
    }

    #[test]
    fn clock_regression_is_rejected_without_change() {
        let mut d = day();
        d.toggle(&"study".into(), 540).unwrap();
        let before = d.clone();
        let err = d.toggle(&"study".into(), 500).unwrap_err();
        assert_eq!(err, DomainError::ClockRegression { started_at: 540, now: 500 });
        assert_eq!(d, before);
    }

    #[test]
    fn overlap_on_close_keeps_timer() {
        let mut d = day();
        d.add_interval(IntervalKind::Logged, iv("study", 560, 580)).unwrap();
        d.toggle(&"study".into(), 540).unwrap();
        let err = d.toggle(&"study".into(), 600).unwrap_err();
        assert_eq!(err.code(), "OverlapSameActivity");
        assert_eq!(d.active.len(), 1);
    }

    #[test]
    fn stop_without_timer() {
        let mut d = day();
        assert_eq!(d.stop_timer(&"study".into(), 10).unwrap_err().code(), "NotActive");
    }

    #[test]
    fn rollover_single_timer() {
        let mut d = day();
        d.toggle(&"study".into(), 1380).unwrap();
        let (today, next) = d.midnight_rollover();
        assert_eq!(today.logged, vec![iv("study", 1380, 1440)]);
        assert!(today.active.is_empty());
        assert_eq!(next.date, NaiveDate::from_ymd_opt(2024, 3, 5).unwrap());
        assert_eq!(next.active, vec![ActiveTimer { activity: "study".into(), started_at: 0 }]);
    }

    #[test]
    fn rollover_without_timers_is_noop() {
        let mut d = day();
        d.add_interval(IntervalKind::Logged, iv("study", 10, 20)).unwrap();
        let (today, next) = d.midnight_rollover();
        assert_eq!(today, d);
        assert!(next.is_empty());
    }

    #[test]
    fn rollover_two_timers_matches_per_timer_application() {
        let mut d = day();
        d.toggle(&"study".into(), 1380).unwrap();
        d.toggle(&"sleep".into(), 1400).unwrap();
        let (today, next) = d.midnight_rollover();

        // oracle: apply the single-timer rule to each timer separately
        let mut expected_today = day();
        let mut expected_next = Vec::new();
        for t in &d.active {
            let mut single = day();
            single.active.push(t.clone());
            let (a, b) = single.midnight_rollover();
            for l in a.logged {
                expected_today.add_interval(IntervalKind::Logged, l).unwrap();
            }
            expected_next.extend(b.active);
        }
        assert_eq!(today, expected_today);
        assert_eq!(next.active, expected_next);
        assert_eq!(today.logged.len(), 2);
    }
}
