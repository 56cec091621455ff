use std::collections::{BTreeMap, HashSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::activity::{normalize_name, same_name, validate_color, ActivityDef, ActivityId};
use crate::bins::{bin_day, BinMatrix};
use crate::day::{DayRecord, ToggleOutcome};
use crate::error::DomainError;
use crate::goal::{bankable_progress, validate_target, BankableGoal, GoalProgress};
use crate::interval::{Interval, IntervalKey, IntervalKind};

pub const JOURNAL_VERSION: u32 = 1;

/// The whole persisted state of one person's tracking.
///
/// Mutations either succeed completely or leave the journal untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Journal {
    pub version: u32,
    pub activities: Vec<ActivityDef>,
    pub days: BTreeMap<NaiveDate, DayRecord>,
    pub goals: Vec<BankableGoal>,
}

impl Default for Journal {
    fn default() -> Self {
        Journal {
            version: JOURNAL_VERSION,
            activities: Vec::new(),
            days: BTreeMap::new(),
            goals: Vec::new(),
        }
    }
}

/// Partial update for an activity; `None` leaves the field as is.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityPatch {
    pub name: Option<String>,
    pub color: Option<String>,
    pub order: Option<u32>,
    pub archived: Option<bool>,
}

impl Journal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn activity(&self, id: &ActivityId) -> Option<&ActivityDef> {
        self.activities.iter().find(|a| &a.id == id)
    }

    /// Looks an activity up by id, falling back to a case-insensitive name
    /// match among non-archived activities.
    pub fn resolve_activity(&self, id_or_name: &str) -> Option<&ActivityDef> {
        self.activities
            .iter()
            .find(|a| a.id.as_str() == id_or_name)
            .or_else(|| {
                self.activities
                    .iter()
                    .find(|a| !a.archived && same_name(&a.name, id_or_name))
            })
    }

    /// Every activity id, archived ones included, in default stack order.
    pub fn universe(&self) -> Vec<ActivityId> {
        let mut acts: Vec<&ActivityDef> = self.activities.iter().collect();
        acts.sort_by(|a, b| (a.order, &a.id).cmp(&(b.order, &b.id)));
        acts.into_iter().map(|a| a.id.clone()).collect()
    }

    pub fn palette(&self) -> BTreeMap<ActivityId, String> {
        self.activities
            .iter()
            .map(|a| (a.id.clone(), a.color.clone()))
            .collect()
    }

    fn next_id(&self, prefix: &str, taken: impl Fn(&str) -> bool, count: usize) -> String {
        (count + 1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|id| !taken(id))
            .expect("unbounded id space")
    }

    fn check_activity_fields(
        &self,
        skip: Option<&ActivityId>,
        name: &str,
        color: &str,
        order: u32,
    ) -> Result<(), DomainError> {
        validate_color(color)?;
        let others = self
            .activities
            .iter()
            .filter(|a| !a.archived && Some(&a.id) != skip);
        for other in others {
            if same_name(&other.name, name) {
                return Err(DomainError::DuplicateName(name.to_string()));
            }
            if other.order == order {
                return Err(DomainError::DuplicateOrder(order));
            }
        }
        Ok(())
    }

    pub fn define_activity(
        &mut self,
        name: &str,
        color: &str,
        order: Option<u32>,
    ) -> Result<ActivityDef, DomainError> {
        let name = normalize_name(name)?;
        let order = order.unwrap_or_else(|| {
            self.activities.iter().map(|a| a.order + 1).max().unwrap_or(0)
        });
        self.check_activity_fields(None, &name, color, order)?;
        let id = self.next_id(
            "a",
            |id| self.activities.iter().any(|a| a.id.as_str() == id),
            self.activities.len(),
        );
        let def = ActivityDef {
            id: ActivityId::new(id),
            name,
            color: color.to_string(),
            order,
            archived: false,
        };
        self.activities.push(def.clone());
        Ok(def)
    }

    pub fn update_activity(&mut self, id: &ActivityId, patch: &ActivityPatch) -> Result<ActivityDef, DomainError> {
        let current = self
            .activity(id)
            .ok_or_else(|| DomainError::UnknownActivity(id.clone()))?;
        let mut next = current.clone();
        if let Some(name) = &patch.name {
            next.name = normalize_name(name)?;
        }
        if let Some(color) = &patch.color {
            next.color = color.clone();
        }
        if let Some(order) = patch.order {
            next.order = order;
        }
        if let Some(archived) = patch.archived {
            next.archived = archived;
        }
        if next.archived {
            validate_color(&next.color)?;
        } else {
            self.check_activity_fields(Some(id), &next.name, &next.color, next.order)?;
        }
        let slot = self
            .activities
            .iter_mut()
            .find(|a| &a.id == id)
            .expect("checked above");
        *slot = next.clone();
        Ok(next)
    }

    /// Archives rather than deletes so past intervals keep resolving.
    pub fn archive_activity(&mut self, id: &ActivityId) -> Result<ActivityDef, DomainError> {
        self.update_activity(
            id,
            &ActivityPatch {
                archived: Some(true),
                ..Default::default()
            },
        )
    }

    fn require_activity(&self, id: &ActivityId) -> Result<&ActivityDef, DomainError> {
        self.activity(id)
            .ok_or_else(|| DomainError::UnknownActivity(id.clone()))
    }

    fn require_live_activity(&self, id: &ActivityId) -> Result<&ActivityDef, DomainError> {
        let def = self.require_activity(id)?;
        if def.archived {
            return Err(DomainError::ArchivedActivity(id.clone()));
        }
        Ok(def)
    }

    /// The record for `date`, or an empty one.
    pub fn day(&self, date: NaiveDate) -> DayRecord {
        self.days
            .get(&date)
            .cloned()
            .unwrap_or_else(|| DayRecord::new(date))
    }

    /// Runs `f` against a copy of the day and commits the copy only on success.
    fn with_day<T>(
        &mut self,
        date: NaiveDate,
        f: impl FnOnce(&mut DayRecord) -> Result<T, DomainError>,
    ) -> Result<T, DomainError> {
        let mut day = self.day(date);
        let out = f(&mut day)?;
        if day.is_empty() {
            self.days.remove(&date);
        } else {
            self.days.insert(date, day);
        }
        Ok(out)
    }

    pub fn add_interval(&mut self, date: NaiveDate, kind: IntervalKind, interval: Interval) -> Result<(), DomainError> {
        self.require_activity(&interval.activity)?;
        self.with_day(date, |day| day.add_interval(kind, interval))
    }

    /// Records a span that may cross midnight (`end <= start`), splitting it
    /// into a tail on `date` and a head on the following day.
    pub fn add_spanning_interval(
        &mut self,
        date: NaiveDate,
        kind: IntervalKind,
        activity: ActivityId,
        start: u16,
        end: u16,
    ) -> Result<(), DomainError> {
        if start < end {
            let iv = Interval::new(activity, start.into(), end.into())?;
            return self.add_interval(date, kind, iv);
        }
        let tail = Interval::new(activity.clone(), start.into(), 1440)?;
        let next = date.succ_opt().unwrap_or(date);
        let mut staged = self.clone();
        staged.add_interval(date, kind, tail)?;
        if end > 0 {
            staged.add_interval(next, kind, Interval::new(activity, 0, end.into())?)?;
        }
        *self = staged;
        Ok(())
    }

    pub fn remove_interval(
        &mut self,
        date: NaiveDate,
        kind: IntervalKind,
        key: &IntervalKey,
    ) -> Result<Interval, DomainError> {
        self.with_day(date, |day| day.remove_interval(kind, key))
    }

    pub fn toggle(&mut self, date: NaiveDate, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        match self.days.get(&date).and_then(|d| d.timer(activity)) {
            Some(_) => self.stop_timer(date, activity, now),
            None => self.start_timer(date, activity, now),
        }
    }

    pub fn start_timer(&mut self, date: NaiveDate, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        self.require_live_activity(activity)?;
        self.with_day(date, |day| day.start_timer(activity, now))
    }

    /// Stopping is allowed for archived activities so a timer never gets stuck.
    pub fn stop_timer(&mut self, date: NaiveDate, activity: &ActivityId, now: u16) -> Result<ToggleOutcome, DomainError> {
        self.require_activity(activity)?;
        self.with_day(date, |day| day.stop_timer(activity, now))
    }

    /// Every running timer as `(date, activity, started_at)`.
    pub fn active_timers(&self) -> Vec<(NaiveDate, &ActivityId, u16)> {
        self.days
            .iter()
            .flat_map(|(date, day)| day.active.iter().map(move |t| (*date, &t.activity, t.started_at)))
            .collect()
    }

    /// Splits the timers running on `date` at midnight and carries them into
    /// the next day, which is merged with any record already there.
    pub fn midnight_rollover(&mut self, date: NaiveDate) {
        let (today, carried) = self.day(date).midnight_rollover();
        let mut next = self.day(carried.date);
        for timer in carried.active {
            if next.timer(&timer.activity).is_none() {
                next.active.push(timer);
            }
        }
        for day in [today, next] {
            if day.is_empty() {
                self.days.remove(&day.date);
            } else {
                self.days.insert(day.date, day);
            }
        }
    }

    pub fn bin_day(&self, date: NaiveDate, kind: IntervalKind) -> BinMatrix {
        bin_day(&self.day(date), kind, &self.universe())
    }

    pub fn goal(&self, id: &str) -> Option<&BankableGoal> {
        self.goals.iter().find(|g| g.id == id)
    }

    pub fn add_goal(&mut self, activity: &ActivityId, target_minutes: u32, date: NaiveDate) -> Result<BankableGoal, DomainError> {
        self.require_activity(activity)?;
        validate_target(target_minutes)?;
        let id = self.next_id("g", |id| self.goal(id).is_some(), self.goals.len());
        let goal = BankableGoal {
            id,
            activity: activity.clone(),
            target_minutes,
            date,
        };
        self.goals.push(goal.clone());
        Ok(goal)
    }

    pub fn goal_progress(&self, id: &str, date: Option<NaiveDate>) -> Result<GoalProgress, DomainError> {
        let goal = self
            .goal(id)
            .ok_or_else(|| DomainError::UnknownGoal(id.to_string()))?;
        self.require_activity(&goal.activity)?;
        bankable_progress(goal, &self.day(date.unwrap_or(goal.date)))
    }

    /// Checks every invariant a loaded journal must satisfy.
    pub fn validate(&self) -> Result<(), DomainError> {
        let mut ids = HashSet::new();
        for (i, a) in self.activities.iter().enumerate() {
            if !ids.insert(&a.id) || a.id.as_str().is_empty() {
                return Err(DomainError::DuplicateName(a.id.to_string()));
            }
            if normalize_name(&a.name)? != a.name {
                return Err(DomainError::EmptyName);
            }
            validate_color(&a.color)?;
            if a.archived {
                continue;
            }
            for b in self.activities[..i].iter().filter(|b| !b.archived) {
                if same_name(&a.name, &b.name) {
                    return Err(DomainError::DuplicateName(a.name.clone()));
                }
                if a.order == b.order {
                    return Err(DomainError::DuplicateOrder(a.order));
                }
            }
        }
        for day in self.days.values() {
            day.validate()?;
            for activity in day.activities() {
                self.require_activity(activity)?;
            }
        }
        let mut goal_ids = HashSet::new();
        for goal in &self.goals {
            if !goal_ids.insert(&goal.id) {
                return Err(DomainError::UnknownGoal(goal.id.clone()));
            }
            self.require_activity(&goal.activity)?;
            validate_target(goal.target_minutes)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date() -> NaiveDate {
        NaiveDate::from_ymd_opt(2024, 3, 4).unwrap()
    }

    #[test]
    fn first_activity_gets_order_zero() {
        let mut j = Journal::new();
        let sleep = j.define_activity("Sleep", "#1a237e", None).unwrap();
        assert_eq!(sleep.name, "Sleep");
        assert_eq!(sleep.color, "#1a237e");
        assert_eq!(sleep.order, 0);
        let study = j.define_activity("Study", "#2e7d32", None).unwrap();
        assert_eq!(study.order, 1);
        assert_ne!(sleep.id, study.id);
    }

    #[test]
    fn define_activity_errors() {
        let mut j = Journal::new();
        assert_eq!(j.define_activity("", "#ffffff", None), Err(DomainError::EmptyName));
        assert_eq!(j.define_activity("  ", "#ffffff", None), Err(DomainError::EmptyName));
        assert_eq!(
            j.define_activity("Study", "#zzz", None),
            Err(DomainError::InvalidColor("#zzz".into()))
        );
        j.define_activity("Study", "#000000", None).unwrap();
        assert_eq!(
            j.define_activity("study ", "#000000", None).unwrap_err().code(),
            "DuplicateName"
        );
        assert_eq!(
            j.define_activity("Gym", "#000000", Some(0)).unwrap_err().code(),
            "DuplicateOrder"
        );
        assert_eq!(j.activities.len(), 1);
    }

    #[test]
    fn archived_names_can_be_reused() {
        let mut j = Journal::new();
        let study = j.define_activity("Study", "#000000", None).unwrap();
        j.archive_activity(&study.id).unwrap();
        let again = j.define_activity("Study", "#111111", None).unwrap();
        assert_ne!(again.id, study.id);
        // unarchiving the old one would now clash
        let err = j
            .update_activity(&study.id, &ActivityPatch { archived: Some(false), ..Default::default() })
            .unwrap_err();
        assert_eq!(err.code(), "DuplicateName");
        assert_eq!(j.resolve_activity("study").unwrap().id, again.id);
    }

    #[test]
    fn unknown_activity_is_rejected() {
        let mut j = Journal::new();
        let iv = Interval::new("ghost".into(), 10, 20).unwrap();
        assert_eq!(
            j.add_interval(date(), IntervalKind::Planned, iv).unwrap_err().code(),
            "UnknownActivity"
        );
        assert_eq!(j.toggle(date(), &"ghost".into(), 10).unwrap_err().code(), "UnknownActivity");
    }

    #[test]
    fn archived_activity_cannot_start() {
        let mut j = Journal::new();
        let a = j.define_activity("Study", "#000000", None).unwrap();
        j.toggle(date(), &a.id, 100).unwrap();
        j.archive_activity(&a.id).unwrap();
        // a running timer can still be closed
        j.toggle(date(), &a.id, 120).unwrap();
        assert_eq!(j.toggle(date(), &a.id, 130).unwrap_err().code(), "ArchivedActivity");
    }

    #[test]
    fn spanning_interval_is_split() {
        let mut j = Journal::new();
        let a = j.define_activity("Sleep", "#000000", None).unwrap();
        j.add_spanning_interval(date(), IntervalKind::Logged, a.id.clone(), 1380, 420)
            .unwrap();
        assert_eq!(j.day(date()).logged[0].start, 1380);
        assert_eq!(j.day(date()).logged[0].end, 1440);
        let next = j.day(date().succ_opt().unwrap());
        assert_eq!((next.logged[0].start, next.logged[0].end), (0, 420));
    }

    #[test]
    fn rollover_merges_into_existing_next_day() {
        let mut j = Journal::new();
        let a = j.define_activity("Study", "#000000", None).unwrap();
        let next = date().succ_opt().unwrap();
        j.add_interval(next, IntervalKind::Planned, Interval::new(a.id.clone(), 60, 120).unwrap())
            .unwrap();
        j.toggle(date(), &a.id, 1380).unwrap();
        j.midnight_rollover(date());
        assert_eq!(j.day(date()).logged.len(), 1);
        let n = j.day(next);
        assert_eq!(n.planned.len(), 1);
        assert_eq!(n.active[0].started_at, 0);
        j.validate().unwrap();
    }

    #[test]
    fn removing_last_interval_prunes_day() {
        let mut j = Journal::new();
        let a = j.define_activity("Study", "#000000", None).unwrap();
        let iv = Interval::new(a.id.clone(), 60, 120).unwrap();
        j.add_interval(date(), IntervalKind::Planned, iv.clone()).unwrap();
        j.remove_interval(date(), IntervalKind::Planned, &iv.key()).unwrap();
        assert!(j.days.is_empty());
        assert_eq!(
            j.remove_interval(date(), IntervalKind::Planned, &iv.key()).unwrap_err().code(),
            "UnknownInterval"
        );
    }

    #[test]
    fn goals_track_progress() {
        let mut j = Journal::new();
        let a = j.define_activity("Study", "#000000", None).unwrap();
        let g = j.add_goal(&a.id, 90, date()).unwrap();
        assert_eq!(g.id, "g1");
        j.add_interval(date(), IntervalKind::Logged, Interval::new(a.id.clone(), 60, 120).unwrap())
            .unwrap();
        let p = j.goal_progress(&g.id, None).unwrap();
        assert_eq!(p.logged_minutes, 60);
        assert!(!p.met);
        assert_eq!(j.add_goal(&a.id, 0, date()).unwrap_err().code(), "InvalidTarget");
        assert_eq!(j.goal_progress("g9", None).unwrap_err().code(), "UnknownGoal");
    }
}
