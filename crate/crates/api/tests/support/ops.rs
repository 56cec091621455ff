//! Random journal operations, each expressible both as an HTTP request and
//! as the library call it should be equivalent to.

use axum::http::Method;
use chrono::{Days, NaiveDate};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::{json, Value};
use timestream_api::DayView;
use timestream_core::{ActivityId, ActivityPatch, DomainError, Interval, IntervalKey, IntervalKind, Journal};

#[derive(Debug, Clone)]
pub enum Op {
    Define { name: String, color: String, order: Option<u32> },
    Patch { id: String, patch: ActivityPatch },
    Add { kind: IntervalKind, date: NaiveDate, activity: String, start: u32, end: u32 },
    Remove { kind: IntervalKind, date: NaiveDate, key: IntervalKey },
    Toggle { activity: String, date: NaiveDate, now: u16 },
    Goal { activity: String, target: u32, date: NaiveDate },
}

const NAMES: [&str; 6] = ["Sleep", "Study", "Meal", "Class", "Leisure", "study"];
const COLORS: [&str; 4] = ["#1a237e", "#2e7d32", "#F9A825", "blue"];

fn base() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 3, 4).unwrap()
}

fn pick_activity(rng: &mut impl Rng, journal: &Journal) -> String {
    match journal.activities.choose(rng) {
        Some(a) if rng.random_bool(0.95) => a.id.to_string(),
        _ => "a99".to_string(),
    }
}

/// An operation biased towards ones likely to succeed on `journal`, with a
/// steady share of invalid ones to exercise the error paths.
pub fn random_op(rng: &mut impl Rng, journal: &Journal) -> Op {
    let date = base().checked_add_days(Days::new(rng.random_range(0..3))).unwrap();
    let kind = if rng.random_bool(0.5) { IntervalKind::Planned } else { IntervalKind::Logged };
    let roll = if journal.activities.is_empty() { 0 } else { rng.random_range(0..100) };
    match roll {
        0..=9 => Op::Define {
            name: NAMES.choose(rng).unwrap().to_string(),
            color: COLORS.choose(rng).unwrap().to_string(),
            order: rng.random_bool(0.3).then(|| rng.random_range(0..4)),
        },
        10..=14 => Op::Patch {
            id: pick_activity(rng, journal),
            patch: ActivityPatch {
                name: rng.random_bool(0.3).then(|| NAMES.choose(rng).unwrap().to_string()),
                color: rng.random_bool(0.3).then(|| COLORS.choose(rng).unwrap().to_string()),
                order: rng.random_bool(0.3).then(|| rng.random_range(0..6)),
                archived: rng.random_bool(0.2).then(|| rng.random_bool(0.5)),
            },
        },
        15..=54 => {
            let start = rng.random_range(0..48) * 30;
            let end = if rng.random_bool(0.05) { start } else { start + rng.random_range(1..8) * 15 };
            Op::Add { kind, date, activity: pick_activity(rng, journal), start, end: end.min(1445) }
        }
        55..=64 => {
            let day = journal.day(date);
            let key = match day.intervals(kind).choose(rng) {
                Some(iv) if rng.random_bool(0.8) => iv.key(),
                _ => IntervalKey { activity: "a1".into(), start: 7 },
            };
            Op::Remove { kind, date, key }
        }
        65..=92 => Op::Toggle {
            activity: pick_activity(rng, journal),
            date,
            now: rng.random_range(0..96) * 15,
        },
        _ => Op::Goal {
            activity: pick_activity(rng, journal),
            target: rng.random_range(0..300),
            date,
        },
    }
}

pub fn request(op: &Op) -> (Method, String, Option<Value>) {
    let seg = |kind: IntervalKind| if kind == IntervalKind::Planned { "plan" } else { "log" };
    match op {
        Op::Define { name, color, order } => (
            Method::POST,
            "/api/activities".into(),
            Some(json!({"name": name, "color": color, "order": order})),
        ),
        Op::Patch { id, patch } => (Method::PATCH, format!("/api/activities/{id}"), Some(serde_json::to_value(patch).unwrap())),
        Op::Add { kind, date, activity, start, end } => (
            Method::POST,
            format!("/api/days/{date}/{}", seg(*kind)),
            Some(json!({"activity": activity, "start": start, "end": end})),
        ),
        Op::Remove { kind, date, key } => (Method::DELETE, format!("/api/days/{date}/{}/{key}", seg(*kind)), None),
        Op::Toggle { activity, date, now } => (
            Method::POST,
            "/api/toggle".into(),
            Some(json!({"activity": activity, "date": date, "now": now})),
        ),
        Op::Goal { activity, target, date } => (
            Method::POST,
            "/api/goals".into(),
            Some(json!({"activity": activity, "target_minutes": target, "date": date})),
        ),
    }
}

fn known(journal: &Journal, id: &str) -> Result<ActivityId, DomainError> {
    journal
        .activity(&id.into())
        .map(|a| a.id.clone())
        .ok_or_else(|| DomainError::UnknownActivity(id.into()))
}

fn day_json(journal: &Journal, date: NaiveDate) -> Value {
    serde_json::to_value(DayView { date, day: journal.day(date) }).unwrap()
}

/// The response body the service should send, computed by calling the
/// library directly. On error `journal` is left untouched.
pub fn apply_direct(journal: &mut Journal, op: &Op) -> Result<Value, DomainError> {
    let mut next = journal.clone();
    let out = match op {
        Op::Define { name, color, order } => serde_json::to_value(next.define_activity(name, color, *order)?).unwrap(),
        Op::Patch { id, patch } => serde_json::to_value(next.update_activity(&id.as_str().into(), patch)?).unwrap(),
        Op::Add { kind, date, activity, start, end } => {
            let iv = Interval::new(known(&next, activity)?, *start, *end)?;
            next.add_interval(*date, *kind, iv)?;
            day_json(&next, *date)
        }
        Op::Remove { kind, date, key } => {
            next.remove_interval(*date, *kind, key)?;
            day_json(&next, *date)
        }
        Op::Toggle { activity, date, now } => {
            let id = known(&next, activity)?;
            let outcome = next.toggle(*date, &id, *now)?;
            let interval = match &outcome {
                timestream_core::ToggleOutcome::Stopped(iv) => serde_json::to_value(iv).unwrap(),
                _ => Value::Null,
            };
            json!({"status": outcome.label(), "interval": interval, "day": day_json(&next, *date)})
        }
        Op::Goal { activity, target, date } => {
            let id = known(&next, activity)?;
            serde_json::to_value(next.add_goal(&id, *target, *date)?).unwrap()
        }
    };
    *journal = next;
    Ok(out)
}
