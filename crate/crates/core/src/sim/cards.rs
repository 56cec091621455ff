use serde::{Deserialize, Serialize};

use super::SimError;
use crate::activity::ActivityId;
use crate::analytics::{PatternEvent, PatternKind};
use crate::day::DayRecord;
use crate::interval::{Interval, IntervalKind};
use crate::time::MINUTES_PER_DAY;

const GRID: u16 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CardEffect {
    Delay { minutes: u16 },
    CancelEvent,
    SwapActivity { activity: ActivityId },
    Extend { minutes: u16 },
    Truncate { minutes: u16 },
    InsertUnplanned { activity: ActivityId, minutes: u16 },
    EarlyStart { minutes: u16 },
    NoEffect,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LifeCard {
    pub id: u8,
    pub title: String,
    pub effect: CardEffect,
}

/// The eight-card deck. Between them the cards can produce every pattern kind.
pub fn deck() -> Vec<LifeCard> {
    let card = |id, title: &str, effect| LifeCard {
        id,
        title: title.to_string(),
        effect,
    };
    vec![
        card(1, "Running late", CardEffect::Delay { minutes: 60 }),
        card(2, "Event cancelled", CardEffect::CancelEvent),
        card(3, "Friends drop by", CardEffect::SwapActivity { activity: "leisure".into() }),
        card(4, "On a roll", CardEffect::Extend { minutes: 30 }),
        card(5, "Called away", CardEffect::Truncate { minutes: 30 }),
        card(
            6,
            "Feeling drowsy",
            CardEffect::InsertUnplanned { activity: "nap".into(), minutes: 30 },
        ),
        card(7, "Early start", CardEffect::EarlyStart { minutes: 60 }),
        card(8, "Quiet day", CardEffect::NoEffect),
    ]
}

/// What earlier cards have already changed, derived from plan vs log.
struct Disturbance<'a> {
    plan: &'a DayRecord,
    log: &'a DayRecord,
    /// Logged intervals with no identical plan entry.
    injected: Vec<&'a Interval>,
    /// Planned intervals with no identical log entry.
    affected: Vec<&'a Interval>,
    /// Activities whose logged intervals differ from the plan.
    touched: Vec<&'a ActivityId>,
}

impl<'a> Disturbance<'a> {
    fn new(plan: &'a DayRecord, log: &'a DayRecord) -> Self {
        let injected: Vec<&Interval> = log.logged.iter().filter(|l| !plan.planned.contains(l)).collect();
        let affected: Vec<&Interval> = plan.planned.iter().filter(|p| !log.logged.contains(p)).collect();
        let mut touched: Vec<&ActivityId> = injected
            .iter()
            .chain(&affected)
            .map(|iv| &iv.activity)
            .collect();
        touched.sort();
        touched.dedup();
        Disturbance {
            plan,
            log,
            injected,
            affected,
            touched,
        }
    }

    fn is_touched(&self, activity: &ActivityId) -> bool {
        self.touched.contains(&activity)
    }

    /// Planned intervals still logged verbatim, starting at or after
    /// `draw_time`, whose activity is undisturbed and which no injected
    /// interval overlaps. Earliest first.
    fn candidates(&self, draw_time: u16) -> Vec<&'a Interval> {
        self.plan
            .planned
            .iter()
            .filter(|p| p.start >= draw_time)
            .filter(|p| self.log.logged.contains(p))
            .filter(|p| !self.is_touched(&p.activity))
            .filter(|p| self.injected.iter().all(|l| l.overlap(p) == 0))
            .collect()
    }

    /// Whether `new` can enter the log without colliding with a logged
    /// interval of its activity (other than `replacing`) or landing on a
    /// plan entry an earlier card already disturbed.
    fn slot_free(&self, new: &Interval, replacing: Option<&Interval>) -> bool {
        let same_activity_clear = self
            .log
            .logged
            .iter()
            .filter(|l| Some(*l) != replacing)
            .all(|l| l.activity != new.activity || l.overlap(new) == 0);
        same_activity_clear && self.affected.iter().all(|p| p.overlap(new) == 0)
    }

    /// Nothing planned or logged at all during `new`.
    fn wholly_free(&self, new: &Interval) -> bool {
        self.plan
            .planned
            .iter()
            .chain(&self.log.logged)
            .all(|iv| iv.overlap(new) == 0)
    }
}

fn event(
    kind: PatternKind,
    activity: &ActivityId,
    planned: Option<&Interval>,
    logged: Option<&Interval>,
    replacing: Option<&ActivityId>,
    magnitude: u16,
) -> PatternEvent {
    PatternEvent {
        kind,
        activity: activity.clone(),
        planned_ref: planned.cloned(),
        logged_ref: logged.cloned(),
        replacing_activity: replacing.cloned(),
        magnitude_minutes: u32::from(magnitude),
    }
}

fn moved(p: &Interval, start: i32, end: i32) -> Option<Interval> {
    let ok = 0 <= start && start < end && end <= i32::from(MINUTES_PER_DAY);
    ok.then(|| Interval {
        activity: p.activity.clone(),
        start: start as u16,
        end: end as u16,
    })
}

/// The log after replacing `old` (if any) with `new` (if any).
fn rewrite(log: &DayRecord, old: Option<&Interval>, new: Option<&Interval>) -> DayRecord {
    let mut out = log.clone();
    if let Some(old) = old {
        out.logged.retain(|l| l != old);
    }
    if let Some(new) = new {
        out.add_interval(IntervalKind::Logged, new.clone())
            .expect("slot checked free before rewriting");
    }
    out
}

/// Applies one card to the part of the log from `draw_time` on. The card
/// acts on the earliest planned interval it can change without touching
/// anything an earlier card changed, so each card's ground truth stays
/// separable.
pub fn apply_life_card(
    plan: &DayRecord,
    partial_log: &DayRecord,
    card: &LifeCard,
    draw_time: u16,
) -> Result<(DayRecord, Vec<PatternEvent>), SimError> {
    if draw_time >= MINUTES_PER_DAY {
        return Err(SimError::InvalidDrawTime(draw_time));
    }
    let state = Disturbance::new(plan, partial_log);
    let candidates = state.candidates(draw_time);
    let t = i32::from(draw_time);

    let shift = |p: &Interval, delta: i32| -> Option<Interval> {
        if i32::from(p.duration()) > delta.abs() {
            return None;
        }
        let new = moved(p, i32::from(p.start) + delta, i32::from(p.end) + delta)?;
        (new.start as i32 >= t && state.slot_free(&new, Some(p))).then_some(new)
    };

    let outcome = match &card.effect {
        CardEffect::NoEffect => Some((partial_log.clone(), Vec::new())),
        CardEffect::Delay { minutes } | CardEffect::EarlyStart { minutes } => {
            let (delta, kind) = match card.effect {
                CardEffect::Delay { .. } => (i32::from(*minutes), PatternKind::ForwardShift),
                _ => (-i32::from(*minutes), PatternKind::BackwardShift),
            };
            candidates.iter().find_map(|p| {
                let new = shift(p, delta)?;
                let ev = event(kind, &p.activity, Some(p), Some(&new), None, *minutes);
                Some((rewrite(partial_log, Some(p), Some(&new)), vec![ev]))
            })
        }
        CardEffect::CancelEvent => candidates.first().map(|p| {
            let ev = event(PatternKind::Omission, &p.activity, Some(p), None, None, p.duration());
            (rewrite(partial_log, Some(p), None), vec![ev])
        }),
        CardEffect::SwapActivity { activity } => {
            if state.is_touched(activity) {
                None
            } else {
                candidates.iter().find_map(|p| {
                    if &p.activity == activity {
                        return None;
                    }
                    let new = Interval {
                        activity: activity.clone(),
                        ..(*p).clone()
                    };
                    if !state.slot_free(&new, None) {
                        return None;
                    }
                    let ev = event(
                        PatternKind::Replacement,
                        &p.activity,
                        Some(p),
                        Some(&new),
                        Some(activity),
                        p.duration(),
                    );
                    Some((rewrite(partial_log, Some(p), Some(&new)), vec![ev]))
                })
            }
        }
        CardEffect::Extend { minutes } => candidates.iter().find_map(|p| {
            let new = moved(p, i32::from(p.start), i32::from(p.end) + i32::from(*minutes))?;
            if !state.slot_free(&new, Some(p)) {
                return None;
            }
            let ev = event(PatternKind::Lengthening, &p.activity, Some(p), Some(&new), None, *minutes);
            Some((rewrite(partial_log, Some(p), Some(&new)), vec![ev]))
        }),
        CardEffect::Truncate { minutes } => candidates.iter().find_map(|p| {
            if p.duration() <= *minutes {
                return None;
            }
            let new = moved(p, i32::from(p.start), i32::from(p.end - minutes))?;
            let ev = event(PatternKind::Shortening, &p.activity, Some(p), Some(&new), None, *minutes);
            Some((rewrite(partial_log, Some(p), Some(&new)), vec![ev]))
        }),
        CardEffect::InsertUnplanned { activity, minutes } => {
            if state.is_touched(activity) || plan.planned.iter().any(|p| &p.activity == activity) {
                None
            } else {
                let first = draw_time.div_ceil(GRID) * GRID;
                let slots: Vec<Interval> = (first..MINUTES_PER_DAY)
                    .step_by(usize::from(GRID))
                    .filter_map(|s| {
                        let end = s.checked_add(*minutes).filter(|&e| e <= MINUTES_PER_DAY)?;
                        Some(Interval {
                            activity: activity.clone(),
                            start: s,
                            end,
                        })
                    })
                    .collect();
                slots
                    .iter()
                    .find(|iv| state.wholly_free(iv))
                    .or_else(|| slots.iter().find(|iv| state.slot_free(iv, None)))
                    .map(|new| {
                        let ev = event(PatternKind::Addition, activity, None, Some(new), None, *minutes);
                        (rewrite(partial_log, None, Some(new)), vec![ev])
                    })
            }
        }
    };
    outcome.ok_or(SimError::NoEligibleTarget)
}
