use std::fmt;

use serde::{Deserialize, Serialize};

use super::matching::match_intervals;
use crate::activity::ActivityId;
use crate::day::DayRecord;
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    ForwardShift,
    BackwardShift,
    Replacement,
    Addition,
    Lengthening,
    Shortening,
    /// Planned and never done, with nothing else taking its place.
    Omission,
}

impl PatternKind {
    pub const ALL: [PatternKind; 7] = [
        PatternKind::ForwardShift,
        PatternKind::BackwardShift,
        PatternKind::Replacement,
        PatternKind::Addition,
        PatternKind::Lengthening,
        PatternKind::Shortening,
        PatternKind::Omission,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::ForwardShift => "forward_shift",
            PatternKind::BackwardShift => "backward_shift",
            PatternKind::Replacement => "replacement",
            PatternKind::Addition => "addition",
            PatternKind::Lengthening => "lengthening",
            PatternKind::Shortening => "shortening",
            PatternKind::Omission => "omission",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One deviation between plan and log.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternEvent {
    pub kind: PatternKind,
    pub activity: ActivityId,
    pub planned_ref: Option<Interval>,
    pub logged_ref: Option<Interval>,
    pub replacing_activity: Option<ActivityId>,
    pub magnitude_minutes: u32,
}

impl PatternEvent {
    fn sort_key(&self) -> impl Ord + '_ {
        (
            self.planned_ref.as_ref().map(|p| p.start),
            self.logged_ref.as_ref().map(|l| l.start),
            self.kind.name(),
            &self.activity,
            &self.replacing_activity,
        )
    }
}

pub fn sort_events(events: &mut [PatternEvent]) {
    events.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Duration changes must exceed this to count as lengthening/shortening.
    pub duration_tolerance_minutes: u32,
    /// Share of a planned interval another activity must cover to count as
    /// a replacement.
    pub replacement_overlap_fraction: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            duration_tolerance_minutes: 15,
            replacement_overlap_fraction: 0.5,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), String> {
        let theta = self.replacement_overlap_fraction;
        if theta > 0.0 && theta <= 1.0 {
            Ok(())
        } else {
            Err(format!("replacement_overlap_fraction must be in (0, 1], got {theta}"))
        }
    }
}

fn duration_event(p: &Interval, l: &Interval, tolerance: u32) -> Option<PatternEvent> {
    let (dp, dl) = (u32::from(p.duration()), u32::from(l.duration()));
    let kind = if dl > dp + tolerance {
        PatternKind::Lengthening
    } else if dp > dl + tolerance {
        PatternKind::Shortening
    } else {
        return None;
    };
    Some(PatternEvent {
        kind,
        activity: p.activity.clone(),
        planned_ref: Some(p.clone()),
        logged_ref: Some(l.clone()),
        replacing_activity: None,
        magnitude_minutes: dp.abs_diff(dl),
    })
}

/// Classifies the differences between a plan and a log of the same day.
pub fn detect(planned: &[Interval], logged: &[Interval], config: &DetectorConfig) -> Vec<PatternEvent> {
    let tolerance = config.duration_tolerance_minutes;
    let matching = match_intervals(planned, logged);
    let mut events = Vec::new();

    for &(p, l) in &matching.kept {
        events.extend(duration_event(&planned[p], &logged[l], tolerance));
    }
    for &(p, l) in &matching.shifts {
        let (pi, li) = (&planned[p], &logged[l]);
        let kind = if li.start > pi.start {
            PatternKind::ForwardShift
        } else {
            PatternKind::BackwardShift
        };
        events.push(PatternEvent {
            kind,
            activity: pi.activity.clone(),
            planned_ref: Some(pi.clone()),
            logged_ref: Some(li.clone()),
            replacing_activity: None,
            magnitude_minutes: u32::from(pi.start.abs_diff(li.start)),
        });
        events.extend(duration_event(pi, li, tolerance));
    }

    let mut consumed = vec![false; logged.len()];
    for &p in &matching.unmatched_planned {
        let pi = &planned[p];
        let needed = config.replacement_overlap_fraction * f64::from(pi.duration());
        let best = matching
            .unmatched_logged
            .iter()
            .map(|&l| (l, pi.overlap(&logged[l])))
            .filter(|&(l, o)| logged[l].activity != pi.activity && o > 0 && f64::from(o) >= needed)
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| logged[b.0].start.cmp(&logged[a.0].start)));
        match best {
            Some((l, o)) => {
                consumed[l] = true;
                events.push(PatternEvent {
                    kind: PatternKind::Replacement,
                    activity: pi.activity.clone(),
                    planned_ref: Some(pi.clone()),
                    logged_ref: Some(logged[l].clone()),
                    replacing_activity: Some(logged[l].activity.clone()),
                    magnitude_minutes: u32::from(o),
                });
            }
            None => events.push(PatternEvent {
                kind: PatternKind::Omission,
                activity: pi.activity.clone(),
                planned_ref: Some(pi.clone()),
                logged_ref: None,
                replacing_activity: None,
                magnitude_minutes: u32::from(pi.duration()),
            }),
        }
    }
    for &l in &matching.unmatched_logged {
        if !consumed[l] {
            let li = &logged[l];
            events.push(PatternEvent {
                kind: PatternKind::Addition,
                activity: li.activity.clone(),
                planned_ref: None,
                logged_ref: Some(li.clone()),
                replacing_activity: None,
                magnitude_minutes: u32::from(li.duration()),
            });
        }
    }

    sort_events(&mut events);
    events
}

/// Running timers are ignored; only closed intervals are compared.
pub fn detect_patterns(day: &DayRecord, config: &DetectorConfig) -> Vec<PatternEvent> {
    detect(&day.planned, &day.logged, config)
}
