use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::activity::{ActivityDef, ActivityId};
use crate::day::DayRecord;
use crate::interval::{Interval, IntervalKind};
use crate::time::MINUTES_PER_DAY;

/// Activities shared by every persona: `(id, name, color)`.
pub const STANDARD_ACTIVITIES: [(&str, &str, &str); 7] = [
    ("sleep", "Sleep", "#1a237e"),
    ("class", "Class", "#ef6c00"),
    ("study", "Study", "#2e7d32"),
    ("training", "Training", "#c62828"),
    ("meal", "Meal", "#f9a825"),
    ("leisure", "Leisure", "#6a1b9a"),
    ("nap", "Nap", "#00838f"),
];

pub fn standard_activities() -> Vec<ActivityDef> {
    STANDARD_ACTIVITIES
        .iter()
        .enumerate()
        .map(|(i, &(id, name, color))| ActivityDef {
            id: ActivityId::new(id),
            name: name.to_string(),
            color: color.to_string(),
            order: i as u32,
            archived: false,
        })
        .collect()
}

/// Goal minutes are placed in blocks of at most this length.
const MAX_BLOCK: u16 = 60;
/// Gaps shorter than this are skipped unless the remainder fits.
const MIN_BLOCK: u16 = 30;
const GRID: u16 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PersonaName {
    StudiousSenior,
    StudentAthlete,
    CarefreeFreshman,
}

impl PersonaName {
    pub const ALL: [PersonaName; 3] = [
        PersonaName::StudiousSenior,
        PersonaName::StudentAthlete,
        PersonaName::CarefreeFreshman,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PersonaName::StudiousSenior => "studious_senior",
            PersonaName::StudentAthlete => "student_athlete",
            PersonaName::CarefreeFreshman => "carefree_freshman",
        }
    }
}

impl fmt::Display for PersonaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PersonaName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PersonaName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown persona {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Persona {
    pub name: PersonaName,
    /// `(activity, start, end)` commitments that cannot move.
    pub fixed_schedule: Vec<(ActivityId, u16, u16)>,
    /// `(activity, daily target minutes)` placed into free time.
    pub goal_activities: Vec<(ActivityId, u16)>,
}

fn block(id: &str, start: u16, end: u16) -> (ActivityId, u16, u16) {
    (ActivityId::new(id), start, end)
}

impl Persona {
    pub fn builtin(name: PersonaName) -> Persona {
        let (fixed_schedule, goals): (Vec<_>, Vec<(&str, u16)>) = match name {
            PersonaName::StudiousSenior => (
                vec![
                    block("sleep", 0, 390),
                    block("meal", 420, 450),
                    block("class", 510, 590),
                    block("class", 600, 680),
                    block("meal", 720, 750),
                    block("class", 840, 920),
                    block("meal", 1080, 1110),
                    block("sleep", 1380, 1440),
                ],
                vec![("study", 330), ("training", 30)],
            ),
            PersonaName::StudentAthlete => (
                vec![
                    block("sleep", 0, 360),
                    block("training", 390, 480),
                    block("meal", 480, 510),
                    block("class", 540, 620),
                    block("meal", 720, 750),
                    block("class", 780, 860),
                    block("training", 960, 1080),
                    block("meal", 1110, 1140),
                    block("sleep", 1350, 1440),
                ],
                vec![("study", 120), ("leisure", 60)],
            ),
            PersonaName::CarefreeFreshman => (
                vec![
                    block("sleep", 0, 540),
                    block("meal", 570, 600),
                    block("class", 660, 740),
                    block("meal", 780, 810),
                    block("class", 900, 980),
                    block("meal", 1140, 1170),
                    block("sleep", 1410, 1440),
                ],
                vec![("leisure", 180), ("study", 60)],
            ),
        };
        Persona {
            name,
            fixed_schedule,
            goal_activities: goals
                .into_iter()
                .map(|(id, m)| (ActivityId::new(id), m))
                .collect(),
        }
    }

    /// End of the sleep block that starts the day, or midnight.
    pub fn wake_time(&self) -> u16 {
        self.fixed_schedule
            .iter()
            .find(|(a, s, _)| a.as_str() == "sleep" && *s == 0)
            .map_or(0, |&(_, _, e)| e)
    }
}

fn infeasible(msg: impl Into<String>) -> SimError {
    SimError::InfeasiblePersona(msg.into())
}

/// Free gaps of the planned day, in time order.
fn free_gaps(day: &DayRecord) -> Vec<(u16, u16)> {
    let mut busy: Vec<(u16, u16)> = day.planned.iter().map(|iv| (iv.start, iv.end)).collect();
    busy.sort_unstable();
    let mut gaps = Vec::new();
    let mut cursor = 0;
    for (s, e) in busy {
        if s > cursor {
            gaps.push((cursor, s));
        }
        cursor = cursor.max(e);
    }
    if cursor < MINUTES_PER_DAY {
        gaps.push((cursor, MINUTES_PER_DAY));
    }
    gaps
}

/// The persona's fixed schedule plus its goal minutes, placed earliest-fit
/// into free time on a 5-minute grid.
pub fn plan_day(persona: &Persona, date: NaiveDate) -> Result<DayRecord, SimError> {
    let mut day = DayRecord::new(date);
    let mut total = 0u32;
    for (activity, start, end) in &persona.fixed_schedule {
        if start % GRID != 0 || end % GRID != 0 {
            return Err(infeasible(format!("{activity} {start}-{end} is off the 5-minute grid")));
        }
        let iv = Interval::new(activity.clone(), (*start).into(), (*end).into())
            .map_err(|e| infeasible(e.to_string()))?;
        total += u32::from(iv.duration());
        day.add_interval(IntervalKind::Planned, iv)
            .map_err(|e| infeasible(e.to_string()))?;
    }
    if total > u32::from(MINUTES_PER_DAY) {
        return Err(infeasible("fixed schedule exceeds the day"));
    }
    for (activity, target) in &persona.goal_activities {
        let mut remaining = *target;
        for (gap_start, gap_end) in free_gaps(&day) {
            if remaining == 0 {
                break;
            }
            let mut cursor = gap_start;
            while remaining > 0 {
                let room = gap_end - cursor;
                let len = remaining.min(MAX_BLOCK).min(room);
                if len == 0 || (len < MIN_BLOCK && len < remaining) {
                    break;
                }
                let iv = Interval::new(activity.clone(), cursor.into(), (cursor + len).into())
                    .map_err(|e| infeasible(e.to_string()))?;
                day.add_interval(IntervalKind::Planned, iv)
                    .map_err(|e| infeasible(e.to_string()))?;
                cursor += len;
                remaining -= len;
            }
        }
        if remaining > 0 {
            return Err(infeasible(format!("no room for {remaining} more minutes of {activity}")));
        }
    }
    Ok(day)
}
