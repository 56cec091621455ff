use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::activity::ActivityId;
use crate::day::DayRecord;
use crate::interval::IntervalKind;
use crate::time::{self, HOURS_PER_DAY};

pub type HourBins = [u16; HOURS_PER_DAY];

/// Minutes per activity per clock hour for one day and one kind.
///
/// `cells[i]` belongs to `activities[i]`. A column may sum past 60 when
/// activities overlap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinMatrix {
    pub date: NaiveDate,
    pub activities: Vec<ActivityId>,
    pub cells: Vec<HourBins>,
}

impl BinMatrix {
    pub fn zeros(date: NaiveDate, activities: Vec<ActivityId>) -> Self {
        let cells = vec![[0; HOURS_PER_DAY]; activities.len()];
        BinMatrix {
            date,
            activities,
            cells,
        }
    }

    pub fn row(&self, activity: &ActivityId) -> Option<&HourBins> {
        self.index_of(activity).map(|i| &self.cells[i])
    }

    pub fn index_of(&self, activity: &ActivityId) -> Option<usize> {
        self.activities.iter().position(|a| a == activity)
    }

    pub fn total(&self, activity: &ActivityId) -> u32 {
        self.row(activity)
            .map(|r| r.iter().map(|&c| u32::from(c)).sum())
            .unwrap_or(0)
    }

    pub fn column_total(&self, hour: usize) -> u32 {
        self.cells.iter().map(|r| u32::from(r[hour])).sum()
    }

    pub fn max_cell(&self) -> u16 {
        self.cells.iter().flat_map(|r| r.iter().copied()).max().unwrap_or(0)
    }
}

/// Bins the closed intervals of one kind into hour slots. Running timers are
/// not counted. Intervals of activities outside `universe` are ignored.
pub fn bin_day(day: &DayRecord, kind: IntervalKind, universe: &[ActivityId]) -> BinMatrix {
    let mut matrix = BinMatrix::zeros(day.date, universe.to_vec());
    for iv in day.intervals(kind) {
        let Some(row) = matrix.index_of(&iv.activity) else {
            continue;
        };
        let first = usize::from(iv.start / 60);
        let last = usize::from((iv.end - 1) / 60);
        for hour in first..=last {
            let h0 = (hour * 60) as u16;
            matrix.cells[row][hour] += time::overlap(iv.start, iv.end, h0, h0 + 60);
        }
    }
    matrix
}
