use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::activity::ActivityId;
use crate::bins::{bin_day, BinMatrix};
use crate::day::DayRecord;
use crate::interval::IntervalKind;

/// Ratio of shared to combined bin mass between plan and log, per activity
/// and overall. `None` means neither side has any minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdherenceReport {
    pub per_activity: BTreeMap<ActivityId, Option<f64>>,
    pub overall: Option<f64>,
}

fn ratio(min: u32, max: u32) -> Option<f64> {
    (max > 0).then(|| f64::from(min) / f64::from(max))
}

/// Scores two matrices over the planned matrix's activities; logged rows for
/// activities absent from it count as unplanned mass.
pub fn adherence_score(planned: &BinMatrix, logged: &BinMatrix) -> AdherenceReport {
    let mut ids: Vec<&ActivityId> = planned.activities.iter().collect();
    for id in &logged.activities {
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    let zero = [0u16; 24];
    let mut per_activity = BTreeMap::new();
    let (mut total_min, mut total_max) = (0u32, 0u32);
    for id in ids {
        let p = planned.row(id).unwrap_or(&zero);
        let l = logged.row(id).unwrap_or(&zero);
        let (mut min, mut max) = (0u32, 0u32);
        for (&a, &b) in p.iter().zip(l) {
            min += u32::from(a.min(b));
            max += u32::from(a.max(b));
        }
        total_min += min;
        total_max += max;
        per_activity.insert(id.clone(), ratio(min, max));
    }
    AdherenceReport {
        per_activity,
        overall: ratio(total_min, total_max),
    }
}

pub fn day_adherence(day: &DayRecord, universe: &[ActivityId]) -> AdherenceReport {
    adherence_score(
        &bin_day(day, IntervalKind::Planned, universe),
        &bin_day(day, IntervalKind::Logged, universe),
    )
}
