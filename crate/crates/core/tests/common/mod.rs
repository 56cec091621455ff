#![allow(dead_code)]

use chrono::NaiveDate;
use proptest::prelude::*;
use timestream_core::{ActivityId, BinMatrix, DayRecord, Interval, IntervalKind};

pub const IDS: [&str; 4] = ["a1", "a2", "a3", "a4"];

pub fn date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 3, 4).unwrap()
}

pub fn universe() -> Vec<ActivityId> {
    IDS.iter().map(|&s| s.into()).collect()
}

pub fn arb_spans(max: usize) -> impl Strategy<Value = Vec<(usize, u16, u16)>> {
    prop::collection::vec((0..IDS.len(), 0u16..1440, 1u16..240), 0..max)
}

/// Adds spans in order, skipping any that would overlap its own activity.
pub fn build_day(planned: &[(usize, u16, u16)], logged: &[(usize, u16, u16)]) -> DayRecord {
    let mut day = DayRecord::new(date());
    for (kind, spans) in [(IntervalKind::Planned, planned), (IntervalKind::Logged, logged)] {
        for &(a, s, len) in spans {
            let e = (s + len).min(1440);
            let iv = Interval::new(IDS[a].into(), s.into(), e.into()).unwrap();
            let _ = day.add_interval(kind, iv);
        }
    }
    day
}

pub fn arb_day() -> impl Strategy<Value = DayRecord> {
    (arb_spans(12), arb_spans(12)).prop_map(|(p, l)| build_day(&p, &l))
}

pub fn arb_matrix() -> impl Strategy<Value = BinMatrix> {
    // bias towards zeros so sparse rows and isolated spikes are common
    let cell = prop_oneof![3 => Just(0u16), 1 => Just(60u16), 3 => 0u16..=60];
    prop::collection::vec(prop::array::uniform24(cell), IDS.len()).prop_map(|rows| {
        let mut m = BinMatrix::zeros(date(), universe());
        m.cells = rows;
        m
    })
}
