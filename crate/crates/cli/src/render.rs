use std::fmt::Write;

use timestream_core::analytics::{AdherenceReport, PatternEvent};
use timestream_core::time::format_clock;
use timestream_core::{BinMatrix, DayRecord, Interval, Journal};

/// Display label for an activity id, falling back to the id itself.
pub fn name(journal: &Journal, id: &timestream_core::ActivityId) -> String {
    journal.activity(id).map_or_else(|| id.to_string(), |a| a.name.clone())
}

pub fn span(iv: &Interval) -> String {
    format!("{}-{}", format_clock(iv.start), format_clock(iv.end))
}

pub fn interval_line(journal: &Journal, iv: &Interval) -> String {
    format!("{:<14} {:<12} {}", iv.key().to_string(), name(journal, &iv.activity), span(iv))
}

pub fn day_text(journal: &Journal, day: &DayRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", day.date);
    for (label, list) in [("planned", &day.planned), ("logged", &day.logged)] {
        let _ = writeln!(out, "{label}:");
        if list.is_empty() {
            out.push_str("  (none)\n");
        }
        for iv in list {
            let _ = writeln!(out, "  {}", interval_line(journal, iv));
        }
    }
    for t in &day.active {
        let _ = writeln!(out, "running: {} since {}", name(journal, &t.activity), format_clock(t.started_at));
    }
    out
}

const MINUTES_PER_ROW: u32 = 10;

/// A 24-column histogram of minutes per hour: logged bars rise above the
/// baseline, planned bars hang below it, followed by the exact totals.
pub fn ascii_histogram(planned: &BinMatrix, logged: &BinMatrix) -> String {
    let totals = |m: &BinMatrix| (0..24).map(|h| m.column_total(h)).collect::<Vec<u32>>();
    let (p, l) = (totals(planned), totals(logged));
    let peak = p.iter().chain(&l).copied().max().unwrap_or(0);
    let rows = peak.div_ceil(MINUTES_PER_ROW).max(6);
    let bar = |v: u32, level: u32| if v >= level * MINUTES_PER_ROW - MINUTES_PER_ROW / 2 && v > 0 { " ##" } else { "   " };

    let mut out = String::new();
    for level in (1..=rows).rev() {
        out.push_str("        ");
        for &v in &l {
            out.push_str(bar(v, level));
        }
        out.push('\n');
    }
    out.push_str("        ");
    out.push_str(&"---".repeat(24));
    out.push('\n');
    for level in 1..=rows {
        out.push_str("        ");
        for &v in &p {
            out.push_str(bar(v, level));
        }
        out.push('\n');
    }
    let row = |label: &str, values: &[u32]| {
        let cells: String = values.iter().map(|v| format!("{v:>3}")).collect();
        format!("{label:<8}{cells}\n")
    };
    out.push_str(&row("hour", &(0..24).collect::<Vec<_>>()));
    out.push_str(&row("logged", &l));
    out.push_str(&row("planned", &p));
    out
}

pub fn patterns_text(journal: &Journal, events: &[PatternEvent]) -> String {
    if events.is_empty() {
        return "no deviations\n".to_string();
    }
    let mut out = String::new();
    for e in events {
        let refs = match (&e.planned_ref, &e.logged_ref) {
            (Some(p), Some(l)) => format!("{} -> {}", span(p), span(l)),
            (Some(p), None) => format!("{} -> (skipped)", span(p)),
            (None, Some(l)) => format!("(unplanned) -> {}", span(l)),
            (None, None) => String::new(),
        };
        let by = e
            .replacing_activity
            .as_ref()
            .map(|r| format!(" by {}", name(journal, r)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<15} {:<12} {} ({} min){by}",
            e.kind.name(),
            name(journal, &e.activity),
            refs,
            e.magnitude_minutes
        );
    }
    out
}

fn ratio(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |s| format!("{s:.3}"))
}

pub fn score_text(journal: &Journal, report: &AdherenceReport) -> String {
    let mut out = format!("overall      {}\n", ratio(report.overall));
    for (id, score) in &report.per_activity {
        if score.is_some() {
            let _ = writeln!(out, "{:<12} {}", name(journal, id), ratio(*score));
        }
    }
    out
}
