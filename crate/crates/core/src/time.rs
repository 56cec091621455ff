//! Minute-of-day arithmetic. All times are local-naive integer minutes from
//! midnight; `1440` is only valid as an exclusive end.

use std::fmt;

pub const MINUTES_PER_DAY: u16 = 1440;
pub const HOURS_PER_DAY: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockParseError(pub String);

impl fmt::Display for ClockParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid clock time {:?}, expected HH:MM", self.0)
    }
}

impl std::error::Error for ClockParseError {}

/// Parses `HH:MM` (00:00 through 24:00) into minutes from midnight.
pub fn parse_clock(text: &str) -> Result<u16, ClockParseError> {
    let err = || ClockParseError(text.to_string());
    let (h, m) = text.trim().split_once(':').ok_or_else(err)?;
    if h.is_empty() || h.len() > 2 || m.len() != 2 {
        return Err(err());
    }
    let h: u16 = h.parse().map_err(|_| err())?;
    let m: u16 = m.parse().map_err(|_| err())?;
    if m >= 60 || h > 24 || (h == 24 && m != 0) {
        return Err(err());
    }
    Ok(h * 60 + m)
}

pub fn format_clock(minutes: u16) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

/// Length of the intersection of `[a0, a1)` and `[b0, b1)`.
pub fn overlap(a0: u16, a1: u16, b0: u16, b1: u16) -> u16 {
    a1.min(b1).saturating_sub(a0.max(b0))
}
