//! Mirrored timeline-stream geometry.
//!
//! Logged time is stacked upwards from a fixed zero baseline and planned time
//! is stacked the same way and then negated, so a day that went to plan is
//! symmetric about the baseline. Each activity's thickness is interpolated on
//! its own and only then stacked, which keeps layers non-negative and
//! non-crossing whatever the smoothing.

mod interp;
mod svg;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activity::ActivityId;
use crate::bins::{bin_day, BinMatrix};
use crate::day::DayRecord;
use crate::interval::IntervalKind;

pub use interp::{knot_xs, monotone_slopes, sample_xs, Smoothing, ThicknessCurve};
pub use svg::render_svg;

pub const DEFAULT_SAMPLES_PER_BIN: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("planned and logged matrices cover different activities")]
    InconsistentActivities,
    #[error("unknown activity {0}")]
    UnknownActivity(ActivityId),
    #[error("invalid layout config: {0}")]
    InvalidConfig(String),
    #[error("expected 7 days, got {0}")]
    WrongDayCount(usize),
    #[error("days must be consecutive dates")]
    NonConsecutiveDays,
    #[error("canvas {width}x{height} is too small, both sides must be at least 100")]
    DegenerateCanvas { width: u32, height: u32 },
}

impl LayoutError {
    pub fn code(&self) -> &'static str {
        match self {
            LayoutError::InconsistentActivities => "InconsistentActivities",
            LayoutError::UnknownActivity(_) => "UnknownActivity",
            LayoutError::InvalidConfig(_) => "InvalidConfig",
            LayoutError::WrongDayCount(_) => "WrongDayCount",
            LayoutError::NonConsecutiveDays => "NonConsecutiveDays",
            LayoutError::DegenerateCanvas { .. } => "DegenerateCanvas",
        }
    }
}

/// Session-local view settings. Index 0 of `order` sits on the baseline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutConfig {
    pub order: Vec<ActivityId>,
    pub visible: BTreeSet<ActivityId>,
    pub smoothing: Smoothing,
    pub samples_per_bin: u32,
}

impl LayoutConfig {
    /// Every activity in `order` visible, smoothed, default sampling.
    pub fn new(order: Vec<ActivityId>) -> Self {
        let visible = order.iter().cloned().collect();
        LayoutConfig {
            order,
            visible,
            smoothing: Smoothing::default(),
            samples_per_bin: DEFAULT_SAMPLES_PER_BIN,
        }
    }

    pub fn with_smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        if self.samples_per_bin == 0 {
            return Err(LayoutError::InvalidConfig("samples_per_bin must be >= 1".into()));
        }
        let mut seen = BTreeSet::new();
        for id in &self.order {
            if !seen.insert(id) {
                return Err(LayoutError::InvalidConfig(format!("{id} appears twice in order")));
            }
        }
        if let Some(missing) = self.visible.iter().find(|id| !seen.contains(id)) {
            return Err(LayoutError::UnknownActivity(missing.clone()));
        }
        Ok(())
    }

    /// Visible activities from the baseline outwards.
    pub fn stack(&self) -> impl Iterator<Item = &ActivityId> {
        self.order.iter().filter(|id| self.visible.contains(*id))
    }
}

/// Moves `activity` to the baseline, keeping the others in relative order.
pub fn reorder_to_baseline(config: &LayoutConfig, activity: &ActivityId) -> Result<LayoutConfig, LayoutError> {
    let pos = config
        .order
        .iter()
        .position(|id| id == activity)
        .ok_or_else(|| LayoutError::UnknownActivity(activity.clone()))?;
    let mut next = config.clone();
    let id = next.order.remove(pos);
    next.order.insert(0, id);
    Ok(next)
}

/// Replaces the visible set. Hidden activities drop out and the stack closes up.
pub fn set_filter(config: &LayoutConfig, visible: BTreeSet<ActivityId>) -> Result<LayoutConfig, LayoutError> {
    if let Some(unknown) = visible.iter().find(|id| !config.order.contains(id)) {
        return Err(LayoutError::UnknownActivity(unknown.clone()));
    }
    Ok(LayoutConfig {
        visible,
        ..config.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePoint {
    pub x: f64,
    pub lower: f64,
    pub upper: f64,
}

impl WavePoint {
    pub fn thickness(&self) -> f64 {
        (self.upper - self.lower).abs()
    }
}

/// One activity's band on one side of the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub activity: ActivityId,
    pub points: Vec<WavePoint>,
}

/// Render-ready boundaries for both sides, in minutes.
///
/// Waves are listed from the baseline outwards. Layers with zero thickness
/// everywhere on a side are left out of that side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveGeometry {
    pub logged: Vec<Wave>,
    pub planned: Vec<Wave>,
    /// Largest absolute boundary of this geometry.
    pub extent: f64,
    /// Half-height the renderer should map to the canvas; equals `extent`
    /// unless several geometries share one scale.
    pub scale: f64,
}

impl WaveGeometry {
    pub fn empty() -> Self {
        WaveGeometry {
            logged: Vec::new(),
            planned: Vec::new(),
            extent: 0.0,
            scale: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.logged.is_empty() && self.planned.is_empty()
    }

    pub fn wave_count(&self) -> usize {
        self.logged.len() + self.planned.len()
    }
}

fn stack_side(matrix: &BinMatrix, config: &LayoutConfig, xs: &[f64], negate: bool) -> (Vec<Wave>, f64) {
    let mut base = vec![0.0_f64; xs.len()];
    let mut waves = Vec::new();
    for id in config.stack() {
        let row = matrix.row(id).expect("checked by compute_layout");
        if row.iter().all(|&c| c == 0) {
            continue;
        }
        let curve = ThicknessCurve::new(row, config.smoothing);
        let points = xs
            .iter()
            .zip(base.iter_mut())
            .map(|(&x, b)| {
                let lower = *b;
                let upper = lower + curve.eval(x);
                *b = upper;
                if negate {
                    WavePoint {
                        x,
                        lower: 0.0 - lower,
                        upper: 0.0 - upper,
                    }
                } else {
                    WavePoint { x, lower, upper }
                }
            })
            .collect();
        waves.push(Wave {
            activity: id.clone(),
            points,
        });
    }
    let extent = base.iter().copied().fold(0.0, f64::max);
    (waves, extent)
}

/// Builds the mirrored stacks for one day.
pub fn compute_layout(planned: &BinMatrix, logged: &BinMatrix, config: &LayoutConfig) -> Result<WaveGeometry, LayoutError> {
    config.validate()?;
    let universe: BTreeSet<&ActivityId> = planned.activities.iter().collect();
    if universe != logged.activities.iter().collect() {
        return Err(LayoutError::InconsistentActivities);
    }
    if let Some(missing) = config.stack().find(|id| !universe.contains(id)) {
        return Err(LayoutError::UnknownActivity(missing.clone()));
    }
    let xs = sample_xs(config.samples_per_bin);
    let (logged_waves, logged_extent) = stack_side(logged, config, &xs, false);
    let (planned_waves, planned_extent) = stack_side(planned, config, &xs, true);
    let extent = logged_extent.max(planned_extent);
    Ok(WaveGeometry {
        logged: logged_waves,
        planned: planned_waves,
        extent,
        scale: extent,
    })
}

/// Layout for a single day record over `universe`.
pub fn day_layout(day: &DayRecord, universe: &[ActivityId], config: &LayoutConfig) -> Result<WaveGeometry, LayoutError> {
    let planned = bin_day(day, IntervalKind::Planned, universe);
    let logged = bin_day(day, IntervalKind::Logged, universe);
    compute_layout(&planned, &logged, config)
}

/// Seven day layouts that share the busiest day's scale.
pub fn week_layouts(days: &[DayRecord], universe: &[ActivityId], config: &LayoutConfig) -> Result<Vec<WaveGeometry>, LayoutError> {
    if days.len() != 7 {
        return Err(LayoutError::WrongDayCount(days.len()));
    }
    if days.windows(2).any(|w| w[0].date.succ_opt() != Some(w[1].date)) {
        return Err(LayoutError::NonConsecutiveDays);
    }
    let mut layouts = days
        .iter()
        .map(|d| day_layout(d, universe, config))
        .collect::<Result<Vec<_>, _>>()?;
    let shared = layouts.iter().map(|g| g.extent).fold(0.0, f64::max);
    for g in &mut layouts {
        g.scale = shared;
    }
    Ok(layouts)
}
