//! Thickness curves through hourly bin values.
//!
//! Knots sit at the bin centres `h + 0.5` with an extra zero knot at each day
//! edge, so every wave tapers to nothing at midnight.

use crate::bins::HourBins;
use crate::time::HOURS_PER_DAY;

pub const KNOT_COUNT: usize = HOURS_PER_DAY + 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    /// Straight segments between knots.
    None,
    /// Monotone piecewise cubic Hermite (Fritsch–Carlson slopes): no
    /// overshoot between knots.
    #[default]
    ShapePreservingCubic,
}

#[derive(Debug, Clone)]
pub struct ThicknessCurve {
    xs: [f64; KNOT_COUNT],
    ys: [f64; KNOT_COUNT],
    slopes: Option<[f64; KNOT_COUNT]>,
}

pub fn knot_xs() -> [f64; KNOT_COUNT] {
    let mut xs = [0.0; KNOT_COUNT];
    for (h, x) in xs[1..=HOURS_PER_DAY].iter_mut().enumerate() {
        *x = h as f64 + 0.5;
    }
    xs[KNOT_COUNT - 1] = HOURS_PER_DAY as f64;
    xs
}

impl ThicknessCurve {
    pub fn new(bins: &HourBins, smoothing: Smoothing) -> Self {
        let xs = knot_xs();
        let mut ys = [0.0; KNOT_COUNT];
        for (y, &b) in ys[1..=HOURS_PER_DAY].iter_mut().zip(bins) {
            *y = f64::from(b);
        }
        let slopes = match smoothing {
            Smoothing::None => None,
            Smoothing::ShapePreservingCubic => Some(monotone_slopes(&xs, &ys)),
        };
        ThicknessCurve { xs, ys, slopes }
    }

    /// Thickness at `x`, clamped at zero. `x` outside `[0, 24]` is clamped too.
    pub fn eval(&self, x: f64) -> f64 {
        let last = KNOT_COUNT - 1;
        let x = x.clamp(self.xs[0], self.xs[last]);
        let k = self.xs.partition_point(|&xk| xk <= x).clamp(1, last) - 1;
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        if x == x0 {
            return y0;
        }
        if x == x1 {
            return y1;
        }
        let h = x1 - x0;
        let t = (x - x0) / h;
        let v = match &self.slopes {
            None => y0 + (y1 - y0) * t,
            Some(d) => {
                let t2 = t * t;
                let t3 = t2 * t;
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                h00 * y0 + h10 * h * d[k] + h01 * y1 + h11 * h * d[k + 1]
            }
        };
        v.max(0.0)
    }
}

/// Node slopes for a monotone cubic interpolant: weighted harmonic means in
/// the interior, zero at local extrema, and the shape-preserving three-point
/// rule at the ends.
pub fn monotone_slopes(xs: &[f64; KNOT_COUNT], ys: &[f64; KNOT_COUNT]) -> [f64; KNOT_COUNT] {
    let n = KNOT_COUNT;
    let mut h = [0.0; KNOT_COUNT - 1];
    let mut delta = [0.0; KNOT_COUNT - 1];
    for k in 0..n - 1 {
        h[k] = xs[k + 1] - xs[k];
        delta[k] = (ys[k + 1] - ys[k]) / h[k];
    }
    let mut d = [0.0; KNOT_COUNT];
    for k in 1..n - 1 {
        let (s0, s1) = (delta[k - 1], delta[k]);
        if s0 == 0.0 || s1 == 0.0 || s0.signum() != s1.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / s0 + w2 / s1);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d.signum() != s0.signum() || s0 == 0.0 {
        0.0
    } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

/// Sample positions for `samples_per_bin` points per hour, with every bin
/// centre included exactly.
pub fn sample_xs(samples_per_bin: u32) -> Vec<f64> {
    let s = u64::from(samples_per_bin.max(1));
    let denom = 2 * s;
    (0..=denom * HOURS_PER_DAY as u64)
        .filter(|n| n % 2 == 0 || n % denom == s)
        .map(|n| n as f64 / denom as f64)
        .collect()
}
