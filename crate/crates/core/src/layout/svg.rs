use std::collections::BTreeMap;
use std::fmt::Write;

use super::{LayoutError, Wave, WaveGeometry};
use crate::activity::ActivityId;

const MARGIN_LEFT: f64 = 48.0;
const MARGIN_RIGHT: f64 = 12.0;
const MARGIN_TOP: f64 = 12.0;
const MARGIN_BOTTOM: f64 = 28.0;
const FALLBACK_COLOR: &str = "#888888";
const FALLBACK_SCALE: f64 = 60.0;
const PLANNED_OPACITY: &str = "0.5";

struct Frame {
    left: f64,
    width: f64,
    mid: f64,
    half: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, hours: f64) -> f64 {
        self.left + hours / 24.0 * self.width
    }

    fn y(&self, minutes: f64) -> f64 {
        self.mid - minutes / self.scale * self.half
    }
}

/// Two decimals, never `-0.00`.
fn num(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        "0".to_string()
    } else {
        let s = format!("{r:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn wave_path(frame: &Frame, wave: &Wave) -> String {
    let mut d = String::new();
    for (i, p) in wave.points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{},{} ", num(frame.x(p.x)), num(frame.y(p.upper)));
    }
    for p in wave.points.iter().rev() {
        let _ = write!(d, "L{},{} ", num(frame.x(p.x)), num(frame.y(p.lower)));
    }
    d.push('Z');
    d
}

/// Renders a geometry as a standalone SVG 1.1 document. Equal inputs give
/// byte-identical output.
pub fn render_svg(
    geometry: &WaveGeometry,
    palette: &BTreeMap<ActivityId, String>,
    width_px: u32,
    height_px: u32,
) -> Result<String, LayoutError> {
    if width_px < 100 || height_px < 100 {
        return Err(LayoutError::DegenerateCanvas {
            width: width_px,
            height: height_px,
        });
    }
    let (w, h) = (f64::from(width_px), f64::from(height_px));
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let scale = if geometry.scale > 0.0 { geometry.scale } else { FALLBACK_SCALE };
    let frame = Frame {
        left: MARGIN_LEFT,
        width: w - MARGIN_LEFT - MARGIN_RIGHT,
        mid: MARGIN_TOP + plot_h / 2.0,
        half: plot_h / 2.0,
        scale,
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width_px}\" height=\"{height_px}\" viewBox=\"0 0 {width_px} {height_px}\">"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{width_px}\" height=\"{height_px}\" fill=\"#ffffff\"/>");

    out.push_str("<g class=\"waves\">\n");
    for (side, waves, opacity) in [
        ("planned", &geometry.planned, PLANNED_OPACITY),
        ("logged", &geometry.logged, "1"),
    ] {
        for wave in waves {
            let color = palette
                .get(&wave.activity)
                .map(String::as_str)
                .unwrap_or(FALLBACK_COLOR);
            let _ = writeln!(
                out,
                "<path class=\"wave {side}\" data-activity=\"{}\" data-side=\"{side}\" fill=\"{}\" fill-opacity=\"{opacity}\" stroke=\"none\" d=\"{}\"/>",
                escape(wave.activity.as_str()),
                escape(color),
                wave_path(&frame, wave)
            );
        }
    }
    out.push_str("</g>\n");

    let (x0, x1) = (num(frame.x(0.0)), num(frame.x(24.0)));
    let (top, bottom) = (num(frame.y(scale)), num(frame.y(-scale)));
    out.push_str("<g class=\"axes\" stroke=\"#444444\" stroke-width=\"1\">\n");
    let _ = writeln!(
        out,
        "<line class=\"baseline\" x1=\"{x0}\" y1=\"{mid}\" x2=\"{x1}\" y2=\"{mid}\"/>",
        mid = num(frame.mid)
    );
    let _ = writeln!(out, "<line class=\"y-axis\" x1=\"{x0}\" y1=\"{top}\" x2=\"{x0}\" y2=\"{bottom}\"/>");
    let tick_y = num(frame.y(-scale) + 4.0);
    let label_y = num(frame.y(-scale) + 16.0);
    let mut labels = String::new();
    for hour in 0..=24u32 {
        let x = num(frame.x(f64::from(hour)));
        let _ = writeln!(out, "<line class=\"tick\" x1=\"{x}\" y1=\"{bottom}\" x2=\"{x}\" y2=\"{tick_y}\"/>");
        let _ = writeln!(labels, "<text x=\"{x}\" y=\"{label_y}\">{hour}</text>");
    }
    out.push_str("</g>\n");

    out.push_str("<g class=\"labels\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#444444\" text-anchor=\"middle\">\n");
    out.push_str(&labels);
    let label_x = num(MARGIN_LEFT - 6.0);
    let scale_txt = num(scale);
    let _ = writeln!(out, "<text class=\"scale logged\" x=\"{label_x}\" y=\"{top}\" text-anchor=\"end\" dominant-baseline=\"hanging\">{scale_txt}</text>");
    let _ = writeln!(out, "<text class=\"scale zero\" x=\"{label_x}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"middle\">0</text>", num(frame.mid));
    let _ = writeln!(out, "<text class=\"scale planned\" x=\"{label_x}\" y=\"{bottom}\" text-anchor=\"end\">{scale_txt}</text>");
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
