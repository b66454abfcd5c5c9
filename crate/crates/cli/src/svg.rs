//! Minimal self-contained SVG line plots.
//!
//! Plots are derived views of the CSV data, rendered without any external
//! process. Output is deterministic: fixed palette, fixed precision, LF
//! endings.

use std::fmt::Write as _;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 44.0;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn line(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, dashed: false }
    }

    pub fn dashed(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, dashed: true }
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

/// Floor for log-scale plots; values at or below zero clamp here.
const LOG_FLOOR: f64 = 1e-17;

/// Render side-by-side panels as one standalone SVG document.
pub fn render(panels: &[Panel], panel_width: u32, panel_height: u32) -> String {
    let total_w = panel_width * panels.len() as u32;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{panel_height}\" \
         viewBox=\"0 0 {total_w} {panel_height}\" font-family=\"Helvetica, Arial, sans-serif\">"
    );
    let _ = writeln!(out, "<rect width=\"{total_w}\" height=\"{panel_height}\" fill=\"white\"/>");
    for (i, panel) in panels.iter().enumerate() {
        let x0 = i as f64 * panel_width as f64;
        render_panel(&mut out, panel, x0, panel_width as f64, panel_height as f64);
    }
    out.push_str("</svg>\n");
    out
}

fn render_panel(out: &mut String, panel: &Panel, x0: f64, width: f64, height: f64) {
    let plot_x = x0 + MARGIN_LEFT;
    let plot_y = MARGIN_TOP;
    let plot_w = width - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = height - MARGIN_TOP - MARGIN_BOTTOM;

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &panel.series {
        for &(x, y) in &s.points {
            let y = if panel.log_y { y.max(LOG_FLOOR) } else { y };
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_min == x_max {
        x_max = x_min + 1.0;
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if panel.log_y {
        y_min = y_min.log10().floor();
        y_max = y_max.log10().ceil();
        if y_min == y_max {
            y_max += 1.0;
        }
    } else {
        let pad = 0.06 * (y_max - y_min).max(1e-12);
        y_min -= pad;
        y_max += pad;
    }

    let sx = move |x: f64| plot_x + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| {
        let v = if panel.log_y { y.max(LOG_FLOOR).log10() } else { y };
        plot_y + plot_h - (v - y_min) / (y_max - y_min) * plot_h
    };

    // frame
    let _ = writeln!(
        out,
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333\"/>",
        plot_x, plot_y, plot_w, plot_h
    );
    // title and axis labels
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
        plot_x + plot_w / 2.0,
        plot_y - 10.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
        plot_x + plot_w / 2.0,
        plot_y + plot_h + 32.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\" \
         transform=\"rotate(-90 {:.2} {:.2})\">{}</text>",
        x0 + 14.0,
        plot_y + plot_h / 2.0,
        x0 + 14.0,
        plot_y + plot_h / 2.0,
        escape(&panel.y_label)
    );

    // y ticks
    for (value, label) in y_ticks(y_min, y_max, panel.log_y) {
        let py = plot_y + plot_h - (value - y_min) / (y_max - y_min) * plot_h;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ccc\" stroke-width=\"0.5\"/>",
            plot_x,
            plot_x + plot_w
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"10\">{label}</text>",
            plot_x - 4.0,
            py + 3.0
        );
    }
    // x ticks
    for (value, label) in lin_ticks(x_min, x_max) {
        let px = sx(value);
        let _ = writeln!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>",
            plot_y + plot_h,
            plot_y + plot_h + 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"10\">{label}</text>",
            plot_y + plot_h + 16.0
        );
    }

    // series
    for (i, s) in panel.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if s.dashed { " stroke-dasharray=\"6 3\"" } else { "" };
        let mut d = String::new();
        for (k, &(x, y)) in s.points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2} {:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            d.trim_end()
        );
        // legend entry
        let ly = plot_y + 14.0 + 14.0 * i as f64;
        let lx = plot_x + plot_w - 150.0;
        let _ = writeln!(
            out,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            lx + 18.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>",
            lx + 22.0,
            ly + 3.0,
            escape(&s.label)
        );
    }
}

fn lin_ticks(min: f64, max: f64) -> Vec<(f64, String)> {
    let span = max - min;
    let raw_step = span / 5.0;
    let mag = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| span / s <= 6.0)
        .unwrap_or(mag * 10.0);
    let mut ticks = Vec::new();
    let mut v = (min / step).ceil() * step;
    while v <= max + 1e-9 * span {
        let label = if step >= 1.0 {
            format!("{v:.0}")
        } else {
            format!("{v:.3}")
        };
        ticks.push((v, label));
        v += step;
    }
    ticks
}

fn y_ticks(min: f64, max: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let mut ticks = Vec::new();
        let span = (max - min).max(1.0);
        let stride = (span / 6.0).ceil().max(1.0) as i64;
        let mut e = min.ceil() as i64;
        while (e as f64) <= max {
            ticks.push((e as f64, format!("1e{e}")));
            e += stride;
        }
        ticks
    } else {
        lin_ticks(min, max)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
