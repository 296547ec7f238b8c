//! Standalone SVG line charts.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    LogLog,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

/// Renders named `(t, value)` series. Log-log mode needs every `t` and
/// value positive.
pub fn svg_chart(series: &[(String, Vec<(f64, f64)>)], scale: Scale) -> Result<String> {
    if series.iter().all(|(_, s)| s.is_empty()) {
        return Err(Error::Input("nothing to plot".into()));
    }
    let map = |v: f64| if scale == Scale::LogLog { v.log10() } else { v };
    let mut pts: Vec<(&str, Vec<(f64, f64)>)> = Vec::new();
    for (name, s) in series {
        let mut out = Vec::with_capacity(s.len());
        for &(t, v) in s {
            if !(t.is_finite() && v.is_finite()) {
                return Err(Error::Input(format!("{name}: non-finite value at t = {t}")));
            }
            if scale == Scale::LogLog && !(t > 0.0 && v > 0.0) {
                return Err(Error::Input(format!(
                    "{name}: log-log scale needs positive data, found ({t}, {v})"
                )));
            }
            out.push((map(t), map(v)));
        }
        pts.push((name, out));
    }
    let all = pts.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = span(x0, x1);
    let (y0, y1) = span(y0, y1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let label = |v: f64| {
        if scale == Scale::LogLog {
            format!("{:.3e}", 10f64.powf(v))
        } else {
            format!("{v:.4}")
        }
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">
<rect width="100%" height="100%" fill="white"/>
<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(xv),
            H - MARGIN + 16.0,
            label(xv)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            sy(yv) + 4.0,
            label(yv)
        );
    }
    let axis = if scale == Scale::LogLog { "t (log)" } else { "t" };
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{axis}</text>"#, W / 2.0, H - 12.0);
    for (i, (name, p)) in pts.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 16.0 + 14.0 * i as f64,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
