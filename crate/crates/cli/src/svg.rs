//! Minimal SVG charts: a log-log error plot and a histogram with density
//! curves.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const M: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        M + (x - self.x0) / (self.x1 - self.x0).max(f64::MIN_POSITIVE) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y0) / (self.y1 - self.y0).max(f64::MIN_POSITIVE) * (H - 2.0 * M)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str, xticks: &[(f64, String)], yticks: &[(f64, String)]) {
    let _ = writeln!(
        out,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    for (v, label) in xticks {
        let x = f.px(*v);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, H - M, H - M + 4.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, H - M + 18.0, escape(label));
    }
    for (v, label) in yticks {
        let y = f.py(*v);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{M}" y2="{y:.2}" stroke="black"/>"#, M - 4.0);
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, M - 6.0, y + 4.0, escape(label));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, dash: bool) {
    let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{}/>"#,
        list.join(" "),
        if dash { r#" stroke-dasharray="5,3""# } else { "" }
    );
}

fn legend(out: &mut String, names: &[&str]) {
    for (i, name) in names.iter().enumerate() {
        let y = M + 14.0 + 16.0 * i as f64;
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#, W - M - 120.0, W - M - 100.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, W - M - 94.0, y + 4.0, escape(name));
    }
}

fn decade_ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    (lo.floor() as i32..=hi.ceil() as i32).map(|e| (e as f64, format!("1e{e}"))).collect()
}

/// Error against `n` on log-log axes, one line per series. Non-positive
/// values are dropped.
pub fn error_plot(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let logged: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, pts)| {
            pts.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.log10(), y.log10())).collect()
        })
        .collect();
    let all: Vec<&(f64, f64)> = logged.iter().flatten().collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if all.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, -1.0, 0.0);
    }
    let f = Frame { x0: x0 - 0.05, x1: x1 + 0.05, y0: y0.floor(), y1: y1.ceil().max(y0.floor() + 1.0) };
    let mut out = String::new();
    header(&mut out, title);
    let xticks: Vec<(f64, String)> = series
        .first()
        .map(|(_, pts)| pts.iter().filter(|(x, _)| *x > 0.0).map(|(x, _)| (x.log10(), format!("{x}"))).collect())
        .unwrap_or_default();
    axes(&mut out, &f, "n", "error", &xticks, &decade_ticks(f.y0, f.y1));
    for (i, pts) in logged.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let px: Vec<(f64, f64)> = pts.iter().map(|(x, y)| (f.px(*x), f.py(*y))).collect();
        polyline(&mut out, &px, color, false);
        for (x, y) in &px {
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
        }
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}

/// Histogram bars (as a density, mass / width) overlaid with density curves
/// sampled at the bin centers.
pub fn density_plot(title: &str, edges: &[f64], masses: &[f64], curves: &[(&str, &[f64])]) -> String {
    let width = if edges.len() > 1 { edges[1] - edges[0] } else { 1.0 };
    let heights: Vec<f64> = masses.iter().map(|m| m / width).collect();
    let ymax = heights.iter().chain(curves.iter().flat_map(|(_, c)| c.iter())).copied().fold(0.0, f64::max);
    let f = Frame {
        x0: edges.first().copied().unwrap_or(0.0),
        x1: edges.last().copied().unwrap_or(1.0),
        y0: 0.0,
        y1: if ymax > 0.0 { ymax * 1.1 } else { 1.0 },
    };
    let mut out = String::new();
    header(&mut out, title);
    for (i, h) in heights.iter().enumerate() {
        let (xa, xb) = (f.px(edges[i]), f.px(edges[i + 1]));
        let (ya, yb) = (f.py(*h), f.py(0.0));
        let _ = writeln!(
            out,
            r##"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="#cccccc" stroke="#888888"/>"##,
            xb - xa,
            yb - ya
        );
    }
    let centers: Vec<f64> = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    for (i, (_, ys)) in curves.iter().enumerate() {
        let px: Vec<(f64, f64)> = centers.iter().zip(ys.iter()).map(|(x, y)| (f.px(*x), f.py(*y))).collect();
        polyline(&mut out, &px, COLORS[i % COLORS.len()], i > 0);
    }
    let ticks = |lo: f64, hi: f64| -> Vec<(f64, String)> {
        (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).map(|v| (v, format!("{v:.3}"))).collect()
    };
    axes(&mut out, &f, "t", "density", &ticks(f.x0, f.x1), &ticks(f.y0, f.y1));
    let names: Vec<&str> = curves.iter().map(|(n, _)| *n).collect();
    legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}
