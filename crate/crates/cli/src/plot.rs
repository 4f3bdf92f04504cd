//! Minimal hand-rolled SVG convergence plots: absolute error against the
//! Folner radius, log-scaled, one file per experiment.

use hschur_core::ExperimentReport;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;
const FLOOR: f64 = 1e-16;

fn x_pos(r: f64, r_min: f64, r_max: f64) -> f64 {
    let (a, b) = (r_min.log2(), r_max.log2());
    let t = if b > a { (r.log2() - a) / (b - a) } else { 0.5 };
    ML + t * (W - ML - MR)
}

fn y_pos(err: f64, lo: f64, hi: f64) -> f64 {
    let e = err.max(FLOOR).log10();
    let t = if hi > lo { (e - lo) / (hi - lo) } else { 0.5 };
    H - MB - t * (H - MT - MB)
}

/// Renders one report as an SVG document (deterministic bytes).
pub fn render(report: &ExperimentReport) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = write!(
        s,
        r#"<rect width="{W}" height="{H}" fill="white" stroke="none"/>"#
    );
    let _ = write!(
        s,
        r#"<text x="{:.1}" y="24" font-family="monospace" font-size="15">{} [{}] - {:?}</text>"#,
        ML,
        report.id,
        report.kind,
        report.verdict
    );

    let rs: Vec<f64> = report.records.iter().map(|rec| rec.r).collect();
    let errs: Vec<f64> = report
        .records
        .iter()
        .map(|rec| rec.abs_error.max(FLOOR))
        .collect();
    if rs.is_empty() {
        s.push_str("</svg>");
        return s;
    }
    let (r_min, r_max) = (rs[0], *rs.last().unwrap());
    let lo = errs.iter().cloned().fold(f64::INFINITY, f64::min).log10().floor() - 0.5;
    let hi = errs.iter().cloned().fold(FLOOR, f64::max).log10().ceil() + 0.5;

    // axes
    let _ = write!(
        s,
        r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{:.1}" stroke="black"/><line x1="{ML}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        H - MB,
        H - MB,
        W - MR,
        H - MB
    );
    let _ = write!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12">radius r (log)</text>"#,
        (W - ML) / 2.0,
        H - 14.0
    );
    let _ = write!(
        s,
        r#"<text x="12" y="{:.1}" font-family="monospace" font-size="12" transform="rotate(-90 12 {:.1})">abs error (log10)</text>"#,
        H / 2.0,
        H / 2.0
    );

    // y tick labels at integer decades
    let mut d = lo.ceil() as i64;
    while (d as f64) <= hi {
        let y = y_pos(10f64.powi(d as i32), lo, hi);
        let _ = write!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{ML}" y2="{y:.1}" stroke="black"/><text x="8" y="{:.1}" font-family="monospace" font-size="11">1e{d}</text>"#,
            ML - 4.0,
            y + 4.0
        );
        d += 1;
    }
    // x ticks at each scheduled radius
    for &r in &rs {
        let x = x_pos(r, r_min, r_max);
        let _ = write!(
            s,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11">{r}</text>"#,
            H - MB,
            H - MB + 4.0,
            x - 8.0,
            H - MB + 18.0
        );
    }

    // error polyline and markers
    let mut points = String::new();
    for (r, e) in rs.iter().zip(&errs) {
        let _ = write!(
            points,
            "{:.2},{:.2} ",
            x_pos(*r, r_min, r_max),
            y_pos(*e, lo, hi)
        );
    }
    let _ = write!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        points.trim_end()
    );
    for (r, e) in rs.iter().zip(&errs) {
        let _ = write!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="steelblue"/>"#,
            x_pos(*r, r_min, r_max),
            y_pos(*e, lo, hi)
        );
    }
    if let Some(thr) = report.threshold_r {
        if thr >= r_min && thr <= r_max {
            let x = x_pos(thr, r_min, r_max);
            let _ = write!(
                s,
                r#"<line x1="{x:.1}" y1="{MT}" x2="{x:.1}" y2="{:.1}" stroke="firebrick" stroke-dasharray="4 3"/><text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11" fill="firebrick">threshold</text>"#,
                H - MB,
                x + 4.0,
                MT + 12.0
            );
        }
    }
    s.push_str("</svg>");
    s
}
