//! Single-panel SVG line plots of report profile tables.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use crate::report::{ProfileTable, Report};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// Finds the profile table for `quantity`, restricted to one experiment if
/// given. Ambiguous or missing selections are usage errors.
pub fn select<'a>(report: &'a Report, quantity: &str, experiment: Option<&str>) -> Result<&'a ProfileTable> {
    let matches: Vec<_> = report
        .profiles
        .iter()
        .filter(|p| p.quantity == quantity && experiment.is_none_or(|e| p.experiment == e))
        .collect();
    match matches.as_slice() {
        [one] => Ok(one),
        [] => {
            let known: Vec<String> =
                report.profiles.iter().map(|p| format!("{}:{}", p.experiment, p.quantity)).collect();
            bail!("no profile table for {quantity:?}; available: {}", known.join(", "))
        }
        many => {
            let owners: Vec<&str> = many.iter().map(|p| p.experiment.as_str()).collect();
            bail!("{quantity:?} appears in several experiments ({}); pick one with --experiment", owners.join(", "))
        }
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo > 0.0 {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        (lo - pad, hi + pad)
    }
}

/// Renders the table as SVG text.
pub fn render_svg(table: &ProfileTable) -> Result<String> {
    if table.rows.is_empty() {
        bail!("profile table {} is empty", table.quantity);
    }
    let (x0, x1) = bounds(table.rows.iter().map(|p| p.r));
    let (y0, y1) = bounds(table.rows.iter().map(|p| p.value));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}: {}</text>"#,
        WIDTH / 2.0,
        escape(&table.experiment),
        escape(&table.quantity)
    )?;
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    writeln!(s, r#"<path d="M{left} {top} V{bottom} H{right}" fill="none" stroke="black"/>"#)?;
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        writeln!(s, r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{}" stroke="black"/>"#, bottom + 5.0)?;
        writeln!(
            s,
            r#"<text x="{px:.2}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            bottom + 18.0,
            tick(xv)
        )?;
        writeln!(s, r#"<line x1="{}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/>"#, left - 5.0)?;
        writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            left - 8.0,
            py + 4.0,
            tick(yv)
        )?;
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0,
        escape(&table.abscissa)
    )?;
    let mut path = String::new();
    for (i, p) in table.rows.iter().enumerate() {
        write!(path, "{}{:.3} {:.3} ", if i == 0 { "M" } else { "L" }, sx(p.r), sy(p.value))?;
    }
    writeln!(s, r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, path.trim_end())?;
    writeln!(s, "</svg>")?;
    Ok(s)
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
