//! Minimal self-contained SVG line charts for reproduced datasets.
//!
//! Both axes are logarithmic: every reproduced metric is positive and the
//! interesting behavior is a power law in the antenna count, which renders
//! as a straight line here. Rows with a non-positive value or a zero
//! antenna count (case-level fit summaries) are skipped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::output::Row;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 250.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 11] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f", "#000000",
];

/// Closed-form/reference metrics render dashed; simulated ones solid.
fn is_reference(metric: &str) -> bool {
    metric.ends_with("_analytic")
        || metric.ends_with("_lower_bound")
        || metric == "slope_reference"
        || metric == "contamination_ceiling"
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders rows as an SVG document string.
pub fn render_chart(title: &str, y_label: &str, rows: &[Row]) -> String {
    // (case_id, metric) -> sorted (m, value) points.
    let mut series: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        if r.m == 0 || !(r.value.is_finite() && r.value > 0.0) {
            continue;
        }
        series
            .entry((r.case_id.clone(), r.metric.clone()))
            .or_default()
            .push((r.m as f64, r.value));
    }
    series.retain(|_, pts| {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        !pts.is_empty()
    });

    let mut svg = String::new();
    let _ = write!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{tx}" y="26" text-anchor="middle" font-size="16">{title}</text>
"##,
        tx = MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
        title = esc(title),
    );
    if series.is_empty() {
        let _ = write!(
            svg,
            r##"<text x="{x}" y="{y}" text-anchor="middle" font-size="14">no plottable points</text></svg>"##,
            x = WIDTH / 2.0,
            y = HEIGHT / 2.0
        );
        return svg;
    }

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for pts in series.values() {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min == x_max {
        x_min *= 0.8;
        x_max *= 1.25;
    }
    let (lx0, lx1) = (x_min.log10(), x_max.log10());
    let (mut ly0, mut ly1) = (y_min.log10(), y_max.log10());
    let pad = 0.05 * (ly1 - ly0).max(0.2);
    ly0 -= pad;
    ly1 += pad;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x.log10() - lx0) / (lx1 - lx0) * plot_w;
    let sy = |y: f64| MARGIN_T + (ly1 - y.log10()) / (ly1 - ly0) * plot_h;

    // Frame.
    let _ = write!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>
"##
    );

    // X ticks: every distinct antenna count.
    let mut xs: Vec<f64> = series.values().flatten().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for &x in &xs {
        let px = sx(x);
        let _ = write!(
            svg,
            r##"<line x1="{px:.1}" y1="{y0}" x2="{px:.1}" y2="{y1}" stroke="#444"/>
<text x="{px:.1}" y="{ty}" text-anchor="middle" font-size="12">{x}</text>
"##,
            y0 = MARGIN_T + plot_h,
            y1 = MARGIN_T + plot_h + 5.0,
            ty = MARGIN_T + plot_h + 20.0,
        );
    }
    let _ = write!(
        svg,
        r##"<text x="{cx}" y="{cy}" text-anchor="middle" font-size="13">antennas M (log scale)</text>
"##,
        cx = MARGIN_L + plot_w / 2.0,
        cy = HEIGHT - 14.0,
    );

    // Y ticks: decades covering the range.
    let d0 = ly0.floor() as i32;
    let d1 = ly1.ceil() as i32;
    for d in d0..=d1 {
        let y = 10f64.powi(d);
        let py = sy(y);
        if !(MARGIN_T..=MARGIN_T + plot_h).contains(&py) {
            continue;
        }
        let _ = write!(
            svg,
            r##"<line x1="{x0}" y1="{py:.1}" x2="{x1}" y2="{py:.1}" stroke="#ccc" stroke-dasharray="2,4"/>
<text x="{tx}" y="{ty:.1}" text-anchor="end" font-size="12">1e{d}</text>
"##,
            x0 = MARGIN_L,
            x1 = MARGIN_L + plot_w,
            tx = MARGIN_L - 8.0,
            ty = py + 4.0,
        );
    }
    let _ = write!(
        svg,
        r##"<text x="20" y="{cy}" text-anchor="middle" font-size="13" transform="rotate(-90 20 {cy})">{label} (log scale)</text>
"##,
        cy = MARGIN_T + plot_h / 2.0,
        label = esc(y_label),
    );

    // Series: one color per case, solid for simulation, dashed for
    // closed-form references.
    let mut case_color: BTreeMap<&str, &str> = BTreeMap::new();
    for (case_id, _) in series.keys() {
        let next = PALETTE[case_color.len() % PALETTE.len()];
        case_color.entry(case_id.as_str()).or_insert(next);
    }
    let mut legend_y = MARGIN_T + 10.0;
    for ((case_id, metric), pts) in &series {
        let color = case_color[case_id.as_str()];
        let dash = if is_reference(metric) {
            r##" stroke-dasharray="6,4""##
        } else {
            ""
        };
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = write!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>
"##,
            path.join(" ")
        );
        for &(x, y) in pts {
            let _ = write!(
                svg,
                r##"<circle cx="{:.2}" cy="{:.2}" r="2.4" fill="{color}"/>
"##,
                sx(x),
                sy(y)
            );
        }
        // Legend entry.
        let lx = WIDTH - MARGIN_R + 16.0;
        let _ = write!(
            svg,
            r##"<line x1="{lx}" y1="{ly:.1}" x2="{lx2}" y2="{ly:.1}" stroke="{color}" stroke-width="1.8"{dash}/>
<text x="{tx}" y="{ty:.1}" font-size="11">{label}</text>
"##,
            ly = legend_y,
            lx2 = lx + 26.0,
            tx = lx + 32.0,
            ty = legend_y + 3.5,
            label = esc(&format!("{case_id} {metric}")),
        );
        legend_y += 16.0;
    }
    svg.push_str("</svg>\n");
    svg
}
