//! Minimal SVG line charts for the correlation series and sweep tables.

use std::fmt::Write as _;

use crate::output::{Table, SERIES_HEADER, SWEEP_HEADER};
use crate::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Axis {
    label: &'static str,
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    fn fit(label: &'static str, values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            if v.is_finite() {
                min = min.min(v);
                max = max.max(v);
            }
        }
        if !min.is_finite() {
            (min, max) = (0.0, 1.0);
        } else if max - min <= f64::EPSILON * max.abs().max(1.0) {
            (min, max) = (min - 0.5, max + 0.5);
        }
        Self { label, min, max, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.min) / (self.max - self.min)
    }

    fn tick_label(&self, frac: f64) -> String {
        let v = self.min + frac * (self.max - self.min);
        if self.log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3e}")
        }
    }
}

fn render(title: &str, x: &Axis, y: &Axis, curves: &[Curve]) -> String {
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + x.unit(v) * pw;
    let py = |v: f64| TOP + (1.0 - y.unit(v)) * ph;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ =
        writeln!(svg, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{title}</text>"#, LEFT + pw / 2.0);
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let gx = LEFT + f * pw;
        let gy = TOP + (1.0 - f) * ph;
        let _ =
            writeln!(svg, r##"<line x1="{gx:.2}" y1="{TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#dddddd"/>"##, TOP + ph);
        let _ =
            writeln!(svg, r##"<line x1="{LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#dddddd"/>"##, LEFT + pw);
        let _ = writeln!(
            svg,
            r#"<text x="{gx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            x.tick_label(f)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            gy + 4.0,
            y.tick_label(f)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        x.label
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        y.label
    );
    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .filter(|(a, b)| px(*a).is_finite() && py(*b).is_finite())
            .map(|(a, b)| format!("{:.2},{:.2}", px(*a), py(*b)))
            .collect();
        let _ =
            writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, c.label);
    }
    svg.push_str("</svg>\n");
    svg
}

fn series_plot(t: &Table) -> Result<String, CliError> {
    let lags = t.floats("lag_bins")?;
    let s = t.floats("s")?;
    let c1 = t.floats("c1")?;
    let c2 = t.floats("c2")?;
    let curves = vec![
        Curve { label: "s".into(), points: lags.iter().copied().zip(s.iter().copied()).collect() },
        Curve { label: "c1²".into(), points: lags.iter().zip(&c1).map(|(l, c)| (*l, c * c)).collect() },
        Curve { label: "c2²".into(), points: lags.iter().zip(&c2).map(|(l, c)| (*l, c * c)).collect() },
    ];
    let x = Axis::fit("lag (bins)", lags.iter().copied(), false);
    let y = Axis::fit("statistic (per-bin units²)", curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)), false);
    Ok(render("Correlation statistic against lag", &x, &y, &curves))
}

fn sweep_plot(t: &Table) -> Result<String, CliError> {
    let etas = t.floats("eta")?;
    let lo = t.floats("lo_intensity")?;
    let p = t.floats("p_detect")?;
    if etas.iter().any(|e| *e <= 0.0) {
        return Err(CliError::Config("sweep plot needs positive eta values for the log axis".into()));
    }
    let mut curves: Vec<(f64, Curve)> = Vec::new();
    for k in 0..etas.len() {
        match curves.iter_mut().find(|(i, _)| *i == lo[k]) {
            Some((_, c)) => c.points.push((etas[k], p[k])),
            None => curves.push((lo[k], Curve { label: format!("I = {:e}", lo[k]), points: vec![(etas[k], p[k])] })),
        }
    }
    let curves: Vec<Curve> = curves.into_iter().map(|(_, c)| c).collect();
    let x = Axis::fit("reflectivity eta (log10)", etas.iter().copied(), true);
    let y = Axis { label: "detection probability", min: 0.0, max: 1.0, log: false };
    Ok(render("Detection probability against reflectivity", &x, &y, &curves))
}

/// Renders a correlation-series or sweep CSV as SVG.
pub fn plot_csv(text: &str) -> Result<String, CliError> {
    let t = Table::parse(text)?;
    if t.rows.is_empty() {
        return Err(CliError::Config("CSV file has no data rows".into()));
    }
    if t.header == SERIES_HEADER {
        series_plot(&t)
    } else if t.header == SWEEP_HEADER {
        sweep_plot(&t)
    } else {
        Err(CliError::Config(format!("unrecognized CSV schema: {}", t.header.join(","))))
    }
}
