//! Dependency-free SVG plots: scatter/line charts, heat maps and the
//! density-matrix cityscape.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::algebra::DensityMatrix;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 55.0); // left, right, top, bottom
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Points,
    Line,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub errors: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn points(name: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>, errors: Option<Vec<f64>>) -> Self {
        Self { name: name.into(), xs, ys, errors, style: Style::Points }
    }

    pub fn line(name: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        Self { name: name.into(), xs, ys, errors: None, style: Style::Line }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = write!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, width / 2.0, escape(title));
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    while t <= hi + 1e-9 * span {
        ticks.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// A chart of one or more series. With `log_x` the x axis is base 2, which
/// suits benchmarking depths.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_x: bool) -> String {
    let tx = |x: f64| if log_x { x.max(f64::MIN_POSITIVE).log2() } else { x };
    let all_x: Vec<f64> = series.iter().flat_map(|s| s.xs.iter().map(|&x| tx(x))).filter(|x| x.is_finite()).collect();
    let all_y: Vec<f64> = series
        .iter()
        .flat_map(|s| {
            s.ys.iter().enumerate().flat_map(move |(i, &y)| {
                let e = s.errors.as_ref().map_or(0.0, |e| e[i]);
                [y - e, y + e]
            })
        })
        .filter(|y| y.is_finite())
        .collect();
    let (mut x0, mut x1) = bounds(&all_x);
    let (mut y0, mut y1) = bounds(&all_y);
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    let (l, r, t, b) = MARGIN;
    let px = |x: f64| l + (tx(x) - x0) / (x1 - x0) * (W - l - r);
    let py = |y: f64| H - b - (y - y0) / (y1 - y0) * (H - t - b);
    let mut out = String::new();
    header(&mut out, W, H, title);
    let _ = write!(out, r##"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="#444"/>"##, W - l - r, H - t - b);
    for v in nice_ticks(y0, y1, 6) {
        let y = py(v);
        let _ = write!(out, r##"<line x1="{l}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, W - r);
        let _ = write!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 6.0, y + 4.0, fmt_tick(v));
    }
    for v in nice_ticks(x0, x1, 7) {
        let value = if log_x { 2f64.powf(v) } else { v };
        if log_x && v.fract().abs() > 1e-9 {
            continue;
        }
        let x = px(value);
        let _ = write!(out, r##"<line x1="{x:.2}" y1="{t}" x2="{x:.2}" y2="{}" stroke="#ddd"/>"##, H - b);
        let _ = write!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, H - b + 16.0, fmt_tick(value));
    }
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, l + (W - l - r) / 2.0, H - 12.0, escape(x_label));
    let _ = write!(
        out,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        t + (H - t - b) / 2.0,
        escape(y_label)
    );
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        match s.style {
            Style::Line => {
                let pts: Vec<String> = s
                    .xs
                    .iter()
                    .zip(&s.ys)
                    .filter(|(x, y)| tx(**x).is_finite() && y.is_finite())
                    .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
                    .collect();
                let _ = write!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
            }
            Style::Points => {
                for (i, (&x, &y)) in s.xs.iter().zip(&s.ys).enumerate() {
                    if !(tx(x).is_finite() && y.is_finite()) {
                        continue;
                    }
                    if let Some(e) = s.errors.as_ref().map(|e| e[i]).filter(|e| *e > 0.0) {
                        let _ = write!(
                            out,
                            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="{color}"/>"#,
                            px(x),
                            py(y - e),
                            py(y + e)
                        );
                    }
                    let _ = write!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(x), py(y));
                }
            }
        }
        let ly = t + 14.0 + 16.0 * k as f64;
        let _ = write!(out, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, W - r - 150.0, ly - 9.0);
        let _ = write!(out, r#"<text x="{}" y="{ly}">{}</text>"#, W - r - 135.0, escape(&s.name));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn hue_color(value: f64) -> String {
    // white to dark blue
    let v = value.clamp(0.0, 1.0);
    let c = |a: f64, b: f64| (a + (b - a) * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(255.0, 8.0), c(255.0, 48.0), c(255.0, 107.0))
}

/// Heat map of `values[row][col]` in `[0, 1]`.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let (l, r, t, b) = MARGIN;
    let mut out = String::new();
    header(&mut out, W, H, title);
    let cw = (W - l - r) / xs.len().max(1) as f64;
    let ch = (H - t - b) / ys.len().max(1) as f64;
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let _ = write!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                l + j as f64 * cw,
                H - b - (i + 1) as f64 * ch,
                cw + 0.3,
                ch + 0.3,
                hue_color(*v)
            );
        }
    }
    let ends = |v: &[f64]| (v.first().copied().unwrap_or(0.0), v.last().copied().unwrap_or(0.0));
    let (xa, xb) = ends(xs);
    let (ya, yb) = ends(ys);
    let _ = write!(out, r#"<text x="{l}" y="{}">{}</text>"#, H - b + 16.0, fmt_tick(xa));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, W - r, H - b + 16.0, fmt_tick(xb));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, l - 6.0, H - b, fmt_tick(ya));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, l - 6.0, t + 10.0, fmt_tick(yb));
    let _ = write!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, l + (W - l - r) / 2.0, H - 12.0, escape(x_label));
    let _ = write!(
        out,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        t + (H - t - b) / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

/// Colour for a complex phase: hue follows the argument around the circle.
pub fn phase_color(phase: f64, shade: f64) -> String {
    let hue = (phase + PI).rem_euclid(2.0 * PI) / (2.0 * PI) * 360.0;
    format!("hsl({hue:.0},70%,{:.0}%)", 55.0 * shade)
}

/// Three-dimensional bar chart of `|rho_ij|` with bar colour encoding the
/// phase of each entry. `ideal` is drawn as a dashed wireframe.
pub fn cityscape(title: &str, rho: &DensityMatrix, ideal: Option<&DensityMatrix>) -> String {
    let m = rho.matrix();
    let n = m.nrows();
    let (width, height) = (620.0, 480.0);
    let cell = 44.0;
    let (cx, cy) = (width / 2.0, 150.0);
    let scale = 220.0;
    let (c30, s30) = ((PI / 6.0).cos(), (PI / 6.0).sin());
    let iso = |i: f64, j: f64, z: f64| (cx + (j - i) * cell * c30, cy + (i + j) * cell * s30 - z * scale);
    let poly = |pts: &[(f64, f64)]| pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    header(&mut out, width, height, title);
    // floor grid
    for k in 0..=n {
        let k = k as f64;
        let (a, b) = (iso(k, 0.0, 0.0), iso(k, n as f64, 0.0));
        let _ = write!(out, r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#ccc"/>"##, a.0, a.1, b.0, b.1);
        let (a, b) = (iso(0.0, k, 0.0), iso(n as f64, k, 0.0));
        let _ = write!(out, r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#ccc"/>"##, a.0, a.1, b.0, b.1);
    }
    let labels = ["00", "01", "10", "11"];
    for k in 0..n.min(4) {
        let p = iso(k as f64 + 0.5, n as f64 + 0.4, 0.0);
        let _ = write!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, p.0, p.1 + 4.0, labels[k]);
        let p = iso(n as f64 + 0.4, k as f64 + 0.5, 0.0);
        let _ = write!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, p.0, p.1 + 4.0, labels[k]);
    }
    let inset = 0.15;
    let mut order: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    order.sort_by_key(|&(i, j)| i + j);
    for &(i, j) in &order {
        let z = m[(i, j)].norm();
        let phase = m[(i, j)].arg();
        let (i0, j0, i1, j1) = (i as f64 + inset, j as f64 + inset, i as f64 + 1.0 - inset, j as f64 + 1.0 - inset);
        let top = [iso(i0, j0, z), iso(i0, j1, z), iso(i1, j1, z), iso(i1, j0, z)];
        let left = [iso(i1, j0, z), iso(i1, j1, z), iso(i1, j1, 0.0), iso(i1, j0, 0.0)];
        let right = [iso(i0, j1, z), iso(i1, j1, z), iso(i1, j1, 0.0), iso(i0, j1, 0.0)];
        let _ = write!(out, r##"<polygon points="{}" fill="{}" stroke="#333" stroke-width="0.5"/>"##, poly(&left), phase_color(phase, 0.75));
        let _ = write!(out, r##"<polygon points="{}" fill="{}" stroke="#333" stroke-width="0.5"/>"##, poly(&right), phase_color(phase, 0.9));
        let _ = write!(out, r##"<polygon points="{}" fill="{}" stroke="#333" stroke-width="0.5"/>"##, poly(&top), phase_color(phase, 1.2));
    }
    if let Some(ideal) = ideal {
        let mi = ideal.matrix();
        for &(i, j) in &order {
            let z = mi[(i, j)].norm();
            if z < 1e-12 {
                continue;
            }
            let (i0, j0, i1, j1) = (i as f64 + inset, j as f64 + inset, i as f64 + 1.0 - inset, j as f64 + 1.0 - inset);
            let top = [iso(i0, j0, z), iso(i0, j1, z), iso(i1, j1, z), iso(i1, j0, z)];
            let _ = write!(out, r##"<polygon points="{}" fill="none" stroke="#000" stroke-dasharray="4 3"/>"##, poly(&top));
            for (a, b) in [(i0, j1), (i1, j1), (i1, j0)] {
                let (p, q) = (iso(a, b, z), iso(a, b, 0.0));
                let _ = write!(
                    out,
                    r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000" stroke-dasharray="4 3"/>"##,
                    p.0, p.1, q.0, q.1
                );
            }
        }
    }
    // phase legend
    for k in 0..8 {
        let phase = -PI + PI * k as f64 / 4.0;
        let x = 40.0 + 22.0 * k as f64;
        let _ = write!(out, r#"<rect x="{x}" y="{}" width="20" height="12" fill="{}"/>"#, height - 40.0, phase_color(phase, 1.0));
    }
    let _ = write!(out, r#"<text x="40" y="{}">phase -pi ... +3pi/4</text>"#, height - 46.0);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_well_formed() {
        let s = line_plot("t", "x", "y", &[Series::points("a", vec![1.0, 2.0, 4.0], vec![0.9, 0.8, 0.7], None)], true);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        let c = cityscape("rho", &DensityMatrix::bell_phi_plus(), Some(&DensityMatrix::bell_phi_plus()));
        assert_eq!(c.matches("<polygon").count(), 16 * 3 + 4);
    }
}
