use std::fmt::Write as _;

use super::sweep::LifespanRecord;
use crate::error::{LabError, Result};
use crate::numerics::fit_power_law;

const W: f64 = 640.0;
const H: f64 = 440.0;
const PAD: f64 = 60.0;

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
    log: bool,
}

impl Axes {
    fn map(&self, v: f64, r: (f64, f64), lo: f64, span: f64) -> f64 {
        let (a, b, v) = if self.log { (r.0.ln(), r.1.ln(), v.ln()) } else { (r.0, r.1, v) };
        lo + span * (v - a) / (b - a)
    }

    fn px(&self, x: f64) -> f64 {
        self.map(x, self.x, PAD, W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - self.map(y, self.y, PAD, H - 2.0 * PAD)
    }
}

fn padded(lo: f64, hi: f64, log: bool) -> (f64, f64) {
    if log {
        (lo / 1.2, hi * 1.2)
    } else {
        let d = (hi - lo).max(1e-3 * hi.abs().max(1.0));
        (lo - 0.1 * d, hi + 0.1 * d)
    }
}

fn frame(out: &mut String, title: &str, xlabel: &str, ylabel: &str, ax: &Axes) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(out, r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{title}</text>"#, W / 2.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 15.0);
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (k, v) in [ax.x.0, ax.x.1].iter().enumerate() {
        let anchor = if k == 0 { "start" } else { "end" };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="{anchor}">{v:.3}</text>"#,
            ax.px(*v),
            H - PAD + 16.0
        );
    }
    for v in [ax.y.0, ax.y.1] {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{v:.3}</text>"#, PAD - 4.0, ax.py(v) + 4.0);
    }
}

fn polyline(out: &mut String, ax: &Axes, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", ax.px(x), ax.py(y)))
        .collect();
    let _ = writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, coords.join(" "));
}

fn markers(out: &mut String, ax: &Axes, pts: &[(f64, f64)]) {
    for &(x, y) in pts {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#, ax.px(x), ax.py(y));
    }
}

fn finished(records: &[LifespanRecord]) -> Result<Vec<(f64, f64, f64)>> {
    let rows: Vec<(f64, f64, f64)> = records
        .iter()
        .filter_map(|r| Some((r.eps, r.t_num?, r.scaled?)))
        .collect();
    if rows.is_empty() {
        return Err(LabError::InvalidParameter("no finished rows to plot".into()));
    }
    Ok(rows)
}

/// Log-log `T_num` against `ε` with its least-squares line and the bound
/// curve `bound_const · ε^{-2(p-1)/(3-p)}`.
pub fn loglog_svg(records: &[LifespanRecord], p: f64) -> Result<String> {
    let rows = finished(records)?;
    let c = records.iter().map(|r| r.bound_const).find(|c| c.is_finite());
    let expo = -2.0 * (p - 1.0) / (3.0 - p);
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.0, r.1)).unzip();
    let (xlo, xhi) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(0.0, f64::max));
    let mut ylo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let mut yhi = ys.iter().copied().fold(0.0, f64::max);
    if let Some(c) = c {
        ylo = ylo.min(c * xhi.powf(expo));
        yhi = yhi.max(c * xlo.powf(expo));
    }
    let ax = Axes {
        x: padded(xlo, xhi, true),
        y: padded(ylo, yhi, true),
        log: true,
    };
    let mut out = String::new();
    let title = match fit_power_law(&xs, &ys) {
        Some(f) => format!("T_num vs eps (slope {:.3}, expected {expo:.3})", f.slope),
        None => "T_num vs eps".to_string(),
    };
    frame(&mut out, &title, "eps (log)", "T_num (log)", &ax);
    if let Some(c) = c {
        let curve: Vec<(f64, f64)> = (0..=40)
            .map(|k| {
                let x = ax.x.0 * (ax.x.1 / ax.x.0).powf(k as f64 / 40.0);
                (x, c * x.powf(expo))
            })
            .filter(|&(_, y)| y >= ax.y.0 && y <= ax.y.1)
            .collect();
        polyline(&mut out, &ax, &curve, r#"stroke="firebrick" stroke-dasharray="6 4""#);
    }
    if let Some(f) = fit_power_law(&xs, &ys) {
        let line: Vec<(f64, f64)> = [xlo, xhi].iter().map(|&x| (x, f.intercept.exp() * x.powf(f.slope))).collect();
        polyline(&mut out, &ax, &line, r#"stroke="steelblue""#);
    }
    markers(&mut out, &ax, &rows.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    Ok(out)
}

/// `scaled` against `ε` with the horizontal line at `bound_const`.
pub fn scaled_svg(records: &[LifespanRecord]) -> Result<String> {
    let rows = finished(records)?;
    let c = records.iter().map(|r| r.bound_const).find(|c| c.is_finite());
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut ys: Vec<f64> = rows.iter().map(|r| r.2).collect();
    ys.extend(c);
    let ax = Axes {
        x: padded(xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(0.0, f64::max), false),
        y: padded(ys.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(0.0, f64::max), false),
        log: false,
    };
    let mut out = String::new();
    frame(&mut out, "scaled life span vs eps", "eps", "scaled", &ax);
    if let Some(c) = c {
        polyline(&mut out, &ax, &[(ax.x.0, c), (ax.x.1, c)], r#"stroke="firebrick" stroke-dasharray="6 4""#);
    }
    markers(&mut out, &ax, &rows.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sweep::CSV_SCHEMA_VERSION;

    fn row(eps: f64, t: f64) -> LifespanRecord {
        LifespanRecord {
            eps,
            t_num: Some(t),
            scaled: Some(eps * eps * t),
            bound_const: 0.25,
            ratio: Some(eps * eps * t / 0.25),
            termination: "blowup_amplitude".into(),
            half_width: Some(40.0),
            n_points: Some(2048),
            dt_floor: Some(1e-9),
            k_b: Some(50.0),
            b_over_a: 0.9,
            schema_version: CSV_SCHEMA_VERSION,
        }
    }

    #[test]
    fn renders_both_plots() {
        let rows = vec![row(0.5, 2.7), row(0.3, 5.6), row(0.2, 10.5)];
        let a = loglog_svg(&rows, 2.0).unwrap();
        let b = scaled_svg(&rows).unwrap();
        for s in [&a, &b] {
            assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
            assert_eq!(s.matches("<circle").count(), 3);
        }
        assert!(a.contains("slope"));
        assert!(loglog_svg(&[], 2.0).is_err());
    }
}
