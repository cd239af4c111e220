//! Self-contained SVG line and scatter plots.

use crate::error::Result;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    /// Draw a circle per point; plain lines otherwise.
    pub markers: bool,
}

impl Series {
    pub fn markers(label: &str, points: Vec<[f64; 2]>) -> Self {
        Series { label: label.into(), points, markers: true }
    }

    pub fn line(label: &str, points: Vec<[f64; 2]>) -> Self {
        Series { label: label.into(), points, markers: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

impl Sweep {
    pub fn new(name: &str, title: &str, x_label: &str, y_label: &str, log_x: bool, series: Vec<Series>) -> Self {
        Sweep {
            name: name.into(),
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x,
            series,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.series.iter().all(|s| s.points.iter().all(|p| !p[0].is_finite() || !p[1].is_finite()))
    }
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// SVG text for one sweep; every point of a marker series becomes a
/// `<circle class="marker">`.
pub fn render_svg(sweep: &Sweep) -> String {
    let tx = |x: f64| if sweep.log_x { x.max(f64::MIN_POSITIVE).log10() } else { x };
    let finite = |p: &&[f64; 2]| p[0].is_finite() && p[1].is_finite() && (!sweep.log_x || p[0] > 0.0);
    let pts = || sweep.series.iter().flat_map(|s| s.points.iter().filter(finite));
    let (x0, x1) = range(pts().map(|p| tx(p[0])));
    let (y0, y1) = range(pts().map(|p| p[1]));
    let sx = |x: f64| PAD + (tx(x) - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="16">{}</text>"#, W / 2.0, escape(&sweep.title));
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{0:.1}" x2="{1:.1}" y2="{0:.1}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{0:.1}" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let label = if sweep.log_x { 10f64.powf(xv) } else { xv };
        let px = PAD + f * (W - 2.0 * PAD);
        let _ = writeln!(s, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle" font-size="11">{label:.3}</text>"#, H - PAD + 16.0);
        let yv = y0 + f * (y1 - y0);
        let py = H - PAD - f * (H - 2.0 * PAD);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{py:.1}" text-anchor="end" font-size="11">{yv:.3}</text>"#, PAD - 6.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#, W / 2.0, H - 16.0, escape(&sweep.x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {0:.1})">{1}</text>"#,
        H / 2.0,
        escape(&sweep.y_label)
    );
    for (k, series) in sweep.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = series.points.iter().filter(finite).map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
        let dash = if series.markers { "" } else { r#" stroke-dasharray="6 4""# };
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}"{dash} points="{}"/>"#, coords.join(" "));
        if series.markers {
            for p in series.points.iter().filter(finite) {
                let _ = writeln!(s, r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, sx(p[0]), sy(p[1]));
            }
        }
        let ly = PAD + 16.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" font-size="11" fill="{color}">{}</text>"#, W - PAD - 120.0, escape(&series.label));
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `plots/<name>.svg` per nonempty sweep and `plots/index.json`
/// listing the files and the skipped sweeps.
pub fn emit_plots(sweeps: &[Sweep], output_dir: &Path) -> Result<()> {
    let dir = output_dir.join("plots");
    std::fs::create_dir_all(&dir)?;
    let mut plots = Vec::new();
    let mut absent = Vec::new();
    for sweep in sweeps {
        if sweep.is_empty() {
            absent.push(json!({"name": sweep.name, "reason": "empty sweep"}));
            continue;
        }
        let file = format!("{}.svg", sweep.name);
        std::fs::write(dir.join(&file), render_svg(sweep))?;
        let markers: usize = sweep.series.iter().filter(|s| s.markers).map(|s| s.points.len()).sum();
        plots.push(json!({"name": sweep.name, "file": file, "markers": markers}));
    }
    if sweeps.is_empty() {
        absent.push(json!({"name": null, "reason": "no sweep in this result"}));
    }
    let index = json!({"plots": plots, "absent": absent});
    std::fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marker_count_matches_points() {
        let pts: Vec<[f64; 2]> = (0..7).map(|i| [i as f64, (i * i) as f64]).collect();
        let sweep = Sweep::new("t", "t", "x", "y", false, vec![Series::markers("a", pts), Series::line("b", vec![[0.0, 1.0], [6.0, 2.0]])]);
        let svg = render_svg(&sweep);
        assert_eq!(svg.matches("class=\"marker\"").count(), 7);
        assert_eq!(svg, render_svg(&sweep));
    }

    #[test]
    fn empty_sweep_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let sweep = Sweep::new("none", "none", "x", "y", false, vec![Series::markers("a", Vec::new())]);
        emit_plots(&[sweep], dir.path()).unwrap();
        assert!(!dir.path().join("plots/none.svg").exists());
        let index = std::fs::read_to_string(dir.path().join("plots/index.json")).unwrap();
        assert!(index.contains("empty sweep"));
    }
}
