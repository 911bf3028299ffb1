//! CSV and SVG report files.

use std::fmt::Write as _;
use std::path::Path;

use toepkern::{BoundaryGrid, Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Schema { pointer: String::new(), msg: format!("cannot write {}: {e}", path.display()) }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_err(path, e))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `theta,re,im,abs` per grid point.
pub fn boundary_csv(path: &Path, g: &BoundaryGrid) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["theta", "re", "im", "abs"]).map_err(|e| io_err(path, e))?;
    let n = g.n();
    for (k, s) in g.samples().iter().enumerate() {
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        w.write_record([num(theta), num(s.re), num(s.im), num(s.norm())]).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// `index,sigma`, descending.
pub fn singular_csv(path: &Path, sv: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["index", "sigma"]).map_err(|e| io_err(path, e))?;
    for (i, s) in sv.iter().enumerate() {
        w.write_record([i.to_string(), num(*s)]).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn frame(title: &str, y_label: &str, lo: f64, hi: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN / 2.0,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN / 2.0
    );
    let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, MARGIN / 2.0 + 4.0, escape(&format!("{hi:.3e}")));
    let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, HEIGHT - MARGIN, escape(&format!("{lo:.3e}")));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(y_label));
    s
}

fn polyline(points: &[(f64, f64)], lo: f64, hi: f64, x_max: f64) -> String {
    let span = if hi > lo { hi - lo } else { 1.0 };
    let plot_w = WIDTH - MARGIN * 1.5;
    let plot_h = HEIGHT - MARGIN * 1.5;
    let pts: Vec<String> = points
        .iter()
        .map(|&(x, y)| {
            let px = MARGIN + plot_w * x / x_max.max(f64::MIN_POSITIVE);
            let py = HEIGHT - MARGIN - plot_h * (y - lo) / span;
            format!("{px:.2},{py:.2}")
        })
        .collect();
    format!(r#"<polyline points="{}" stroke="steelblue" fill="none"/>"#, pts.join(" ")) + "\n"
}

/// Boundary modulus against `θ ∈ [0, 2π)`.
pub fn modulus_svg(path: &Path, g: &BoundaryGrid, title: &str) -> Result<()> {
    let n = g.n();
    let points: Vec<(f64, f64)> = g
        .samples()
        .iter()
        .enumerate()
        .map(|(k, s)| (std::f64::consts::TAU * k as f64 / n as f64, s.norm()))
        .collect();
    let lo = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
    let hi = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut s = frame(title, "theta in [0, 2pi)", lo, hi);
    s += &polyline(&points, lo, hi, std::f64::consts::TAU);
    s += "</svg>\n";
    std::fs::write(path, s).map_err(|e| io_err(path, e))
}

/// `log10 σ_i` against `i`, with the kernel threshold drawn dashed.
pub fn singular_svg(path: &Path, sv: &[f64], threshold: f64, title: &str) -> Result<()> {
    let floor = 1e-18;
    let logs: Vec<(f64, f64)> = sv.iter().enumerate().map(|(i, s)| (i as f64, s.max(floor).log10())).collect();
    let lo = logs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(threshold.max(floor).log10());
    let hi = logs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).max(lo + 1.0);
    let x_max = (sv.len().max(2) - 1) as f64;
    let mut s = frame(title, "index (log10 sigma on the vertical axis)", lo, hi);
    s += &polyline(&logs, lo, hi, x_max);
    let t = threshold.max(floor).log10();
    let py = HEIGHT - MARGIN - (HEIGHT - MARGIN * 1.5) * (t - lo) / (hi - lo);
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="firebrick" stroke-dasharray="4 3"/>"#,
        WIDTH - MARGIN / 2.0
    );
    s += "</svg>\n";
    std::fs::write(path, s).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn csv_has_header_and_lf() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.csv");
        let g = BoundaryGrid::constant(256, Complex64::new(2.0, 0.0)).unwrap();
        boundary_csv(&p, &g).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("theta,re,im,abs\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 257);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.svg");
        singular_svg(&p, &[3.0, 1.0, 1e-15], 1e-8, "G <test>").unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        assert!(text.contains("G &lt;test&gt;"));
    }
}
