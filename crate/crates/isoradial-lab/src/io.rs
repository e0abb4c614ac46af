//! Artifact formats and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use isoradial::stationary::CurveSolution;

use crate::error::LabError;

/// First line of every SVG; the only line allowed to differ between runs.
pub const SVG_BANNER: &str = concat!("<!-- isoradial-lab ", env!("CARGO_PKG_VERSION"), " -->");

/// 17 significant digits, `.` separator.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// JSON number, or `null` for non-finite values.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for r in std::iter::once(&self.header).chain(&self.rows) {
            w.write_record(r).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("records are UTF-8")
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), LabError> {
    let err = |e: std::io::Error| LabError::io(format!("cannot write {}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(err)?;
    let name = path.file_name().ok_or_else(|| LabError::io(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(err)?;
    f.write_all(bytes).map_err(err)?;
    f.sync_all().map_err(err)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        err(e)
    })
}

/// The curve `θ = ±f(r)` as polylines, with the centered ball of equal
/// measure and the symmetry axis.
pub fn curve_svg(curve: &CurveSolution, ball_radius: Option<f64>) -> String {
    let pts: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.r * s.f.cos(), s.r * s.f.sin())).collect();
    let mut extent = pts.iter().map(|(x, y)| x.abs().max(y.abs())).fold(0.0, f64::max);
    if let Some(r) = ball_radius {
        extent = extent.max(r);
    }
    if !(extent > 0.0 && extent.is_finite()) {
        extent = 1.0;
    }
    let size = 600.0;
    let scale = 0.45 * size / extent;
    let map = |(x, y): (f64, f64)| (0.5 * size + scale * x, 0.5 * size - scale * y);
    let poly = |sign: f64| {
        let mut s = String::new();
        for &(x, y) in &pts {
            let (px, py) = map((x, sign * y));
            if px.is_finite() && py.is_finite() {
                let _ = write!(s, "{px:.3},{py:.3} ");
            }
        }
        s.trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(SVG_BANNER);
    out.push('\n');
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<line x1="0" y1="{c}" x2="{size}" y2="{c}" stroke="gray" stroke-width="0.5"/>"#, c = 0.5 * size);
    if let Some(r) = ball_radius {
        let _ = writeln!(
            out,
            r#"<circle cx="{c}" cy="{c}" r="{:.3}" fill="none" stroke="green" stroke-dasharray="4 3"/>"#,
            scale * r,
            c = 0.5 * size
        );
    }
    for sign in [1.0, -1.0] {
        let _ = writeln!(out, r#"<polyline fill="none" stroke="black" stroke-width="1.2" points="{}"/>"#, poly(sign));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn csv_render() {
        let mut c = Csv::new(&["a", "b"]);
        c.push(vec!["1".into(), "2".into()]);
        c.push(vec!["x,y".into(), String::new()]);
        assert_eq!(c.render(), "a,b\n1,2\n\"x,y\",\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("isoradial-io-{}", std::process::id()));
        let p = dir.join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
