//! Deterministic file emission: CSV with 17-significant-digit floats
//! (round-trip exact for f64), pretty JSON summaries with the resolved
//! config embedded, and self-contained SVG fringe plots.

use crate::error::CliError;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// 17 significant digits in scientific notation: parses back to the same
/// f64 bit pattern, and identical runs produce identical bytes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(dir: &str) -> Result<Self, CliError> {
        let root = PathBuf::from(dir);
        fs::create_dir_all(&root)?;
        Ok(Self { root })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, text)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::config(format!("serialization failed: {e}")))?;
        text.push('\n');
        self.write_text(name, &text)
    }
}

pub fn csv_from_rows(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(rows.len() * 64 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Self-contained fringe plot: sampled P_R points plus the fitted
/// a·sin²(ωT/2) + c curve when available.
pub fn fringe_svg(
    samples: &[(f64, f64)],
    fit: Option<(f64, f64, f64)>,
    title: &str,
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const ML: f64 = 62.0;
    const MR: f64 = 18.0;
    const MT: f64 = 38.0;
    const MB: f64 = 52.0;
    let pw = W - ML - MR;
    let ph = H - MT - MB;

    let t_min = samples.first().map(|s| s.0).unwrap_or(0.0);
    let t_max = samples.last().map(|s| s.0).unwrap_or(1.0).max(t_min + 1e-12);
    let x = |t: f64| ML + (t - t_min) / (t_max - t_min) * pw;
    let y = |p: f64| MT + (1.0 - p.clamp(0.0, 1.0)) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        ML + pw / 2.0,
        title
    ));

    // axes with 5 ticks each
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let tx = t_min + f * (t_max - t_min);
        let px = x(tx);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>\n",
            MT,
            MT + ph
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{tx:.2}</text>\n",
            MT + ph + 18.0
        ));
        let py = y(f);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ccc\"/>\n",
            ML,
            ML + pw
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{f:.2}</text>\n",
            ML - 8.0,
            py + 4.0
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">T</text>\n",
        ML + pw / 2.0,
        H - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">P_R</text>\n",
        MT + ph / 2.0,
        MT + ph / 2.0
    ));

    if let Some((omega, a, c)) = fit {
        let mut path = String::from("M");
        for k in 0..=256 {
            let t = t_min + (t_max - t_min) * k as f64 / 256.0;
            let p = a * (omega * t / 2.0).sin().powi(2) + c;
            path.push_str(&format!(" {:.2} {:.2}", x(t), y(p)));
        }
        svg.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"#e08020\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for &(t, p) in samples {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#3070b0\"/>\n",
            x(t),
            y(p)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn file_name(prefix: &str, r: usize, l: usize, ext: &str) -> String {
    format!("{prefix}_R{r}_L{l}.{ext}")
}

pub fn read_config_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        fs::read_to_string(Path::new(path))
            .map_err(|e| CliError::config(format!("cannot read config {path}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_roundtrips() {
        for &x in &[
            0.0,
            1.0,
            -0.25,
            std::f64::consts::PI,
            1.2345678901234567e-300,
            6.02214076e23,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn svg_is_self_contained() {
        let samples: Vec<(f64, f64)> = (0..32)
            .map(|k| {
                let t = 0.1 * k as f64;
                (t, (t).sin().powi(2))
            })
            .collect();
        let svg = fringe_svg(&samples, Some((2.0, 1.0, 0.0)), "R=2 L=2");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("href"));
        assert!(svg.contains("circle"));
        assert!(svg.contains("path"));
    }
}
