use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

/// `v` in fixed notation with 15 significant digits.
pub fn sig15(v: f64) -> String {
    if !v.is_finite() {
        return "nan".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    // take the exponent after rounding so 0.99999999999999999 counts as 1
    let sci = format!("{v:.14e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (14 - exp).clamp(0, 330) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                let r: f64 = format!("{f:.14e}").parse().unwrap_or(f);
                if let Some(num) = serde_json::Number::from_f64(r) {
                    *n = num;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 15 significant digits.
pub fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub struct SvgCurve {
    pub points: Vec<Complex64>,
    pub closed: bool,
    pub label: String,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// One `path` per curve in a square view box of half-width `half`; y is
/// flipped so the picture has the usual orientation.
pub fn svg(curves: &[SvgCurve], half: f64, meta: &str) -> String {
    let mut s = String::new();
    let size = 2.0 * half;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="640" height="640">"#,
        -half, -half, size, size
    );
    let _ = writeln!(s, "<!-- {} -->", meta.replace("--", "- -"));
    let stroke = size / 400.0;
    for (k, c) in curves.iter().enumerate() {
        let mut d = String::new();
        for (j, p) in c.points.iter().filter(|p| p.re.is_finite() && p.im.is_finite()).enumerate() {
            let _ = write!(d, "{}{:.6} {:.6} ", if j == 0 { "M" } else { "L" }, p.re, -p.im);
        }
        if c.closed {
            d.push('Z');
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="{:.6}"><title>{}</title></path>"#,
            d.trim_end(),
            PALETTE[k % PALETTE.len()],
            stroke,
            c.label
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes to `out` (joined to `dir` when relative) or to stdout.
pub fn emit(text: &str, out: Option<&Path>, dir: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            let path: PathBuf = match dir {
                Some(d) if p.is_relative() => d.join(p),
                _ => p.to_path_buf(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
