//! Touchstone v1 two-port files, real/imaginary format.
//!
//! ```text
//! ! qbnf 0.1.0
//! ! <comments>
//! # GHz S RI R 50
//! <f_GHz> <S11 re> <S11 im> <S21 re> <S21 im> <S12 re> <S12 im> <S22 re> <S22 im>
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;

use super::{apply_depth_floor, sig10, write_file};
use crate::error::{Error, Result};
use crate::net2p::SParameterPoint;

/// A parsed two-port file.
#[derive(Debug, Clone, PartialEq)]
pub struct Touchstone {
    pub z_ref: f64,
    pub points: Vec<SParameterPoint>,
    /// Comment lines without the leading `!`.
    pub comments: Vec<String>,
}

fn check_sweep(points: &[SParameterPoint]) -> Result<f64> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("cannot write an empty sweep"))?;
    if points.iter().any(|p| p.z_ref != first.z_ref) {
        return Err(Error::invalid("sweep mixes reference impedances"));
    }
    if points.windows(2).any(|w| w[1].frequency <= w[0].frequency) {
        return Err(Error::invalid(
            "sweep frequencies must be strictly increasing",
        ));
    }
    Ok(first.z_ref)
}

/// Renders the file. `timestamp` adds a generation-time comment; data rows
/// never depend on it.
pub fn touchstone_string(
    points: &[SParameterPoint],
    comments: &[String],
    timestamp: bool,
) -> Result<String> {
    let z_ref = check_sweep(points)?;
    let mut out = format!("! qbnf {}\n", env!("CARGO_PKG_VERSION"));
    for c in comments {
        for line in c.lines() {
            out.push_str(&format!("! {line}\n"));
        }
    }
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        out.push_str(&format!("! generated-unix-time: {secs}\n"));
    }
    out.push_str(&format!("# GHz S RI R {z_ref}\n"));
    for p in points {
        let p = apply_depth_floor(p);
        let row: Vec<String> = std::iter::once(p.frequency / 1e9)
            .chain(
                [p.s11, p.s21, p.s12, p.s22]
                    .iter()
                    .flat_map(|s| [s.re, s.im]),
            )
            .map(sig10)
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_touchstone(
    points: &[SParameterPoint],
    path: impl AsRef<Path>,
    comments: &[String],
    timestamp: bool,
) -> Result<()> {
    let text = touchstone_string(points, comments, timestamp)?;
    write_file(path.as_ref(), text.as_bytes())
}

pub fn read_touchstone(path: impl AsRef<Path>) -> Result<Touchstone> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_touchstone(&text, path)
}

fn frequency_scale(unit: &str) -> Option<f64> {
    Some(match unit.to_ascii_uppercase().as_str() {
        "HZ" => 1.0,
        "KHZ" => 1e3,
        "MHZ" => 1e6,
        "GHZ" => 1e9,
        _ => return None,
    })
}

pub fn parse_touchstone(text: &str, path: impl AsRef<Path>) -> Result<Touchstone> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let err = |line: usize, message: String| Error::Parse {
        path: path.clone(),
        line,
        message,
    };
    let mut comments = Vec::new();
    let mut options: Option<(f64, f64)> = None;
    let mut points: Vec<SParameterPoint> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let (data, comment) = match raw.find('!') {
            Some(k) => (&raw[..k], Some(raw[k + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            comments.push(c.to_string());
        }
        let data = data.trim();
        if data.is_empty() {
            continue;
        }
        if let Some(opts) = data.strip_prefix('#') {
            if options.is_some() {
                return Err(err(n, "second option line".into()));
            }
            let tokens: Vec<&str> = opts.split_whitespace().collect();
            let [unit, param, format, r, z] = tokens[..] else {
                return Err(err(
                    n,
                    format!("expected `# <unit> S RI R <z>`, got `{data}`"),
                ));
            };
            let scale =
                frequency_scale(unit).ok_or_else(|| err(n, format!("unknown unit {unit}")))?;
            if !param.eq_ignore_ascii_case("S")
                || !format.eq_ignore_ascii_case("RI")
                || !r.eq_ignore_ascii_case("R")
            {
                return Err(err(
                    n,
                    format!("only S-parameters in RI format are supported, got `{data}`"),
                ));
            }
            let z_ref: f64 = z
                .parse()
                .map_err(|_| err(n, format!("bad reference impedance {z}")))?;
            options = Some((scale, z_ref));
            continue;
        }
        let (scale, z_ref) = options.ok_or_else(|| err(n, "data before option line".into()))?;
        let values = data
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| err(n, e.to_string()))?;
        if values.len() != 9 {
            return Err(err(n, format!("expected 9 columns, got {}", values.len())));
        }
        let c = |k: usize| Complex64::new(values[k], values[k + 1]);
        let frequency = values[0] * scale;
        if let Some(last) = points.last() {
            if frequency <= last.frequency {
                return Err(err(n, "frequencies must be strictly increasing".into()));
            }
        }
        points.push(SParameterPoint {
            frequency,
            s11: c(1),
            s21: c(3),
            s12: c(5),
            s22: c(7),
            z_ref,
        });
    }
    let (_, z_ref) = options.ok_or_else(|| err(0, "missing option line".into()))?;
    if points.is_empty() {
        return Err(err(0, "no data rows".into()));
    }
    Ok(Touchstone {
        z_ref,
        points,
        comments,
    })
}
