//! Job configuration and result files.

pub mod config;
pub mod tabular;
pub mod touchstone;
pub mod units;

pub use config::{load_config, load_config_for, JobConfig, Mode, Outputs};
pub use tabular::{
    dispersion_csv, notch_csv, plan_csv, sweep_csv, write_dispersion_csv, write_notch_csv,
    write_plan_csv, write_sweep_csv,
};
pub use touchstone::{
    parse_touchstone, read_touchstone, touchstone_string, write_touchstone, Touchstone,
};

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filter::depth_floor_magnitude;
use crate::net2p::SParameterPoint;

/// Ten significant digits in scientific notation with a two-digit signed
/// exponent; zero (of either sign) is written as `0`.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn floor_complex(s: Complex64, floor: f64) -> Complex64 {
    let m = s.norm();
    if m >= floor {
        s
    } else if m == 0.0 || !m.is_finite() {
        Complex64::new(floor, 0.0)
    } else {
        s * (floor / m)
    }
}

/// Raises |S21| and |S12| to the reporting floor, keeping their phase.
pub fn apply_depth_floor(p: &SParameterPoint) -> SParameterPoint {
    let floor = depth_floor_magnitude();
    SParameterPoint {
        s21: floor_complex(p.s21, floor),
        s12: floor_complex(p.s12, floor),
        ..*p
    }
}

pub(crate) fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
