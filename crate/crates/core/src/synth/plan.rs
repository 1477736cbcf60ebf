use serde::Serialize;

use crate::error::{Error, Result};

/// Heterodyne RF/LO/IF triple and the two interferers it is exposed to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyPlan {
    pub f_rf: f64,
    pub f_lo: f64,
    pub f_if: f64,
    /// Image frequency, `2 f_lo - f_rf`.
    pub f_im: f64,
    /// Interferer mixed down by the second LO harmonic, `2 f_lo + f_if`.
    pub f_sh: f64,
}

pub fn frequency_plan(f_rf: f64, f_lo: f64) -> Result<FrequencyPlan> {
    for (name, v) in [("f_rf", f_rf), ("f_lo", f_lo)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    if f_rf == f_lo {
        return Err(Error::DegeneratePlan(f_rf));
    }
    let f_if = (f_rf - f_lo).abs();
    let f_im = if f_rf < f_lo {
        f_rf + 2.0 * f_if
    } else {
        f_rf - 2.0 * f_if
    };
    if f_im <= 0.0 {
        return Err(Error::invalid(format!(
            "image frequency {f_im} Hz is not positive"
        )));
    }
    Ok(FrequencyPlan {
        f_rf,
        f_lo,
        f_if,
        f_im,
        f_sh: 2.0 * f_lo + f_if,
    })
}

/// Every interferer of the given plans, sorted ascending with exact
/// duplicates removed.
pub fn interferers(plans: &[FrequencyPlan]) -> Vec<f64> {
    let mut out: Vec<f64> = plans.iter().flat_map(|p| [p.f_im, p.f_sh]).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}
