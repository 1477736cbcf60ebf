//! Quad-band synthesis.
//!
//! A notch at `w_i` needs `1 + Z(w_i) Y(w_i) = 0`. Each target is split
//! into branch samples `X(w_i) = s_i R` and `B(w_i) = s_i / R`, so that
//! `ZY = (j s_i R)(j s_i / R) = -1` whatever the sign `s_i` and scale `R`.
//! The two branches are then fitted independently, each with its internal
//! pole between the second and third targets.

mod fit;
mod plan;

pub use fit::{
    branch_reactance_fit, branch_susceptance_fit, reactance, susceptance, FitDiagnostics,
    ReactanceFit, SusceptanceFit, POLE_REL_TOL, POLE_SCAN_POINTS,
};
pub use plan::{frequency_plan, interferers, FrequencyPlan};

use serde::Serialize;

use crate::ecrlh::{immittances, ElementSet, SeriesConvention, UnitCell};
use crate::error::{Error, Result};
use crate::filter::locate_notches;

/// Largest `|1 + ZY|` accepted at a target.
pub const MAX_RESIDUAL: f64 = 1e-6;
/// Relative tolerance for matching located notches to targets.
pub const NOTCH_MATCH_TOL: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthesisSpec {
    /// Notch frequencies in hertz, strictly increasing.
    pub targets: [f64; 4],
    /// Impedance scale R in ohms.
    pub r_scale: f64,
    pub sign_pattern: [i8; 4],
}

impl SynthesisSpec {
    pub const DEFAULT_PATTERN: [i8; 4] = [-1, 1, -1, 1];

    pub fn new(targets: [f64; 4]) -> Result<Self> {
        let spec = SynthesisSpec {
            targets,
            r_scale: 50.0,
            sign_pattern: Self::DEFAULT_PATTERN,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_r_scale(mut self, r: f64) -> Result<Self> {
        self.r_scale = r;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sign_pattern(mut self, pattern: [i8; 4]) -> Result<Self> {
        self.sign_pattern = pattern;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::invalid("targets must be positive"));
        }
        if self.targets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("targets must be strictly increasing"));
        }
        if !(self.r_scale.is_finite() && self.r_scale > 0.0) {
            return Err(Error::invalid("r_scale must be positive"));
        }
        if self.sign_pattern.iter().any(|s| s.abs() != 1) {
            return Err(Error::invalid("sign_pattern entries must be -1 or +1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisDiagnostics {
    pub series: FitDiagnostics,
    pub shunt: FitDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub elements: ElementSet,
    /// `|1 + Z Y|` at each target.
    pub residuals: [f64; 4],
    /// Series-branch tank pole, hertz.
    pub pole_series: f64,
    /// Shunt-branch series-LC pole, hertz.
    pub pole_shunt: f64,
    pub diagnostics: SynthesisDiagnostics,
}

impl SynthesisResult {
    /// The synthesized elements as a lossless cell with values used as fitted.
    pub fn cell(&self) -> Result<UnitCell> {
        Ok(UnitCell::new(self.elements)?.with_convention(SeriesConvention::AsGiven))
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn residuals_of(cell: &UnitCell, targets: &[f64; 4]) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (r, &f) in out.iter_mut().zip(targets) {
        let (z, y) = immittances(cell, f)?;
        *r = (1.0 + z * y).norm();
    }
    Ok(out)
}

pub fn synthesize(spec: &SynthesisSpec) -> Result<SynthesisResult> {
    spec.validate()?;
    let t = spec.targets;
    let r = spec.r_scale;
    let sign = spec.sign_pattern.map(f64::from);
    let bracket = (t[1], t[2]);

    let x_samples = [0, 1, 2, 3].map(|i| (t[i], sign[i] * r));
    let b_samples = [0, 1, 2, 3].map(|i| (t[i], sign[i] / r));
    let series = branch_reactance_fit(&x_samples, bracket)?;
    let shunt = branch_susceptance_fit(&b_samples, bracket)?;

    let elements = ElementSet {
        l_r_c: series.l_a,
        c_l_c: series.c_b,
        l_r_d: series.l_t,
        c_l_d: series.c_t,
        c_r_c: shunt.c_a,
        l_l_c: shunt.l_b,
        l_l_d: shunt.l_s,
        c_r_d: shunt.c_s,
    };
    elements.validate()?;
    let cell = UnitCell::new(elements)?;
    let residuals = residuals_of(&cell, &t)?;
    let result = SynthesisResult {
        elements,
        residuals,
        pole_series: series.pole_hz,
        pole_shunt: shunt.pole_hz,
        diagnostics: SynthesisDiagnostics {
            series: series.diagnostics,
            shunt: shunt.diagnostics,
        },
    };
    if result.max_residual() > MAX_RESIDUAL {
        return Err(Error::ConvergenceFailure(format!(
            "max |1 + ZY| = {:e} at targets; diagnostics {:?}",
            result.max_residual(),
            result.diagnostics
        )));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-checks a synthesis result from scratch. Failures are reported, not
/// raised.
pub fn validate(result: &SynthesisResult, spec: &SynthesisSpec) -> ValidationReport {
    validate_elements(&result.elements, spec)
}

/// Same checks for an element set from elsewhere, e.g. a file.
pub fn validate_elements(elements: &ElementSet, spec: &SynthesisSpec) -> ValidationReport {
    let mut checks = Vec::new();

    let positivity = elements.validate();
    checks.push(Check {
        name: "positivity",
        passed: positivity.is_ok(),
        detail: match &positivity {
            Ok(()) => "all eight elements positive".into(),
            Err(e) => e.to_string(),
        },
    });

    // built directly so a faulty element set can still be evaluated
    let cell = UnitCell {
        elements: *elements,
        convention: SeriesConvention::AsGiven,
        q_factor: None,
        cell_length: UnitCell::DEFAULT_CELL_LENGTH,
    };

    let residuals = residuals_of(&cell, &spec.targets);
    checks.push(match residuals {
        Ok(r) => {
            let worst = r.iter().copied().fold(0.0, f64::max);
            Check {
                name: "residuals",
                passed: worst <= MAX_RESIDUAL,
                detail: format!("max |1 + ZY| = {worst:e} (limit {MAX_RESIDUAL:e})"),
            }
        }
        Err(e) => Check {
            name: "residuals",
            passed: false,
            detail: e.to_string(),
        },
    });

    let band = (0.5 * spec.targets[0], 1.2 * spec.targets[3]);
    checks.push(match locate_notches(&cell, band) {
        Ok(roots) => {
            let drift: Vec<f64> = if roots.len() == 4 {
                roots
                    .iter()
                    .zip(&spec.targets)
                    .map(|(r, t)| (r - t) / t)
                    .collect()
            } else {
                Vec::new()
            };
            let passed = roots.len() == 4 && drift.iter().all(|d| d.abs() <= NOTCH_MATCH_TOL);
            let detail = if roots.len() == 4 {
                let parts: Vec<String> = drift
                    .iter()
                    .map(|d| format!("{:+.4}%", 100.0 * d))
                    .collect();
                format!("notch drift vs targets: {}", parts.join(", "))
            } else {
                format!(
                    "found {} notches in {:e} .. {:e} Hz, expected 4",
                    roots.len(),
                    band.0,
                    band.1
                )
            };
            Check {
                name: "notch-match",
                passed,
                detail,
            }
        }
        Err(e) => Check {
            name: "notch-match",
            passed: false,
            detail: e.to_string(),
        },
    });

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER_TARGETS: [f64; 4] = [0.9e9, 1.3e9, 2.55e9, 3.35e9];

    #[test]
    fn synthesizes_lte_targets() {
        let spec = SynthesisSpec::new(PAPER_TARGETS).unwrap();
        let res = synthesize(&spec).unwrap();
        assert!(res.max_residual() < 1e-6);
        let roots = locate_notches(&res.cell().unwrap(), (0.5e9, 4.0e9)).unwrap();
        assert_eq!(roots.len(), 4);
        for (r, t) in roots.iter().zip(PAPER_TARGETS) {
            assert!(((r - t) / t).abs() < 0.005);
        }
        assert!(validate(&res, &spec).passed());
        assert!(res.pole_series > 1.3e9 && res.pole_series < 2.55e9);
    }

    #[test]
    fn synthesizes_generic_targets() {
        let spec = SynthesisSpec::new([1e9, 2e9, 3e9, 4e9]).unwrap();
        let res = synthesize(&spec).unwrap();
        assert!(res.elements.validate().is_ok());
        assert!(validate(&res, &spec).passed());
    }

    #[test]
    fn spec_validation() {
        assert!(SynthesisSpec::new([1e9, 1e9, 3e9, 4e9]).is_err());
        assert!(SynthesisSpec::new([1e9, 2e9, 3e9, 4e9])
            .unwrap()
            .with_sign_pattern([1, 0, 1, -1])
            .is_err());
        assert!(SynthesisSpec::new([1e9, 2e9, 3e9, 4e9])
            .unwrap()
            .with_r_scale(0.0)
            .is_err());
    }

    #[test]
    fn product_is_minus_one_at_targets() {
        let res = synthesize(&SynthesisSpec::new(PAPER_TARGETS).unwrap()).unwrap();
        let cell = res.cell().unwrap();
        for f in PAPER_TARGETS {
            let (z, y) = immittances(&cell, f).unwrap();
            assert!((z * y + 1.0).norm() < 1e-6);
        }
    }

    #[test]
    fn notches_do_not_depend_on_r() {
        let mut sets = Vec::new();
        for r in [25.0, 50.0, 100.0] {
            let spec = SynthesisSpec::new(PAPER_TARGETS)
                .unwrap()
                .with_r_scale(r)
                .unwrap();
            let res = synthesize(&spec).unwrap();
            sets.push((
                res.elements,
                locate_notches(&res.cell().unwrap(), (0.5e9, 4e9)).unwrap(),
            ));
        }
        assert_ne!(sets[0].0, sets[1].0);
        for (_, roots) in &sets[1..] {
            for (a, b) in roots.iter().zip(&sets[0].1) {
                assert!(((a - b) / b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn validation_catches_faults() {
        let spec = SynthesisSpec::new(PAPER_TARGETS).unwrap();
        let good = synthesize(&spec).unwrap();

        let mut negated = good.clone();
        negated.elements.c_l_d = -negated.elements.c_l_d;
        let report = validate(&negated, &spec);
        assert!(
            !report
                .checks
                .iter()
                .find(|c| c.name == "positivity")
                .unwrap()
                .passed
        );

        let mut bumped = good.clone();
        bumped.elements.l_r_c *= 1.05;
        let report = validate(&bumped, &spec);
        let notch = report
            .checks
            .iter()
            .find(|c| c.name == "notch-match")
            .unwrap();
        assert!(!notch.passed, "{}", notch.detail);
        assert!(notch.detail.contains('%'));
    }
}
