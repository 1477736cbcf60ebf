//! Four-point fits of a one-pole Foster branch.
//!
//! Both E-CRLH branches have the form
//!
//! ```text
//! X(w) = w*k_lin - k_inv/w + w*k_tank / (1 - w^2/wp^2)
//! ```
//!
//! (a reactance for the series branch, a susceptance for the shunt branch).
//! For a trial pole `wp` the three coefficients are linear and follow from
//! the first three samples; the pole is then found by a bracketed root
//! search on the fourth-sample residual.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::brent;

/// Points scanned across the pole bracket before refinement.
pub const POLE_SCAN_POINTS: usize = 512;
/// Relative tolerance of the pole search.
pub const POLE_REL_TOL: f64 = 1e-10;

/// What the pole search did, for reporting.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub scan_points: usize,
    /// Sign-change brackets of the fourth-sample residual, in hertz.
    pub brackets: Vec<(f64, f64)>,
    /// Root-finder iterations summed over all brackets.
    pub iterations: usize,
    /// Brackets whose root was a residual pole or gave a nonpositive element.
    pub rejected: usize,
}

/// Series-branch fit: `l_a`, `c_b` series LC; `l_t || c_t` tank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReactanceFit {
    pub l_a: f64,
    pub c_b: f64,
    pub l_t: f64,
    pub c_t: f64,
    pub pole_hz: f64,
    pub diagnostics: FitDiagnostics,
}

/// Shunt-branch fit: `c_a || l_b` tank; `l_s`, `c_s` series LC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SusceptanceFit {
    pub c_a: f64,
    pub l_b: f64,
    pub l_s: f64,
    pub c_s: f64,
    pub pole_hz: f64,
    pub diagnostics: FitDiagnostics,
}

struct FosterFit {
    k_lin: f64,
    k_inv: f64,
    k_tank: f64,
    pole_w: f64,
    diagnostics: FitDiagnostics,
}

enum Coefficient {
    Lin,
    Inv,
    Tank,
}

enum FitError {
    Other(Error),
    Nonpositive(Coefficient, f64),
}

impl From<Error> for FitError {
    fn from(e: Error) -> Self {
        FitError::Other(e)
    }
}

fn validate_samples(samples: &[(f64, f64); 4], bracket: (f64, f64)) -> Result<()> {
    for (f, v) in samples {
        if !(f.is_finite() && *f > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("bad sample ({f}, {v})")));
        }
    }
    for w in samples.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::invalid(format!(
                "sample frequencies must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
    }
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::invalid(format!(
            "pole bracket must satisfy 0 < lo < hi, got {lo} .. {hi}"
        )));
    }
    // between poles a passive immittance can only increase
    let below: Vec<f64> = samples.iter().filter(|s| s.0 < lo).map(|s| s.1).collect();
    let above: Vec<f64> = samples.iter().filter(|s| s.0 > hi).map(|s| s.1).collect();
    for side in [&below, &above] {
        if side.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InfeasibleTargets(
                "sample values decrease on one side of the pole bracket".into(),
            ));
        }
    }
    Ok(())
}

/// Normalized problem: `u = w / w_s`, values divided by `v_s`.
struct Normalized {
    u: [f64; 4],
    y: [f64; 4],
    w_s: f64,
    v_s: f64,
}

impl Normalized {
    fn new(samples: &[(f64, f64); 4]) -> Self {
        let w: Vec<f64> = samples.iter().map(|s| 2.0 * PI * s.0).collect();
        let w_s = (w[0] * w[3]).sqrt();
        let v_s = samples
            .iter()
            .map(|s| s.1.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        Normalized {
            u: [w[0] / w_s, w[1] / w_s, w[2] / w_s, w[3] / w_s],
            y: [
                samples[0].1 / v_s,
                samples[1].1 / v_s,
                samples[2].1 / v_s,
                samples[3].1 / v_s,
            ],
            w_s,
            v_s,
        }
    }

    fn basis(u: f64, up: f64) -> [f64; 3] {
        [u, -1.0 / u, u / (1.0 - (u / up) * (u / up))]
    }

    fn coefficients(&self, up: f64) -> Option<Vector3<f64>> {
        let rows: Vec<[f64; 3]> = self.u[..3].iter().map(|&u| Self::basis(u, up)).collect();
        let m = Matrix3::from_fn(|r, c| rows[r][c]);
        let rhs = Vector3::new(self.y[0], self.y[1], self.y[2]);
        let p = m.lu().solve(&rhs)?;
        p.iter().all(|v| v.is_finite()).then_some(p)
    }

    fn residual(&self, up: f64) -> Option<f64> {
        let p = self.coefficients(up)?;
        let b = Self::basis(self.u[3], up);
        let r = b[0] * p[0] + b[1] * p[1] + b[2] * p[2] - self.y[3];
        r.is_finite().then_some(r)
    }
}

fn fit_foster(
    samples: &[(f64, f64); 4],
    bracket: (f64, f64),
) -> std::result::Result<FosterFit, FitError> {
    validate_samples(samples, bracket)?;
    let norm = Normalized::new(samples);
    let to_u = |f: f64| 2.0 * PI * f / norm.w_s;
    let (lo, hi) = (to_u(bracket.0), to_u(bracket.1));

    let mut diagnostics = FitDiagnostics {
        scan_points: POLE_SCAN_POINTS,
        ..Default::default()
    };
    let step = (hi - lo) / (POLE_SCAN_POINTS + 1) as f64;
    let near_sample = |up: f64| norm.u.iter().any(|&u| (u - up).abs() <= 1e-9 * u);
    let scan: Vec<(f64, Option<f64>)> = (1..=POLE_SCAN_POINTS)
        .map(|i| lo + step * i as f64)
        .map(|up| {
            (
                up,
                if near_sample(up) {
                    None
                } else {
                    norm.residual(up)
                },
            )
        })
        .collect();

    let mut nonpositive = None;
    for pair in scan.windows(2) {
        let ((a, Some(ra)), (b, Some(rb))) = (pair[0], pair[1]) else {
            continue;
        };
        if (ra < 0.0) == (rb < 0.0) && ra != 0.0 {
            continue;
        }
        let hz = |u: f64| u * norm.w_s / (2.0 * PI);
        diagnostics.brackets.push((hz(a), hz(b)));
        let Some((up, iters)) = brent(
            |x| norm.residual(x).unwrap_or(f64::NAN),
            a,
            b,
            POLE_REL_TOL,
            200,
        ) else {
            diagnostics.rejected += 1;
            continue;
        };
        diagnostics.iterations += iters;
        match (norm.residual(up), norm.coefficients(up)) {
            (Some(r), Some(p)) if r.abs() <= 1e-8 => {
                let bad = [
                    (Coefficient::Lin, p[0]),
                    (Coefficient::Inv, p[1]),
                    (Coefficient::Tank, p[2]),
                ]
                .into_iter()
                .find(|(_, v)| *v <= 0.0);
                if let Some((which, v)) = bad {
                    diagnostics.rejected += 1;
                    nonpositive.get_or_insert((which, v, up));
                    continue;
                }
                return Ok(FosterFit {
                    k_lin: p[0] * norm.v_s / norm.w_s,
                    k_inv: p[1] * norm.v_s * norm.w_s,
                    k_tank: p[2] * norm.v_s / norm.w_s,
                    pole_w: up * norm.w_s,
                    diagnostics,
                });
            }
            _ => diagnostics.rejected += 1,
        }
    }

    if let Some((which, v, _)) = nonpositive {
        let scale = match which {
            Coefficient::Lin | Coefficient::Tank => norm.v_s / norm.w_s,
            Coefficient::Inv => norm.v_s * norm.w_s,
        };
        return Err(FitError::Nonpositive(which, v * scale));
    }
    if diagnostics.brackets.is_empty() {
        Err(Error::InfeasibleTargets(
            "fourth-sample residual does not change sign across the pole bracket".into(),
        )
        .into())
    } else {
        Err(Error::InfeasibleTargets(format!(
            "no root of the fourth-sample residual in {} sign-change bracket(s)",
            diagnostics.brackets.len()
        ))
        .into())
    }
}

/// Fits `X(w) = w L_a - 1/(w C_b) + w L_t / (1 - w^2 L_t C_t)` through four
/// `(hertz, ohms)` samples with the tank pole inside `pole_bracket` (hertz).
pub fn branch_reactance_fit(
    samples: &[(f64, f64); 4],
    pole_bracket: (f64, f64),
) -> Result<ReactanceFit> {
    match fit_foster(samples, pole_bracket) {
        Ok(fit) => {
            let c_t = 1.0 / (fit.pole_w * fit.pole_w * fit.k_tank);
            Ok(ReactanceFit {
                l_a: fit.k_lin,
                c_b: 1.0 / fit.k_inv,
                l_t: fit.k_tank,
                c_t,
                pole_hz: fit.pole_w / (2.0 * PI),
                diagnostics: fit.diagnostics,
            })
        }
        Err(FitError::Other(e)) => Err(e),
        Err(FitError::Nonpositive(which, v)) => Err(match which {
            Coefficient::Lin => Error::NonphysicalSolution {
                element: "l_a",
                value: v,
            },
            Coefficient::Inv => Error::NonphysicalSolution {
                element: "c_b",
                value: 1.0 / v,
            },
            Coefficient::Tank => Error::NonphysicalSolution {
                element: "l_t",
                value: v,
            },
        }),
    }
}

/// Dual of [`branch_reactance_fit`]:
/// `B(w) = w C_a - 1/(w L_b) + w C_s / (1 - w^2 L_s C_s)` through four
/// `(hertz, siemens)` samples.
pub fn branch_susceptance_fit(
    samples: &[(f64, f64); 4],
    pole_bracket: (f64, f64),
) -> Result<SusceptanceFit> {
    match fit_foster(samples, pole_bracket) {
        Ok(fit) => {
            let l_s = 1.0 / (fit.pole_w * fit.pole_w * fit.k_tank);
            Ok(SusceptanceFit {
                c_a: fit.k_lin,
                l_b: 1.0 / fit.k_inv,
                l_s,
                c_s: fit.k_tank,
                pole_hz: fit.pole_w / (2.0 * PI),
                diagnostics: fit.diagnostics,
            })
        }
        Err(FitError::Other(e)) => Err(e),
        Err(FitError::Nonpositive(which, v)) => Err(match which {
            Coefficient::Lin => Error::NonphysicalSolution {
                element: "c_a",
                value: v,
            },
            Coefficient::Inv => Error::NonphysicalSolution {
                element: "l_b",
                value: 1.0 / v,
            },
            Coefficient::Tank => Error::NonphysicalSolution {
                element: "c_s",
                value: v,
            },
        }),
    }
}

/// Series-branch reactance for given elements (forward model).
pub fn reactance(f: f64, l_a: f64, c_b: f64, l_t: f64, c_t: f64) -> f64 {
    let w = 2.0 * PI * f;
    w * l_a - 1.0 / (w * c_b) + w * l_t / (1.0 - w * w * l_t * c_t)
}

/// Shunt-branch susceptance for given elements (forward model).
pub fn susceptance(f: f64, c_a: f64, l_b: f64, l_s: f64, c_s: f64) -> f64 {
    let w = 2.0 * PI * f;
    w * c_a - 1.0 / (w * l_b) + w * c_s / (1.0 - w * w * l_s * c_s)
}
