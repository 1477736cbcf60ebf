//! The quad-band notch filter: a through line loaded at its midpoint by an
//! open-ended E-CRLH stub.
//!
//! Wherever `1 + ZY = 0` the stub input impedance `a/c = (1 + ZY)/Y` is a
//! short and the filter has a transmission zero, independent of the host
//! line around it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ecrlh::{
    self, gamma_from_zy, immittances, resonant_frequencies, stub_input_impedance, DispersionPoint,
    UnitCell,
};
use crate::error::{Error, Result};
use crate::net2p::{abcd_to_s, shunt_element, tline_section, Load, SParameterPoint, TwoPortMatrix};
use crate::numeric::{bisect, golden_section};

/// |S21| is never reported below this level.
pub const DEPTH_FLOOR_DB: f64 = -120.0;
/// A grid minimum below this level counts as a notch.
pub const NOTCH_DETECT_DB: f64 = -10.0;
/// Rejection required of a design notch.
pub const REJECTION_DB: f64 = -20.0;
/// Relative offset applied to sweep points that land on a lossless pole.
pub const POLE_NUDGE: f64 = 1e-9;
/// Relative frequency tolerance of golden-section notch refinement.
pub const NOTCH_REFINE_TOL: f64 = 1e-10;
/// Scan resolution per pole-free subinterval in [`locate_notches`].
pub const ROOT_SCAN_POINTS: usize = 2000;

/// |S21| at [`DEPTH_FLOOR_DB`].
pub fn depth_floor_magnitude() -> f64 {
    1e-6
}

/// Host-line and port description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterTopology {
    /// Through-line characteristic impedance, ohms.
    pub z0_line: f64,
    /// Electrical length of each half of the through line at `f_ref`, radians.
    pub theta_per_side: f64,
    pub f_ref: f64,
    pub n_cells: usize,
    /// S-parameter reference impedance, ohms.
    pub z_ref: f64,
}

impl Default for FilterTopology {
    fn default() -> Self {
        FilterTopology {
            z0_line: 50.0,
            theta_per_side: 20f64.to_radians(),
            f_ref: 1e9,
            n_cells: 1,
            z_ref: 50.0,
        }
    }
}

impl FilterTopology {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.z0_line) {
            return Err(Error::invalid("z0_line must be positive"));
        }
        if !positive(self.z_ref) {
            return Err(Error::invalid("z_ref must be positive"));
        }
        if !positive(self.f_ref) {
            return Err(Error::invalid("f_ref must be positive"));
        }
        if !(self.theta_per_side.is_finite() && self.theta_per_side >= 0.0) {
            return Err(Error::invalid("theta_per_side must be non-negative"));
        }
        if self.n_cells == 0 {
            return Err(Error::invalid("n_cells must be at least 1"));
        }
        Ok(())
    }

    pub fn theta_at(&self, frequency: f64) -> f64 {
        self.theta_per_side * frequency / self.f_ref
    }

    pub fn describe(&self) -> String {
        format!(
            "z0_line={} ohm theta_per_side={} rad at f_ref={} Hz n_cells={} z_ref={} ohm",
            self.z0_line, self.theta_per_side, self.f_ref, self.n_cells, self.z_ref
        )
    }
}

/// Linear frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub f_start: f64,
    pub f_stop: f64,
    pub n_points: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            f_start: 0.1e9,
            f_stop: 4.0e9,
            n_points: 4001,
        }
    }
}

impl SweepGrid {
    pub fn new(f_start: f64, f_stop: f64, n_points: usize) -> Result<Self> {
        let grid = SweepGrid {
            f_start,
            f_stop,
            n_points,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_start.is_finite() && self.f_stop.is_finite()) {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if !(0.0 < self.f_start && self.f_start < self.f_stop) {
            return Err(Error::invalid(format!(
                "grid needs 0 < f_start < f_stop, got {} .. {}",
                self.f_start, self.f_stop
            )));
        }
        if self.n_points < 2 {
            return Err(Error::invalid("grid needs at least 2 points"));
        }
        Ok(())
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        let span = self.f_stop - self.f_start;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.f_stop
                } else {
                    self.f_start + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Assembled filter at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterNetwork {
    Matrix(TwoPortMatrix),
    /// The stub is an exact short: the two line halves see a zero impedance
    /// at the junction and nothing is transmitted.
    ShortedJunction {
        left: TwoPortMatrix,
        right: TwoPortMatrix,
    },
}

impl FilterNetwork {
    pub fn to_s(&self, z_ref: f64, frequency: f64) -> Result<SParameterPoint> {
        match self {
            FilterNetwork::Matrix(m) => abcd_to_s(m, z_ref, frequency),
            FilterNetwork::ShortedJunction { left, right } => {
                // port 1 sees left terminated in a short; port 2 sees right reversed
                let z1 = left.b / left.d;
                let z2 = right.b / right.a;
                let gamma = |z: Complex64| (z - z_ref) / (z + z_ref);
                let zero = Complex64::new(0.0, 0.0);
                Ok(SParameterPoint {
                    frequency,
                    s11: gamma(z1),
                    s21: zero,
                    s12: zero,
                    s22: gamma(z2),
                    z_ref,
                })
            }
        }
    }

    pub fn matrix(&self) -> Option<&TwoPortMatrix> {
        match self {
            FilterNetwork::Matrix(m) => Some(m),
            FilterNetwork::ShortedJunction { .. } => None,
        }
    }
}

/// Through line halves around a shunt termination given by `stub`.
pub fn assemble_loaded(
    topology: &FilterTopology,
    stub: Load,
    frequency: f64,
) -> Result<FilterNetwork> {
    let half = tline_section(topology.z0_line, topology.theta_at(frequency))?;
    match stub {
        Load::Open => Ok(FilterNetwork::Matrix(half.cascade(&half))),
        Load::Impedance(z) => {
            let y = 1.0 / z;
            if y.is_finite() {
                let shunt = shunt_element(y)?;
                Ok(FilterNetwork::Matrix(half.cascade(&shunt).cascade(&half)))
            } else {
                Ok(FilterNetwork::ShortedJunction {
                    left: half,
                    right: half,
                })
            }
        }
    }
}

pub fn assemble(
    topology: &FilterTopology,
    cell: &UnitCell,
    frequency: f64,
) -> Result<FilterNetwork> {
    topology.validate()?;
    let stub = match stub_input_impedance(cell, topology.n_cells, frequency) {
        Ok(z) => Load::Impedance(z),
        Err(Error::UnboundedImpedance) => Load::Open,
        Err(e) => return Err(e),
    };
    assemble_loaded(topology, stub, frequency)
}

/// S-parameters of the filter at one frequency.
pub fn evaluate(
    topology: &FilterTopology,
    cell: &UnitCell,
    frequency: f64,
) -> Result<SParameterPoint> {
    assemble(topology, cell, frequency)?.to_s(topology.z_ref, frequency)
}

fn with_pole_nudge<T>(frequency: f64, eval: impl Fn(f64) -> Result<T>) -> Result<(T, bool)> {
    match eval(frequency) {
        Err(Error::PoleSingularity { .. }) => Ok((eval(frequency * (1.0 + POLE_NUDGE))?, true)),
        other => other.map(|v| (v, false)),
    }
}

/// Sweep output; `perturbed` lists indices whose frequency was nudged off an
/// exact lossless pole.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<SParameterPoint>,
    pub perturbed: Vec<usize>,
}

pub fn sweep_sparams(
    topology: &FilterTopology,
    cell: &UnitCell,
    grid: &SweepGrid,
) -> Result<Sweep> {
    topology.validate()?;
    grid.validate()?;
    let evaluated = grid
        .frequencies()
        .par_iter()
        .map(|&f| with_pole_nudge(f, |f| evaluate(topology, cell, f)))
        .collect::<Result<Vec<_>>>()?;
    let perturbed = evaluated
        .iter()
        .enumerate()
        .filter_map(|(i, (_, nudged))| nudged.then_some(i))
        .collect();
    Ok(Sweep {
        points: evaluated.into_iter().map(|(p, _)| p).collect(),
        perturbed,
    })
}

pub fn sweep_dispersion(cell: &UnitCell, grid: &SweepGrid) -> Result<Vec<DispersionPoint>> {
    grid.validate()?;
    grid.frequencies()
        .par_iter()
        .map(|&f| with_pole_nudge(f, |f| ecrlh::dispersion(cell, f)).map(|(d, _)| d))
        .collect()
}

/// `1 + ZY` for a lossless cell (a real number).
pub fn notch_condition(cell: &UnitCell, frequency: f64) -> Result<f64> {
    if !cell.is_lossless() {
        return Err(Error::UnsupportedMode(
            "the notch condition is real only for lossless cells".into(),
        ));
    }
    let (z, y) = immittances(cell, frequency)?;
    Ok((1.0 + z * y).re)
}

/// Frequencies in `band` where `1 + ZY = 0`, sorted ascending.
///
/// The band is split at the cell resonances, each piece is scanned for
/// sign changes and every bracket is bisected to machine precision.
pub fn locate_notches(cell: &UnitCell, band: (f64, f64)) -> Result<Vec<f64>> {
    let (lo, hi) = band;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::invalid(format!(
            "band must satisfy 0 < lo < hi, got {lo} .. {hi}"
        )));
    }
    if !cell.is_lossless() {
        return Err(Error::UnsupportedMode(
            "notch location needs a lossless cell".into(),
        ));
    }
    let mut cuts: Vec<f64> = resonant_frequencies(&cell.elements)
        .all()
        .into_iter()
        .filter(|&p| lo < p && p < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= POLE_NUDGE * *b);

    let mut edges = vec![(lo, false)];
    edges.extend(cuts.iter().map(|&c| (c, true)));
    edges.push((hi, false));

    let g = |f: f64| notch_condition(cell, f).ok();
    let mut roots = Vec::new();
    for pair in edges.windows(2) {
        let (a, a_cut) = pair[0];
        let (b, b_cut) = pair[1];
        let a = if a_cut { a * (1.0 + POLE_NUDGE) } else { a };
        let b = if b_cut { b * (1.0 - POLE_NUDGE) } else { b };
        if a >= b {
            continue;
        }
        let step = (b - a) / (ROOT_SCAN_POINTS - 1) as f64;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..ROOT_SCAN_POINTS {
            let x = if i + 1 == ROOT_SCAN_POINTS {
                b
            } else {
                a + step * i as f64
            };
            let Some(gx) = g(x) else {
                prev = None;
                continue;
            };
            if gx == 0.0 {
                roots.push(x);
            } else if let Some((xp, gp)) = prev {
                if gp != 0.0 && (gp < 0.0) != (gx < 0.0) {
                    let (root, _) = bisect(|f| g(f).unwrap_or(f64::NAN), xp, x, 0.0);
                    roots.push(root);
                }
            }
            prev = Some((x, gx));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
    Ok(roots)
}

/// Per-cell phase `Im(gamma p)` in a lossless passband.
pub fn phase_shift(cell: &UnitCell, frequency: f64) -> Result<f64> {
    if !cell.is_lossless() {
        return Err(Error::UnsupportedMode(
            "phase shift is defined for lossless cells".into(),
        ));
    }
    let (z, y) = immittances(cell, frequency)?;
    if (1.0 + z * y).re.abs() > 1.0 {
        return Err(Error::StopbandPhase { frequency });
    }
    Ok(gamma_from_zy(z, y).im)
}

/// One detected and refined transmission notch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NotchReport {
    pub f_notch: f64,
    /// |S21| at the refined notch, floored at [`DEPTH_FLOOR_DB`].
    pub depth_db: f64,
    /// Width of the contiguous band with |S21| <= -10 dB.
    pub bw_10db: f64,
    pub refined: bool,
}

fn s21_mag(topology: &FilterTopology, cell: &UnitCell, f: f64) -> f64 {
    with_pole_nudge(f, |f| evaluate(topology, cell, f))
        .map(|(p, _)| p.s21.norm())
        .unwrap_or(f64::INFINITY)
}

fn to_db(mag: f64) -> f64 {
    20.0 * mag.log10()
}

pub fn notch_report(
    topology: &FilterTopology,
    cell: &UnitCell,
    grid: &SweepGrid,
) -> Result<Vec<NotchReport>> {
    let sweep = sweep_sparams(topology, cell, grid)?;
    Ok(notches_in_sweep(topology, cell, &sweep))
}

/// Detects notches on an existing sweep of `cell` under `topology`.
pub fn notches_in_sweep(
    topology: &FilterTopology,
    cell: &UnitCell,
    sweep: &Sweep,
) -> Vec<NotchReport> {
    detect_notches(sweep, |f| s21_mag(topology, cell, f))
}

/// Grid minima of |S21| below -10 dB, refined with `mag`, which evaluates
/// |S21| of the swept network at any frequency.
pub fn detect_notches<F>(sweep: &Sweep, mag: F) -> Vec<NotchReport>
where
    F: Fn(f64) -> f64,
{
    let pts = &sweep.points;
    let freqs: Vec<f64> = pts.iter().map(|p| p.frequency).collect();
    let db: Vec<f64> = pts.iter().map(|p| to_db(p.s21.norm())).collect();
    let mag = &mag;
    let above_10 = |f: f64| to_db(mag(f)) - NOTCH_DETECT_DB;

    let mut reports = Vec::new();
    for i in 1..pts.len().saturating_sub(1) {
        if !(db[i] < db[i - 1] && db[i] <= db[i + 1] && db[i] <= NOTCH_DETECT_DB) {
            continue;
        }
        let (x, fx, _, converged) =
            golden_section(mag, freqs[i - 1], freqs[i + 1], NOTCH_REFINE_TOL);
        let (f_notch, m) = if fx <= pts[i].s21.norm() {
            (x, fx)
        } else {
            (freqs[i], pts[i].s21.norm())
        };
        let depth_db = to_db(m).max(DEPTH_FLOOR_DB);

        let mut k = i;
        while k > 0 && db[k - 1] <= NOTCH_DETECT_DB {
            k -= 1;
        }
        let left = if k == 0 {
            freqs[0]
        } else {
            bisect(above_10, freqs[k - 1], freqs[k], 1e-9).0
        };
        let mut k = i;
        while k + 1 < pts.len() && db[k + 1] <= NOTCH_DETECT_DB {
            k += 1;
        }
        let right = if k + 1 == pts.len() {
            freqs[k]
        } else {
            bisect(above_10, freqs[k], freqs[k + 1], 1e-9).0
        };

        reports.push(NotchReport {
            f_notch,
            depth_db,
            bw_10db: right - left,
            refined: converged,
        });
    }
    reports
}
