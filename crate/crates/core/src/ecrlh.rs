//! Extended composite right/left-handed (E-CRLH) unit cell.
//!
//! The series branch is a series LC (`l_r_c`, `c_l_c`) in series with a
//! parallel tank (`l_r_d` || `c_l_d`). The shunt branch is a parallel tank
//! (`c_r_c` || `l_l_c`) in parallel with a series LC (`l_l_d`, `c_r_d`).
//! The cell is the symmetric T `Z | Y | Z`, so the chain matrix has
//! `a = d = 1 + ZY`, `c = Y` and `b = Z (2 + ZY)`. Bloch propagation follows
//! from `cosh(gamma p) = 1 + ZY` and the Bloch impedance from
//! `sqrt(Z/Y) sqrt(2 + ZY)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net2p::{input_impedance, series_element, shunt_element, Load, TwoPortMatrix};

/// Relative distance from a lossless pole inside which evaluation fails
/// with [`Error::PoleSingularity`].
pub const POLE_GUARD: f64 = 1e-12;

/// The eight lumped values of the E-CRLH equivalent circuit, in henries and
/// farads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementSet {
    pub c_r_c: f64,
    pub l_l_c: f64,
    pub l_l_d: f64,
    pub c_r_d: f64,
    pub l_r_c: f64,
    pub c_l_c: f64,
    pub c_l_d: f64,
    pub l_r_d: f64,
}

impl ElementSet {
    pub const NAMES: [&'static str; 8] = [
        "c_r_c", "l_l_c", "l_l_d", "c_r_d", "l_r_c", "c_l_c", "c_l_d", "l_r_d",
    ];

    /// Values of the published quad-band notch design.
    pub fn reference_qbnf() -> Self {
        ElementSet {
            c_r_c: 2.6e-12,
            l_l_c: 3.7e-9,
            l_l_d: 3.3e-9,
            c_r_d: 1.9e-12,
            l_r_c: 6.4e-9,
            c_l_c: 1.5e-12,
            c_l_d: 1.3e-12,
            l_r_d: 4.8e-9,
        }
    }

    /// Values in [`Self::NAMES`] order.
    pub fn values(&self) -> [f64; 8] {
        [
            self.c_r_c, self.l_l_c, self.l_l_d, self.c_r_d, self.l_r_c, self.c_l_c, self.c_l_d,
            self.l_r_d,
        ]
    }

    pub fn from_values(v: [f64; 8]) -> Result<Self> {
        let set = ElementSet {
            c_r_c: v[0],
            l_l_c: v[1],
            l_l_d: v[2],
            c_r_d: v[3],
            l_r_c: v[4],
            c_l_c: v[5],
            c_l_d: v[6],
            l_r_d: v[7],
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in Self::NAMES.iter().zip(self.values()) {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonphysicalSolution {
                    element: name,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Every inductance multiplied by `k`, every capacitance divided by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        ElementSet {
            c_r_c: self.c_r_c / k,
            l_l_c: self.l_l_c * k,
            l_l_d: self.l_l_d * k,
            c_r_d: self.c_r_d / k,
            l_r_c: self.l_r_c * k,
            c_l_c: self.c_l_c / k,
            c_l_d: self.c_l_d / k,
            l_r_d: self.l_r_d * k,
        }
    }
}

/// How the series-branch values enter the series impedance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesConvention {
    /// Element values used as given.
    #[default]
    AsGiven,
    /// `l_r_c` and `c_l_d` halved in the series impedance, with the series
    /// resonances held fixed.
    HalfSeries,
}

impl SeriesConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesConvention::AsGiven => "as-given",
            SeriesConvention::HalfSeries => "half-series",
        }
    }
}

impl fmt::Display for SeriesConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-given" => Ok(SeriesConvention::AsGiven),
            "half-series" => Ok(SeriesConvention::HalfSeries),
            other => Err(Error::invalid(format!(
                "unknown convention `{other}` (expected as-given or half-series)"
            ))),
        }
    }
}

/// An element set together with the modeling conventions used to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCell {
    pub elements: ElementSet,
    pub convention: SeriesConvention,
    /// Uniform quality factor of every L and C; `None` is lossless.
    pub q_factor: Option<f64>,
    /// Physical cell length in meters. Informational only.
    pub cell_length: f64,
}

impl UnitCell {
    pub const DEFAULT_CELL_LENGTH: f64 = 0.01;

    pub fn new(elements: ElementSet) -> Result<Self> {
        elements.validate()?;
        Ok(UnitCell {
            elements,
            convention: SeriesConvention::AsGiven,
            q_factor: None,
            cell_length: Self::DEFAULT_CELL_LENGTH,
        })
    }

    pub fn with_convention(mut self, convention: SeriesConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_q(mut self, q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::invalid(format!(
                "q_factor must be positive, got {q}"
            )));
        }
        self.q_factor = Some(q);
        Ok(self)
    }

    pub fn with_cell_length(mut self, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::invalid(format!(
                "cell length must be positive, got {p}"
            )));
        }
        self.cell_length = p;
        Ok(self)
    }

    pub fn is_lossless(&self) -> bool {
        self.q_factor.is_none()
    }

    /// Element values as they enter the immittance formulas under the
    /// cell's convention. Scaling by 2 is exact, so resonances are unchanged
    /// bit for bit.
    fn effective(&self) -> ElementSet {
        let e = self.elements;
        match self.convention {
            SeriesConvention::AsGiven => e,
            SeriesConvention::HalfSeries => ElementSet {
                l_r_c: e.l_r_c / 2.0,
                c_l_c: e.c_l_c * 2.0,
                c_l_d: e.c_l_d / 2.0,
                l_r_d: e.l_r_d * 2.0,
                ..e
            },
        }
    }
}

/// The four LC resonances of the cell, in hertz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceSet {
    /// Series-branch series LC (`l_r_c`, `c_l_c`).
    pub f_cs: f64,
    /// Series-branch tank (`l_r_d`, `c_l_d`); pole of Z.
    pub f_dp: f64,
    /// Shunt-branch tank (`l_l_c`, `c_r_c`).
    pub f_cp: f64,
    /// Shunt-branch series LC (`l_l_d`, `c_r_d`); pole of Y.
    pub f_ds: f64,
}

impl ResonanceSet {
    pub fn all(&self) -> [f64; 4] {
        [self.f_cs, self.f_dp, self.f_cp, self.f_ds]
    }
}

fn lc_hz(l: f64, c: f64) -> f64 {
    1.0 / (2.0 * PI * (l * c).sqrt())
}

pub fn resonant_frequencies(elements: &ElementSet) -> ResonanceSet {
    ResonanceSet {
        f_cs: lc_hz(elements.l_r_c, elements.c_l_c),
        f_dp: lc_hz(elements.l_r_d, elements.c_l_d),
        f_cp: lc_hz(elements.l_l_c, elements.c_r_c),
        f_ds: lc_hz(elements.l_l_d, elements.c_r_d),
    }
}

/// Propagation constant and Bloch impedance at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub frequency: f64,
    /// Attenuation (Np/cell) as real part, phase (rad/cell) as imaginary part.
    pub gamma_p: Complex64,
    pub z_bloch: Complex64,
}

impl DispersionPoint {
    pub fn alpha(&self) -> f64 {
        self.gamma_p.re
    }

    pub fn beta_p(&self) -> f64 {
        self.gamma_p.im
    }
}

fn omega(frequency: f64) -> Result<f64> {
    if frequency.is_finite() && frequency > 0.0 {
        Ok(2.0 * PI * frequency)
    } else {
        Err(Error::invalid(format!(
            "frequency must be positive, got {frequency}"
        )))
    }
}

fn guard_pole(frequency: f64, pole: f64) -> Result<()> {
    if (frequency - pole).abs() <= POLE_GUARD * pole {
        Err(Error::PoleSingularity { frequency })
    } else {
        Ok(())
    }
}

// Lossy reactive elements: inductor gains series R = wL/Q, capacitor gains
// parallel G = wC/Q.
fn inductor_z(w: f64, l: f64, q: f64) -> Complex64 {
    Complex64::new(w * l / q, w * l)
}

fn capacitor_y(w: f64, c: f64, q: f64) -> Complex64 {
    Complex64::new(w * c / q, w * c)
}

/// The two additive terms of the series impedance: (series LC, tank).
pub(crate) fn series_terms(cell: &UnitCell, frequency: f64) -> Result<(Complex64, Complex64)> {
    let w = omega(frequency)?;
    let e = cell.effective();
    match cell.q_factor {
        None => {
            guard_pole(frequency, lc_hz(e.l_r_d, e.c_l_d))?;
            let w2 = w * w;
            let w_cs2 = 1.0 / (e.l_r_c * e.c_l_c);
            let w_dp2 = 1.0 / (e.l_r_d * e.c_l_d);
            let lc = w * e.l_r_c * (1.0 - w_cs2 / w2);
            let tank = -1.0 / (w * e.c_l_d * (1.0 - w_dp2 / w2));
            Ok((Complex64::new(0.0, lc), Complex64::new(0.0, tank)))
        }
        Some(q) => {
            let lc = inductor_z(w, e.l_r_c, q) + 1.0 / capacitor_y(w, e.c_l_c, q);
            let tank = 1.0 / (1.0 / inductor_z(w, e.l_r_d, q) + capacitor_y(w, e.c_l_d, q));
            Ok((lc, tank))
        }
    }
}

/// The two additive terms of the shunt admittance: (tank, series LC).
pub(crate) fn shunt_terms(cell: &UnitCell, frequency: f64) -> Result<(Complex64, Complex64)> {
    let w = omega(frequency)?;
    let e = cell.effective();
    match cell.q_factor {
        None => {
            guard_pole(frequency, lc_hz(e.l_l_d, e.c_r_d))?;
            let w2 = w * w;
            let w_cp2 = 1.0 / (e.l_l_c * e.c_r_c);
            let w_ds2 = 1.0 / (e.l_l_d * e.c_r_d);
            let tank = w * e.c_r_c * (1.0 - w_cp2 / w2);
            let lc = -1.0 / (w * e.l_l_d * (1.0 - w_ds2 / w2));
            Ok((Complex64::new(0.0, tank), Complex64::new(0.0, lc)))
        }
        Some(q) => {
            let tank = capacitor_y(w, e.c_r_c, q) + 1.0 / inductor_z(w, e.l_l_c, q);
            let lc = 1.0 / (inductor_z(w, e.l_l_d, q) + 1.0 / capacitor_y(w, e.c_r_d, q));
            Ok((tank, lc))
        }
    }
}

/// Series impedance Z of the cell in ohms.
pub fn series_impedance(cell: &UnitCell, frequency: f64) -> Result<Complex64> {
    let (lc, tank) = series_terms(cell, frequency)?;
    Ok(lc + tank)
}

/// Shunt admittance Y of the cell in siemens.
pub fn shunt_admittance(cell: &UnitCell, frequency: f64) -> Result<Complex64> {
    let (tank, lc) = shunt_terms(cell, frequency)?;
    Ok(tank + lc)
}

pub fn immittances(cell: &UnitCell, frequency: f64) -> Result<(Complex64, Complex64)> {
    Ok((
        series_impedance(cell, frequency)?,
        shunt_admittance(cell, frequency)?,
    ))
}

/// Symmetric T network `series(z) * shunt(y) * series(z)`.
pub fn t_cell(z: Complex64, y: Complex64) -> Result<TwoPortMatrix> {
    let zs = series_element(z)?;
    Ok(zs.cascade(&shunt_element(y)?).cascade(&zs))
}

pub fn unit_cell_abcd(cell: &UnitCell, frequency: f64) -> Result<TwoPortMatrix> {
    let (z, y) = immittances(cell, frequency)?;
    t_cell(z, y)
}

/// `cosh(gamma p) = 1 + ZY`.
pub fn cos_bloch_phase(z: Complex64, y: Complex64) -> Complex64 {
    1.0 + z * y
}

/// Inverts `cosh(gamma p) = 1 + ZY` with `Re >= 0` and `Im` in `[0, pi]`.
///
/// For lossy cells where `1 + ZY` has negative imaginary part the two
/// constraints cannot hold together; attenuation keeps its sign and the
/// phase is reported by magnitude.
pub fn gamma_from_zy(z: Complex64, y: Complex64) -> Complex64 {
    let a = cos_bloch_phase(z, y);
    if a.im == 0.0 {
        let x = a.re;
        return if x > 1.0 {
            Complex64::new(x.acosh(), 0.0)
        } else if x < -1.0 {
            Complex64::new((-x).acosh(), PI)
        } else {
            Complex64::new(0.0, x.acos())
        };
    }
    let mut g = a.acosh();
    if g.re < 0.0 {
        g = -g;
    }
    Complex64::new(g.re, g.im.abs())
}

pub fn bloch_gamma(cell: &UnitCell, frequency: f64) -> Result<Complex64> {
    let (z, y) = immittances(cell, frequency)?;
    Ok(gamma_from_zy(z, y))
}

/// Picks the square-root sign with `Re >= 0` (and `Im >= 0` on the
/// imaginary axis).
pub(crate) fn canonical_root(z: Complex64) -> Complex64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

pub fn bloch_impedance_from(z: Complex64, y: Complex64) -> Result<Complex64> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::UnboundedImpedance);
    }
    Ok(canonical_root((z / y).sqrt() * (2.0 + z * y).sqrt()))
}

/// Small-ZY form `sqrt(2Z/Y)`, exact only where `ZY = 0`.
pub fn bloch_impedance_approx_from(z: Complex64, y: Complex64) -> Result<Complex64> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::UnboundedImpedance);
    }
    Ok(canonical_root((2.0 * z / y).sqrt()))
}

pub fn bloch_impedance(cell: &UnitCell, frequency: f64) -> Result<Complex64> {
    let (z, y) = immittances(cell, frequency)?;
    bloch_impedance_from(z, y)
}

pub fn bloch_impedance_approx(cell: &UnitCell, frequency: f64) -> Result<Complex64> {
    let (z, y) = immittances(cell, frequency)?;
    bloch_impedance_approx_from(z, y)
}

/// Input impedance of `n_cells` cascaded cells with the far end open.
pub fn stub_input_impedance(cell: &UnitCell, n_cells: usize, frequency: f64) -> Result<Complex64> {
    if n_cells == 0 {
        return Err(Error::invalid("n_cells must be at least 1"));
    }
    let m = unit_cell_abcd(cell, frequency)?;
    let chain = (1..n_cells).fold(m, |acc, _| acc.cascade(&m));
    input_impedance(&chain, Load::Open)
}

/// Dispersion at one frequency. Where `Y = 0` the Bloch impedance is
/// unbounded and reported as an infinite real part.
pub fn dispersion(cell: &UnitCell, frequency: f64) -> Result<DispersionPoint> {
    let (z, y) = immittances(cell, frequency)?;
    let z_bloch = match bloch_impedance_from(z, y) {
        Ok(zb) => zb,
        Err(Error::UnboundedImpedance) => Complex64::new(f64::INFINITY, 0.0),
        Err(e) => return Err(e),
    };
    Ok(DispersionPoint {
        frequency,
        gamma_p: gamma_from_zy(z, y),
        z_bloch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_cell() -> UnitCell {
        UnitCell::new(ElementSet::reference_qbnf()).unwrap()
    }

    fn j(x: f64) -> Complex64 {
        Complex64::new(0.0, x)
    }

    // Independent composition of the series branch from element impedances.
    fn series_oracle(e: &ElementSet, f: f64) -> Complex64 {
        let w = 2.0 * PI * f;
        let zl = |l: f64| j(w * l);
        let zc = |c: f64| 1.0 / j(w * c);
        zl(e.l_r_c) + zc(e.c_l_c) + 1.0 / (1.0 / zl(e.l_r_d) + 1.0 / zc(e.c_l_d))
    }

    fn shunt_oracle(e: &ElementSet, f: f64) -> Complex64 {
        let w = 2.0 * PI * f;
        let zl = |l: f64| j(w * l);
        let zc = |c: f64| 1.0 / j(w * c);
        1.0 / zc(e.c_r_c) + 1.0 / zl(e.l_l_c) + 1.0 / (zl(e.l_l_d) + zc(e.c_r_d))
    }

    #[test]
    fn reference_resonances() {
        let r = resonant_frequencies(&ElementSet::reference_qbnf());
        // 1/(2 pi sqrt(LC)) evaluated independently
        assert!((r.f_cs - 1.624368335903492e9).abs() < 1.0);
        assert!((r.f_dp - 2.0147809541890385e9).abs() < 1.0);
        assert!((r.f_cp - 1.622_678_924_800_635e9).abs() < 1.0);
        assert!((r.f_ds - 2.0099551246144842e9).abs() < 1.0);
    }

    #[test]
    fn resonances_invariant_under_scaling() {
        let e = ElementSet::reference_qbnf();
        let r = resonant_frequencies(&e);
        let s = resonant_frequencies(&e.scaled(3.7));
        for (a, b) in r.all().iter().zip(s.all()) {
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn element_validation() {
        let mut v = ElementSet::reference_qbnf().values();
        v[3] = -1e-12;
        match ElementSet::from_values(v) {
            Err(Error::NonphysicalSolution { element, .. }) => assert_eq!(element, "c_r_d"),
            other => panic!("{other:?}"),
        }
        v[3] = f64::NAN;
        assert!(ElementSet::from_values(v).is_err());
        assert!(reference_cell().with_q(0.0).is_err());
        assert!(reference_cell().with_cell_length(-1.0).is_err());
    }

    #[test]
    fn convention_parses() {
        assert_eq!(
            "as-given".parse::<SeriesConvention>().unwrap(),
            SeriesConvention::AsGiven
        );
        assert_eq!(
            "half-series".parse::<SeriesConvention>().unwrap(),
            SeriesConvention::HalfSeries
        );
        assert!("half".parse::<SeriesConvention>().is_err());
    }

    #[test]
    fn series_lc_term_vanishes_at_its_resonance() {
        let cell = reference_cell();
        let f_cs = resonant_frequencies(&cell.elements).f_cs;
        let (lc, tank) = series_terms(&cell, f_cs).unwrap();
        let scale = 2.0 * PI * f_cs * cell.elements.l_r_c;
        assert!(lc.norm() <= 1e-14 * scale);
        let z = series_impedance(&cell, f_cs).unwrap();
        assert!((z - tank).norm() <= 1e-14 * scale);
    }

    #[test]
    fn shunt_tank_term_vanishes_at_its_resonance() {
        let cell = reference_cell();
        let f_cp = resonant_frequencies(&cell.elements).f_cp;
        let (tank, _) = shunt_terms(&cell, f_cp).unwrap();
        assert!(tank.norm() <= 1e-14 * 2.0 * PI * f_cp * cell.elements.c_r_c);
    }

    #[test]
    fn series_impedance_matches_composition() {
        let cell = reference_cell();
        let z = series_impedance(&cell, 0.9e9).unwrap();
        let oracle = series_oracle(&cell.elements, 0.9e9);
        assert_eq!(z.re, 0.0);
        assert!((z - oracle).norm() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn shunt_admittance_matches_composition() {
        let cell = reference_cell();
        let y = shunt_admittance(&cell, 2.55e9).unwrap();
        let oracle = shunt_oracle(&cell.elements, 2.55e9);
        assert_eq!(y.re, 0.0);
        assert!((y - oracle).norm() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn half_series_halves_the_printed_factors() {
        let e = ElementSet::reference_qbnf();
        let cell = reference_cell().with_convention(SeriesConvention::HalfSeries);
        let half = ElementSet {
            l_r_c: e.l_r_c / 2.0,
            c_l_c: e.c_l_c * 2.0,
            c_l_d: e.c_l_d / 2.0,
            l_r_d: e.l_r_d * 2.0,
            ..e
        };
        for f in [0.7e9, 1.1e9, 3.0e9] {
            let z = series_impedance(&cell, f).unwrap();
            let oracle = series_oracle(&half, f);
            assert!((z - oracle).norm() <= 1e-12 * oracle.norm());
            // the shunt branch is untouched
            assert_eq!(
                shunt_admittance(&cell, f).unwrap(),
                shunt_admittance(&reference_cell(), f).unwrap()
            );
        }
    }

    #[test]
    fn poles_are_reported() {
        let cell = reference_cell();
        let r = resonant_frequencies(&cell.elements);
        assert!(matches!(
            series_impedance(&cell, r.f_dp),
            Err(Error::PoleSingularity { .. })
        ));
        assert!(matches!(
            shunt_admittance(&cell, r.f_ds),
            Err(Error::PoleSingularity { .. })
        ));
        let near = series_impedance(&cell, r.f_dp * (1.0 - 1e-9)).unwrap();
        let far = series_impedance(&cell, r.f_dp * (1.0 - 1e-3)).unwrap();
        assert!(near.norm() > 1e5 * far.norm());
        let near = shunt_admittance(&cell, r.f_ds * (1.0 - 1e-9)).unwrap();
        assert!(near.norm() > 1e5);
        // lossy cells have no poles
        let lossy = cell.with_q(50.0).unwrap();
        assert!(series_impedance(&lossy, r.f_dp).unwrap().is_finite());
    }

    #[test]
    fn lossy_cell_is_passive_and_approaches_lossless() {
        let cell = reference_cell();
        for f in [0.5e9, 1.3e9, 2.2e9, 3.9e9] {
            let lossy = cell.with_q(30.0).unwrap();
            let z = series_impedance(&lossy, f).unwrap();
            let y = shunt_admittance(&lossy, f).unwrap();
            assert!(z.re > 0.0 && y.re > 0.0);
            let g = bloch_gamma(&lossy, f).unwrap();
            assert!(g.re >= 0.0 && (0.0..=PI).contains(&g.im));

            let nearly = cell.with_q(1e12).unwrap();
            let z0 = series_impedance(&cell, f).unwrap();
            assert!((series_impedance(&nearly, f).unwrap() - z0).norm() <= 1e-9 * z0.norm());
        }
    }

    #[test]
    fn t_cell_construction() {
        assert_eq!(
            t_cell(0.0.into(), 0.0.into()).unwrap(),
            TwoPortMatrix::IDENTITY
        );
        let cell = reference_cell();
        for f in [0.6e9, 1.0e9, 1.9e9, 2.4e9, 3.3e9] {
            let (z, y) = immittances(&cell, f).unwrap();
            let m = unit_cell_abcd(&cell, f).unwrap();
            let a = 1.0 + z * y;
            assert!((m.a - a).norm() <= 1e-12 * a.norm());
            assert_eq!(m.a, m.d);
            let via_matrix = canonical_root((m.b / m.c).sqrt());
            let zb = bloch_impedance(&cell, f).unwrap();
            assert!((via_matrix - zb).norm() <= 1e-12 * zb.norm());
        }
    }

    #[test]
    fn gamma_special_values() {
        let y = j(0.02);
        assert_eq!(gamma_from_zy(0.0.into(), y), Complex64::new(0.0, 0.0));
        // ZY = -1 and ZY = -2 with Z = jX, Y = jB
        let g = gamma_from_zy(j(50.0), y);
        assert!((g - Complex64::new(0.0, PI / 2.0)).norm() < 1e-15);
        let g = gamma_from_zy(j(100.0), y);
        assert!((g - Complex64::new(0.0, PI)).norm() < 1e-15);
        // stopbands: attenuation with beta 0 or pi
        let g = gamma_from_zy(j(-100.0), y);
        assert!(g.re > 0.0 && g.im == 0.0);
        let g = gamma_from_zy(j(300.0), y);
        assert!(g.re > 0.0 && g.im == PI);
    }

    #[test]
    fn bloch_impedance_special_values() {
        let y = j(0.02);
        assert_eq!(
            bloch_impedance_from(j(100.0), y).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(bloch_impedance_approx_from(j(100.0), y).unwrap().norm() > 1.0);
        assert!(matches!(
            bloch_impedance_from(j(1.0), 0.0.into()),
            Err(Error::UnboundedImpedance)
        ));
        assert!(matches!(
            bloch_impedance_approx_from(j(1.0), 0.0.into()),
            Err(Error::UnboundedImpedance)
        ));

        // ZY = -0.01: Z = j0.5, Y = j0.02
        let (z, y) = (j(0.5), j(0.02));
        let exact = bloch_impedance_from(z, y).unwrap();
        let approx = bloch_impedance_approx_from(z, y).unwrap();
        let deviation = ((approx - exact).norm()) / approx.norm();
        // |1 - sqrt(1 + ZY/2)|
        let expected = 1.0 - 0.995f64.sqrt();
        assert!(
            (deviation - expected).abs() < 1e-12,
            "{deviation} vs {expected}"
        );
        assert!((deviation - 0.0025).abs() < 1e-4);

        // tiny ZY: the two agree
        let (z, y) = (j(-1e-10), j(0.02));
        let a = bloch_impedance_from(z, y).unwrap();
        let b = bloch_impedance_approx_from(z, y).unwrap();
        assert!((a - b).norm() <= 1e-11 * a.norm());
    }

    #[test]
    fn passband_bloch_impedance_is_real() {
        let cell = reference_cell();
        let mut found = 0;
        for i in 0..400 {
            let f = 0.2e9 + 1e7 * i as f64;
            let Ok((z, y)) = immittances(&cell, f) else {
                continue;
            };
            if (1.0 + z * y).norm() < 0.9 {
                let zb = bloch_impedance(&cell, f).unwrap();
                assert!(zb.re > 0.0);
                assert!(zb.im.abs() <= 1e-12 * zb.re);
                found += 1;
            }
        }
        assert!(found > 10);
    }

    #[test]
    fn stub_recursion_matches_cascade() {
        let cell = reference_cell();
        let m = unit_cell_abcd(&cell, 2.0e9).unwrap();
        let one = input_impedance(&m, Load::Open).unwrap();
        let two = input_impedance(&m, Load::Impedance(one)).unwrap();
        let s1 = stub_input_impedance(&cell, 1, 2.0e9).unwrap();
        let s2 = stub_input_impedance(&cell, 2, 2.0e9).unwrap();
        assert!((s1 - one).norm() <= 1e-12 * one.norm());
        assert!((s2 - two).norm() <= 1e-10 * two.norm());
        assert!(stub_input_impedance(&cell, 0, 2.0e9).is_err());
    }

    #[test]
    fn stub_shorts_where_one_plus_zy_vanishes() {
        let m = t_cell(j(10.0), j(0.1)).unwrap();
        assert_eq!(m.a, Complex64::new(0.0, 0.0));
        assert_eq!(input_impedance(&m, Load::Open).unwrap().norm(), 0.0);
        let m = t_cell(j(10.0), 0.0.into()).unwrap();
        assert!(matches!(
            input_impedance(&m, Load::Open),
            Err(Error::UnboundedImpedance)
        ));
    }

    #[test]
    fn lossless_immittances_are_pure_imaginary() {
        for conv in [SeriesConvention::AsGiven, SeriesConvention::HalfSeries] {
            let cell = reference_cell().with_convention(conv);
            for i in 1..500 {
                let f = 1e7 * i as f64;
                if let Ok((z, y)) = immittances(&cell, f) {
                    assert_eq!(z.re, 0.0);
                    assert_eq!(y.re, 0.0);
                }
            }
        }
    }

    #[test]
    fn dispersion_reports_branch() {
        let cell = reference_cell();
        for i in 1..400 {
            let f = 1e7 * i as f64;
            let Ok(d) = dispersion(&cell, f) else {
                continue;
            };
            assert!(d.alpha() >= 0.0);
            assert!((0.0..=PI).contains(&d.beta_p()));
            let (z, y) = immittances(&cell, f).unwrap();
            let a = (1.0 + z * y).re;
            assert!((d.beta_p().cos() * d.alpha().cosh() - a).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
