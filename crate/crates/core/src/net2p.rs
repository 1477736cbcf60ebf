//! Two-port network algebra on chain (ABCD) matrices.
//!
//! Networks are built and cascaded as ABCD matrices; S-parameters are only
//! computed at the boundary, against a real reference impedance.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2x2 complex chain matrix `[[a, b], [c, d]]`.
///
/// `a` and `d` are dimensionless, `b` is in ohms and `c` in siemens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl TwoPortMatrix {
    pub const IDENTITY: TwoPortMatrix = TwoPortMatrix {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Builds a matrix from explicit entries, rejecting non-finite values.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = TwoPortMatrix { a, b, c, d };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::invalid("two-port matrix entries must be finite"))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `self` followed by `next` (matrix product `self * next`).
    #[must_use]
    pub fn cascade(&self, next: &TwoPortMatrix) -> TwoPortMatrix {
        TwoPortMatrix {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    /// Converts to S-parameters against a real reference impedance.
    pub fn to_s(&self, z_ref: f64, frequency: f64) -> Result<SParameterPoint> {
        abcd_to_s(self, z_ref, frequency)
    }
}

/// S-parameters at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParameterPoint {
    pub frequency: f64,
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Complex64,
    pub s22: Complex64,
    pub z_ref: f64,
}

impl SParameterPoint {
    pub fn s21_db(&self) -> f64 {
        20.0 * self.s21.norm().log10()
    }

    pub fn s11_db(&self) -> f64 {
        20.0 * self.s11.norm().log10()
    }
}

/// Termination seen at port 2 when computing an input impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Load {
    Impedance(Complex64),
    /// Ideal open circuit. Kept distinct from a large finite impedance so
    /// the open-circuit limit `a / c` is evaluated exactly.
    Open,
}

fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be finite, got {z}")))
    }
}

fn check_reference(z_ref: f64) -> Result<()> {
    if z_ref.is_finite() && z_ref > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "reference impedance must be positive, got {z_ref}"
        )))
    }
}

/// Series impedance `[[1, z], [0, 1]]`.
pub fn series_element(z: Complex64) -> Result<TwoPortMatrix> {
    check_finite(z, "series impedance")?;
    Ok(TwoPortMatrix {
        b: z,
        ..TwoPortMatrix::IDENTITY
    })
}

/// Shunt admittance `[[1, 0], [y, 1]]`.
pub fn shunt_element(y: Complex64) -> Result<TwoPortMatrix> {
    check_finite(y, "shunt admittance")?;
    Ok(TwoPortMatrix {
        c: y,
        ..TwoPortMatrix::IDENTITY
    })
}

/// Ideal lossless line of characteristic impedance `z0` and electrical
/// length `theta` radians.
pub fn tline_section(z0: f64, theta: f64) -> Result<TwoPortMatrix> {
    if !(z0.is_finite() && z0 > 0.0) {
        return Err(Error::invalid(format!(
            "line impedance must be positive, got {z0}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::invalid("electrical length must be finite"));
    }
    let (sin, cos) = theta.sin_cos();
    Ok(TwoPortMatrix {
        a: Complex64::new(cos, 0.0),
        b: Complex64::new(0.0, z0 * sin),
        c: Complex64::new(0.0, sin / z0),
        d: Complex64::new(cos, 0.0),
    })
}

pub fn cascade(first: &TwoPortMatrix, second: &TwoPortMatrix) -> TwoPortMatrix {
    first.cascade(second)
}

/// Standard ABCD to S conversion against a real reference impedance.
pub fn abcd_to_s(m: &TwoPortMatrix, z_ref: f64, frequency: f64) -> Result<SParameterPoint> {
    check_reference(z_ref)?;
    if !(frequency.is_finite() && frequency > 0.0) {
        return Err(Error::invalid(format!(
            "frequency must be positive, got {frequency}"
        )));
    }
    let b = m.b / z_ref;
    let c = m.c * z_ref;
    let den = m.a + b + c + m.d;
    if den == ZERO || !den.is_finite() {
        return Err(Error::SingularConversion);
    }
    Ok(SParameterPoint {
        frequency,
        s11: (m.a + b - c - m.d) / den,
        s21: 2.0 / den,
        s12: 2.0 * m.determinant() / den,
        s22: (-m.a + b - c + m.d) / den,
        z_ref,
    })
}

/// Impedance looking into port 1 with port 2 terminated in `load`.
pub fn input_impedance(m: &TwoPortMatrix, load: Load) -> Result<Complex64> {
    match load {
        Load::Open => {
            if m.c == ZERO {
                return Err(Error::UnboundedImpedance);
            }
            Ok(m.a / m.c)
        }
        Load::Impedance(z) => {
            check_finite(z, "load impedance")?;
            let den = m.c * z + m.d;
            if den == ZERO {
                return Err(Error::UnboundedImpedance);
            }
            Ok((m.a * z + m.b) / den)
        }
    }
}
