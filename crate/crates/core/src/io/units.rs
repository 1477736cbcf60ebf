//! Quantities with engineering suffixes ("1.4 GHz", "6.4 nH", "20 deg").

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Frequency,
    Inductance,
    Capacitance,
    Resistance,
    Length,
    Angle,
    Number,
}

impl Quantity {
    fn base_units(self) -> &'static [&'static str] {
        match self {
            Quantity::Frequency => &["Hz"],
            Quantity::Inductance => &["H"],
            Quantity::Capacitance => &["F"],
            Quantity::Resistance => &["ohm", "Ohm", "Ω"],
            Quantity::Length => &["m"],
            Quantity::Angle => &["rad"],
            Quantity::Number => &[],
        }
    }
}

fn prefix_exponent(c: char) -> Option<i32> {
    Some(match c {
        'f' => -15,
        'p' => -12,
        'n' => -9,
        'u' | 'µ' | 'μ' => -6,
        'm' => -3,
        'k' => 3,
        'M' => 6,
        'G' => 9,
        'T' => 12,
        _ => return None,
    })
}

/// Power-of-ten exponent of `unit` for `kind`, or `None` if the unit does
/// not belong to that quantity.
fn unit_exponent(kind: Quantity, unit: &str) -> Option<i32> {
    let bases = kind.base_units();
    if bases.contains(&unit) {
        return Some(0);
    }
    let mut chars = unit.chars();
    let first = chars.next()?;
    let rest = chars.as_str();
    if bases.contains(&rest) {
        prefix_exponent(first)
    } else {
        None
    }
}

/// Applies a power of ten by editing the decimal exponent, so "1.4" with
/// exponent 9 becomes the correctly rounded double nearest 1.4e9.
fn scale_decimal(number: &str, exponent: i32) -> Option<f64> {
    let (mantissa, own) = match number.find(['e', 'E']) {
        Some(i) => (&number[..i], number[i + 1..].parse::<i32>().ok()?),
        None => (number, 0),
    };
    mantissa.parse::<f64>().ok()?;
    format!("{mantissa}e{}", own + exponent).parse().ok()
}

/// Parses a quantity string into SI units.
pub fn parse_quantity_str(text: &str, kind: Quantity) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E')))
        .unwrap_or(text.len());
    let (number, unit) = (&text[..split], text[split..].trim());
    if number.is_empty() {
        return Err(format!("`{text}` has no numeric value"));
    }
    if unit.is_empty() {
        return number
            .parse::<f64>()
            .map_err(|_| format!("`{number}` is not a number"));
    }
    if kind == Quantity::Angle && unit == "deg" {
        return number
            .parse::<f64>()
            .map(f64::to_radians)
            .map_err(|_| format!("`{number}` is not a number"));
    }
    let exponent = unit_exponent(kind, unit).ok_or_else(|| format!("unknown unit `{unit}`"))?;
    scale_decimal(number, exponent).ok_or_else(|| format!("`{number}` is not a number"))
}

/// Reads a JSON number (already SI) or a string with a unit suffix.
pub fn parse_quantity(value: &Value, kind: Quantity, field: &str) -> Result<f64> {
    let v = match value {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::config(field, "number out of range"))?,
        Value::String(s) => parse_quantity_str(s, kind).map_err(|m| Error::config(field, m))?,
        other => {
            return Err(Error::config(
                field,
                format!("expected a number or quantity string, got {other}"),
            ))
        }
    };
    if !v.is_finite() {
        return Err(Error::config(field, "value must be finite"));
    }
    Ok(v)
}

pub fn parse_positive(value: &Value, kind: Quantity, field: &str) -> Result<f64> {
    let v = parse_quantity(value, kind, field)?;
    if v <= 0.0 {
        return Err(Error::config(field, format!("must be positive, got {v}")));
    }
    Ok(v)
}
