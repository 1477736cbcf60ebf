// Build a small network from ABCD blocks and convert it to S-parameters.
//
// A quarter-wave 50 ohm line with a 100 ohm shunt resistor in the middle.

use num_complex::Complex64;
use qbnf::net2p::{abcd_to_s, cascade, shunt_element, tline_section};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let eighth = std::f64::consts::FRAC_PI_4;
    let line = tline_section(50.0, eighth)?;
    let shunt = shunt_element(Complex64::new(1.0 / 100.0, 0.0))?;
    let net = cascade(&cascade(&line, &shunt), &line);

    let s = abcd_to_s(&net, 50.0, 1e9)?;
    println!("det(ABCD) = {:.12}", net.determinant());
    println!("S11 = {:.6}", s.s11);
    println!("S21 = {:.6}  ({:.3} dB)", s.s21, s.s21_db());
    println!(
        "|S11|^2 + |S21|^2 = {:.6} (resistor absorbs the rest)",
        s.s11.norm_sqr() + s.s21.norm_sqr()
    );
    assert!((s.s21 - s.s12).norm() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
