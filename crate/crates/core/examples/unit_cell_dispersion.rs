// Resonances, Bloch phase and Bloch impedance of the reference E-CRLH cell.

use qbnf::ecrlh::{dispersion, resonant_frequencies, ElementSet, UnitCell};
use qbnf::filter::{sweep_dispersion, SweepGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cell = UnitCell::new(ElementSet::reference_qbnf())?;
    let r = resonant_frequencies(&cell.elements);
    println!("series LC   f_cs = {:.4} GHz", r.f_cs / 1e9);
    println!("series tank f_dp = {:.4} GHz (pole of Z)", r.f_dp / 1e9);
    println!("shunt tank  f_cp = {:.4} GHz", r.f_cp / 1e9);
    println!("shunt LC    f_ds = {:.4} GHz (pole of Y)", r.f_ds / 1e9);

    let grid = SweepGrid::new(0.5e9, 4.0e9, 15)?;
    println!(
        "{:>8} {:>10} {:>10} {:>22}",
        "f/GHz", "alpha", "beta*p", "Z_B/ohm"
    );
    for d in sweep_dispersion(&cell, &grid)? {
        println!(
            "{:>8.3} {:>10.4} {:>10.4} {:>10.2}{:+10.2}j",
            d.frequency / 1e9,
            d.alpha(),
            d.beta_p(),
            d.z_bloch.re,
            d.z_bloch.im
        );
    }

    // a passband point: real Bloch impedance
    let d = dispersion(&cell, 0.9e9)?;
    println!(
        "at 0.9 GHz: beta*p = {:.4} rad, Z_B = {:.2}",
        d.beta_p(),
        d.z_bloch
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
