// Synthesize a cell with notches at four chosen frequencies, then check it.

use qbnf::filter::{notch_report, FilterTopology, SweepGrid};
use qbnf::synth::{synthesize, validate, SynthesisSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SynthesisSpec::new([0.9e9, 1.3e9, 2.55e9, 3.35e9])?;
    let res = synthesize(&spec)?;

    let e = &res.elements;
    println!(
        "series: l_r_c = {:.4} nH, c_l_c = {:.4} pF, l_r_d = {:.4} nH, c_l_d = {:.4} pF",
        e.l_r_c * 1e9,
        e.c_l_c * 1e12,
        e.l_r_d * 1e9,
        e.c_l_d * 1e12
    );
    println!(
        "shunt:  c_r_c = {:.4} pF, l_l_c = {:.4} nH, l_l_d = {:.4} nH, c_r_d = {:.4} pF",
        e.c_r_c * 1e12,
        e.l_l_c * 1e9,
        e.l_l_d * 1e9,
        e.c_r_d * 1e12
    );
    println!("max |1 + ZY| at targets: {:.2e}", res.max_residual());

    for c in validate(&res, &spec).checks {
        println!(
            "{:<12} {} {}",
            c.name,
            if c.passed { "ok  " } else { "FAIL" },
            c.detail
        );
    }

    let grid = SweepGrid::new(0.5e9, 4.0e9, 3501)?;
    for n in notch_report(&FilterTopology::default(), &res.cell()?, &grid)? {
        println!(
            "notch {:.5} GHz, {:.1} dB, -10 dB width {:.1} MHz",
            n.f_notch / 1e9,
            n.depth_db,
            n.bw_10db / 1e6
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
