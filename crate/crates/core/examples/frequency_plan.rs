// Interferers of a two-band heterodyne receiver.

use qbnf::synth::{frequency_plan, interferers};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let plans = [
        frequency_plan(1.4e9, 1.15e9)?,
        frequency_plan(1.8e9, 1.55e9)?,
    ];
    for p in &plans {
        println!(
            "RF {} GHz, LO {} GHz -> IF {} GHz, image {} GHz, 2LO+IF {} GHz",
            p.f_rf / 1e9,
            p.f_lo / 1e9,
            p.f_if / 1e9,
            p.f_im / 1e9,
            p.f_sh / 1e9
        );
    }
    let notch_targets = interferers(&plans);
    println!("frequencies to reject: {notch_targets:?}");
    assert_eq!(notch_targets, vec![0.9e9, 1.3e9, 2.55e9, 3.35e9]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
