// The reference quad-band element set under both series conventions,
// lossless and with finite Q.

use qbnf::ecrlh::{ElementSet, SeriesConvention, UnitCell};
use qbnf::filter::{locate_notches, notch_report, FilterTopology, SweepGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let topo = FilterTopology::default();
    let grid = SweepGrid::new(0.5e9, 4.0e9, 3501)?;
    for conv in [SeriesConvention::AsGiven, SeriesConvention::HalfSeries] {
        let cell = UnitCell::new(ElementSet::reference_qbnf())?.with_convention(conv);
        let roots = locate_notches(&cell, (grid.f_start, grid.f_stop))?;
        let ghz: Vec<String> = roots.iter().map(|f| format!("{:.4}", f / 1e9)).collect();
        println!("{conv}: 1 + ZY = 0 at [{}] GHz", ghz.join(", "));

        for q in [None, Some(200.0)] {
            let cell = match q {
                Some(q) => cell.with_q(q)?,
                None => cell,
            };
            let label = q.map_or("lossless".to_string(), |q| format!("Q = {q}"));
            let notches = notch_report(&topo, &cell, &grid)?;
            let parts: Vec<String> = notches
                .iter()
                .map(|n| format!("{:.4} GHz/{:.1} dB", n.f_notch / 1e9, n.depth_db))
                .collect();
            println!("  {label:<9} {}", parts.join("  "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
