// Sweep the reference filter and write Touchstone and CSV files, then read
// the Touchstone file back.

use qbnf::ecrlh::{ElementSet, UnitCell};
use qbnf::filter::{notches_in_sweep, sweep_dispersion, sweep_sparams, FilterTopology, SweepGrid};
use qbnf::io::{
    read_touchstone, write_dispersion_csv, write_notch_csv, write_sweep_csv, write_touchstone,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("qbnf-touchstone-example-{}", std::process::id()));
    let topo = FilterTopology::default();
    let cell = UnitCell::new(ElementSet::reference_qbnf())?;
    let grid = SweepGrid::new(0.5e9, 4.0e9, 701)?;

    let sweep = sweep_sparams(&topo, &cell, &grid)?;
    let comments = vec![
        format!("topology: {}", topo.describe()),
        format!("convention: {}", cell.convention),
    ];
    let s2p = dir.join("reference.s2p");
    write_touchstone(&sweep.points, &s2p, &comments, false)?;
    write_sweep_csv(&sweep.points, dir.join("sweep.csv"))?;
    write_dispersion_csv(&sweep_dispersion(&cell, &grid)?, dir.join("dispersion.csv"))?;
    write_notch_csv(
        &notches_in_sweep(&topo, &cell, &sweep),
        dir.join("notches.csv"),
    )?;

    let back = read_touchstone(&s2p)?;
    let worst = back
        .points
        .iter()
        .zip(&sweep.points)
        .map(|(a, b)| (a.s11 - b.s11).norm())
        .fold(0.0, f64::max);
    println!("wrote {} points to {}", back.points.len(), dir.display());
    println!("max |S11| change through the file: {worst:.1e}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
