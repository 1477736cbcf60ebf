use std::fs;

use num_complex::Complex64;
use qbnf::ecrlh::{ElementSet, UnitCell};
use qbnf::filter::{notch_report, sweep_sparams, FilterTopology, SweepGrid};
use qbnf::io::{
    notch_csv, parse_touchstone, read_touchstone, sig10, touchstone_string, write_notch_csv,
    write_touchstone,
};
use qbnf::net2p::{SParameterPoint, TwoPortMatrix};

const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

#[test]
fn through_touchstone_matches_golden_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("through.s2p");
    let p = TwoPortMatrix::IDENTITY.to_s(50.0, 1e9).unwrap();
    write_touchstone(&[p], &path, &[], false).unwrap();
    let golden = fs::read(format!("{GOLDEN}/through.s2p")).unwrap();
    assert_eq!(fs::read(&path).unwrap(), golden);
}

#[test]
fn empty_notch_csv_matches_golden_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("notches.csv");
    write_notch_csv(&[], &path).unwrap();
    let golden = fs::read(format!("{GOLDEN}/empty_notches.csv")).unwrap();
    assert_eq!(fs::read(&path).unwrap(), golden);
}

fn reparsed(x: f64) -> f64 {
    sig10(x).parse().unwrap()
}

#[test]
fn touchstone_round_trip_is_exact_at_format_precision() {
    let cell = UnitCell::new(ElementSet::reference_qbnf()).unwrap();
    let grid = SweepGrid::new(0.5e9, 4.0e9, 501).unwrap();
    let sweep = sweep_sparams(&FilterTopology::default(), &cell, &grid).unwrap();
    let text = touchstone_string(&sweep.points, &["convention: as-given".into()], true).unwrap();
    let back = parse_touchstone(&text, "mem.s2p").unwrap();
    assert_eq!(back.points.len(), sweep.points.len());
    for (a, b) in sweep.points.iter().zip(&back.points) {
        let a = qbnf::io::apply_depth_floor(a);
        assert_eq!(b.frequency, reparsed(a.frequency / 1e9) * 1e9);
        for (x, y) in [
            (a.s11, b.s11),
            (a.s21, b.s21),
            (a.s12, b.s12),
            (a.s22, b.s22),
        ] {
            assert_eq!(y.re, reparsed(x.re));
            assert_eq!(y.im, reparsed(x.im));
        }
    }
    // writing the parsed values again reproduces the data section
    let again = touchstone_string(&back.points, &["convention: as-given".into()], false).unwrap();
    let data = |t: &str| {
        t.lines()
            .filter(|l| !l.starts_with('!'))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(data(&again), data(&text));
}

#[test]
fn floored_notch_is_never_zero() {
    let p = SParameterPoint {
        frequency: 2e9,
        s11: Complex64::new(-1.0, 0.0),
        s21: Complex64::new(0.0, 0.0),
        s12: Complex64::new(0.0, 0.0),
        s22: Complex64::new(-1.0, 0.0),
        z_ref: 50.0,
    };
    let text = touchstone_string(&[p], &[], false).unwrap();
    let row = text.lines().last().unwrap();
    assert_eq!(
        row,
        "2.000000000e+00 -1.000000000e+00 0 1.000000000e-06 0 1.000000000e-06 0 -1.000000000e+00 0"
    );
}

#[test]
fn notch_csv_for_reference_cell() {
    let cell = UnitCell::new(ElementSet::reference_qbnf()).unwrap();
    let grid = SweepGrid::new(0.5e9, 4.0e9, 3501).unwrap();
    let reports = notch_report(&FilterTopology::default(), &cell, &grid).unwrap();
    let text = notch_csv(&reports).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let depth: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!(depth <= -20.0);
    }
    assert!(!text.contains('\r'));
}

#[test]
fn read_missing_file_names_path() {
    let err = read_touchstone("/nonexistent/x.s2p").unwrap_err();
    assert_eq!(err.category(), "io");
    assert!(err.to_string().contains("/nonexistent/x.s2p"));
}
