//! Command-line front end.
//!
//! ```text
//! qbnf plan|synth|analyze|verify --config PATH [--out DIR]
//!      [--convention as-given|half-series] [--grid START:STOP:N] [--no-meta]
//! ```
//!
//! Exit status: 0 on success, 1 on a computation or verification failure
//! (printed as `error [category]: message`), 2 on a usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::ecrlh::{resonant_frequencies, SeriesConvention, UnitCell};
use crate::error::{Error, Result};
use crate::filter::{
    locate_notches, notches_in_sweep, sweep_dispersion, sweep_sparams, FilterTopology, SweepGrid,
};
use crate::io::config::{elements_json, read_elements_file};
use crate::io::units::{parse_quantity_str, Quantity};
use crate::io::{
    load_config_for, read_touchstone, write_dispersion_csv, write_file, write_notch_csv,
    write_plan_csv, write_sweep_csv, write_touchstone, JobConfig, Mode,
};
use crate::synth::{frequency_plan, interferers, synthesize, validate, validate_elements, Check};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Plan,
    Synth,
    Analyze,
    Verify,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plan => Mode::Plan,
            ModeArg::Synth => Mode::Synth,
            ModeArg::Analyze => Mode::Analyze,
            ModeArg::Verify => Mode::Verify,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    AsGiven,
    HalfSeries,
}

impl From<ConventionArg> for SeriesConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::AsGiven => SeriesConvention::AsGiven,
            ConventionArg::HalfSeries => SeriesConvention::HalfSeries,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qbnf",
    version,
    about = "Quad-band E-CRLH notch filter toolkit"
)]
struct Args {
    /// What to run.
    #[arg(value_enum)]
    mode: ModeArg,
    /// JSON job configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Series-branch convention for analyze mode; overrides the config.
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Sweep grid as START:STOP:N, e.g. 0.5GHz:4GHz:3501.
    #[arg(long, value_name = "START:STOP:N", value_parser = parse_grid)]
    grid: Option<SweepGrid>,
    /// Leave generation timestamps out of output files.
    #[arg(long)]
    no_meta: bool,
}

fn parse_grid(s: &str) -> std::result::Result<SweepGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err("expected START:STOP:N".into());
    };
    let f_start = parse_quantity_str(a, Quantity::Frequency)?;
    let f_stop = parse_quantity_str(b, Quantity::Frequency)?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("`{n}` is not a point count"))?;
    SweepGrid::new(f_start, f_stop, n).map_err(|e| e.to_string())
}

/// Parses `argv` (program name first) and runs the job. Returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            1
        }
    }
}

fn execute(args: &Args) -> Result<()> {
    let mode = Mode::from(args.mode);
    let mut job = load_config_for(&args.config, mode)?;
    if let Some(dir) = &args.out {
        job.outputs.dir = dir.clone();
    }
    if let Some(g) = args.grid {
        job.grid = Some(g);
    }
    if let Some(c) = args.convention {
        match job.cell.as_mut() {
            Some(cell) if mode == Mode::Analyze => cell.convention = c.into(),
            _ => {
                return Err(Error::invalid(format!(
                    "--convention applies to analyze mode only, not {mode}"
                )))
            }
        }
    }
    write_json(&job.outputs.dir.join("config_echo.json"), &job.echo())?;
    match mode {
        Mode::Plan => run_plan(&job),
        Mode::Synth => run_synth(&job),
        Mode::Analyze => run_analyze(&job, !args.no_meta),
        Mode::Verify => run_verify(&job),
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::invalid(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn run_plan(job: &JobConfig) -> Result<()> {
    let plans = job
        .plans
        .iter()
        .map(|&(rf, lo)| frequency_plan(rf, lo))
        .collect::<Result<Vec<_>>>()?;
    println!(
        "{:>10} {:>10} {:>10} {:>10} {:>10}",
        "f_rf/GHz", "f_lo/GHz", "f_if/GHz", "f_im/GHz", "f_sh/GHz"
    );
    for p in &plans {
        let g = [p.f_rf, p.f_lo, p.f_if, p.f_im, p.f_sh].map(|f| f / 1e9);
        println!(
            "{:>10} {:>10} {:>10} {:>10} {:>10}",
            g[0], g[1], g[2], g[3], g[4]
        );
    }
    let all: Vec<String> = interferers(&plans)
        .iter()
        .map(|f| format!("{}", f / 1e9))
        .collect();
    println!("interferers/GHz: {}", all.join(", "));
    if job.outputs.csv {
        write_plan_csv(&plans, job.outputs.dir.join("plan.csv"))?;
    }
    Ok(())
}

fn run_synth(job: &JobConfig) -> Result<()> {
    let spec = job.synthesis.expect("synth config carries targets");
    let result = synthesize(&spec)?;
    let report = validate(&result, &spec);
    let cell = result.cell()?;
    let grid = job.grid.unwrap_or_default();
    let sweep = sweep_sparams(&job.topology, &cell, &grid)?;
    let notches = notches_in_sweep(&job.topology, &cell, &sweep);

    let dir = &job.outputs.dir;
    write_json(
        &dir.join("elements.json"),
        &json!({"elements": elements_json(&result.elements), "convention": "as-given"}),
    )?;
    write_json(
        &dir.join("synthesis_report.json"),
        &json!({
            "spec": to_json(&spec),
            "residuals": result.residuals,
            "max_residual": result.max_residual(),
            "pole_series_hz": result.pole_series,
            "pole_shunt_hz": result.pole_shunt,
            "diagnostics": to_json(&result.diagnostics),
            "validation": to_json(&report),
            "notches": to_json(&notches),
        }),
    )?;
    if job.outputs.csv {
        write_notch_csv(&notches, dir.join("notches.csv"))?;
    }
    println!("max |1 + ZY| at targets: {:e}", result.max_residual());
    for n in &notches {
        println!("notch {:.6} GHz  {:.1} dB", n.f_notch / 1e9, n.depth_db);
    }
    print_checks(&report.checks);
    if !report.passed() {
        return Err(Error::Verification(
            "synthesized cell failed validation".into(),
        ));
    }
    Ok(())
}

fn run_analyze(job: &JobConfig, meta: bool) -> Result<()> {
    let cell: UnitCell = job.cell.expect("analyze config carries elements");
    let topo: &FilterTopology = &job.topology;
    let grid = job.grid.unwrap_or_default();
    let conv = cell.convention.as_str();
    let dir = &job.outputs.dir;

    let sweep = sweep_sparams(topo, &cell, &grid)?;
    let notches = notches_in_sweep(topo, &cell, &sweep);
    let mut comments = vec![
        format!("topology: {}", topo.describe()),
        format!("convention: {conv}"),
        format!(
            "q_factor: {}",
            cell.q_factor
                .map_or("lossless".to_string(), |q| q.to_string())
        ),
    ];
    if !sweep.perturbed.is_empty() {
        comments.push(format!(
            "{} frequencies nudged off lossless poles",
            sweep.perturbed.len()
        ));
    }
    if job.outputs.touchstone {
        write_touchstone(
            &sweep.points,
            dir.join(format!("qbnf_{conv}.s2p")),
            &comments,
            meta,
        )?;
    }
    if job.outputs.csv {
        write_sweep_csv(&sweep.points, dir.join(format!("sweep_{conv}.csv")))?;
        write_dispersion_csv(
            &sweep_dispersion(&cell, &grid)?,
            dir.join(format!("dispersion_{conv}.csv")),
        )?;
        write_notch_csv(&notches, dir.join(format!("notches_{conv}.csv")))?;
    }
    let roots = if cell.is_lossless() {
        Some(locate_notches(&cell, (grid.f_start, grid.f_stop))?)
    } else {
        None
    };
    write_json(
        &dir.join(format!("analysis_{conv}.json")),
        &json!({
            "convention": conv,
            "resonances_hz": to_json(&resonant_frequencies(&cell.elements)),
            "notches": to_json(&notches),
            "roots_hz": roots,
            "perturbed_points": sweep.perturbed.len(),
        }),
    )?;
    println!("convention {conv}: {} notches", notches.len());
    for n in &notches {
        println!(
            "notch {:.6} GHz  {:.1} dB  bw(-10 dB) {:.3} MHz",
            n.f_notch / 1e9,
            n.depth_db,
            n.bw_10db / 1e6
        );
    }
    Ok(())
}

/// Formatting precision of re-parsed files bounds what these can check.
const FILE_TOL: f64 = 1e-8;

fn touchstone_checks(path: &Path) -> Vec<Check> {
    let ts = match read_touchstone(path) {
        Ok(t) => t,
        Err(e) => {
            return vec![Check {
                name: "touchstone-parse",
                passed: false,
                detail: e.to_string(),
            }]
        }
    };
    let worst_recip = ts
        .points
        .iter()
        .map(|p| (p.s21 - p.s12).norm())
        .fold(0.0, f64::max);
    let worst_power = ts
        .points
        .iter()
        .map(|p| (p.s11.norm_sqr() + p.s21.norm_sqr()).max(p.s22.norm_sqr() + p.s12.norm_sqr()))
        .fold(0.0, f64::max);
    vec![
        Check {
            name: "touchstone-reciprocity",
            passed: worst_recip <= FILE_TOL,
            detail: format!("{}: max |S21 - S12| = {worst_recip:e}", path.display()),
        },
        Check {
            name: "touchstone-passivity",
            passed: worst_power <= 1.0 + FILE_TOL,
            detail: format!("{}: max column power = {worst_power:.12}", path.display()),
        },
    ]
}

fn run_verify(job: &JobConfig) -> Result<()> {
    let spec = job.synthesis.expect("verify config carries targets");
    let elements = match (&job.cell, &job.elements_file) {
        (Some(c), _) => c.elements,
        (None, Some(p)) => read_elements_file(p)?,
        (None, None) => unreachable!("config loader requires elements"),
    };
    let mut checks = validate_elements(&elements, &spec).checks;
    for p in &job.touchstone {
        checks.extend(touchstone_checks(p));
    }
    let passed = checks.iter().all(|c| c.passed);
    write_json(
        &job.outputs.dir.join("verify_report.json"),
        &json!({"passed": passed, "checks": to_json(&checks)}),
    )?;
    print_checks(&checks);
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(Error::Verification(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
}
