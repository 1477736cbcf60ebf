//! CSV tables: sweeps, dispersion, notch reports and frequency plans.
//!
//! Every file starts with a header naming columns and units; numbers use
//! [`sig10`] and lines end in LF.

use std::path::Path;

use super::{apply_depth_floor, sig10, write_file};
use crate::ecrlh::DispersionPoint;
use crate::error::{Error, Result};
use crate::filter::{NotchReport, DEPTH_FLOOR_DB};
use crate::net2p::SParameterPoint;
use crate::synth::FrequencyPlan;

pub const SWEEP_HEADER: [&str; 11] = [
    "freq_hz", "s11_re", "s11_im", "s21_re", "s21_im", "s12_re", "s12_im", "s22_re", "s22_im",
    "s11_db", "s21_db",
];
pub const DISPERSION_HEADER: [&str; 5] = [
    "freq_hz",
    "alpha_np",
    "beta_p_rad",
    "zbloch_re_ohm",
    "zbloch_im_ohm",
];
pub const NOTCH_HEADER: [&str; 4] = ["f_notch_hz", "depth_db", "bw_10db_hz", "refined"];
pub const PLAN_HEADER: [&str; 5] = ["f_rf_hz", "f_lo_hz", "f_if_hz", "f_im_hz", "f_sh_hz"];

fn render<I>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| Error::invalid(format!("csv encoding: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

pub fn sweep_csv(points: &[SParameterPoint]) -> Result<String> {
    let rows = points.iter().map(|p| {
        let s11_db = p.s11_db();
        let p = apply_depth_floor(p);
        let mut row = vec![sig10(p.frequency)];
        for s in [p.s11, p.s21, p.s12, p.s22] {
            row.push(sig10(s.re));
            row.push(sig10(s.im));
        }
        row.push(sig10(s11_db.max(DEPTH_FLOOR_DB)));
        row.push(sig10(p.s21_db().max(DEPTH_FLOOR_DB)));
        row
    });
    render(&SWEEP_HEADER, rows)
}

pub fn dispersion_csv(points: &[DispersionPoint]) -> Result<String> {
    let rows = points.iter().map(|d| {
        vec![
            sig10(d.frequency),
            sig10(d.alpha()),
            sig10(d.beta_p()),
            sig10(d.z_bloch.re),
            sig10(d.z_bloch.im),
        ]
    });
    render(&DISPERSION_HEADER, rows)
}

pub fn notch_csv(reports: &[NotchReport]) -> Result<String> {
    let rows = reports.iter().map(|r| {
        vec![
            sig10(r.f_notch),
            sig10(r.depth_db),
            sig10(r.bw_10db),
            r.refined.to_string(),
        ]
    });
    render(&NOTCH_HEADER, rows)
}

pub fn plan_csv(plans: &[FrequencyPlan]) -> Result<String> {
    let rows = plans
        .iter()
        .map(|p| [p.f_rf, p.f_lo, p.f_if, p.f_im, p.f_sh].map(sig10).to_vec());
    render(&PLAN_HEADER, rows)
}

pub fn write_sweep_csv(points: &[SParameterPoint], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), sweep_csv(points)?.as_bytes())
}

pub fn write_dispersion_csv(points: &[DispersionPoint], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), dispersion_csv(points)?.as_bytes())
}

pub fn write_notch_csv(reports: &[NotchReport], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), notch_csv(reports)?.as_bytes())
}

pub fn write_plan_csv(plans: &[FrequencyPlan], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), plan_csv(plans)?.as_bytes())
}
