//! JSON job configuration.
//!
//! Quantities may be plain numbers (SI) or strings with an engineering
//! suffix. Each mode accepts only its own fields:
//!
//! | mode    | required                  | optional                                              |
//! |---------|---------------------------|-------------------------------------------------------|
//! | plan    | `plans`                   | `outputs`                                             |
//! | synth   | `targets`                 | `r_scale`, `sign_pattern`, `topology`, `grid`, `outputs` |
//! | analyze | `elements`                | `convention`, `q_factor`, `cell_length`, `topology`, `grid`, `outputs` |
//! | verify  | `targets` and one of `elements` / `elements_file` | `r_scale`, `sign_pattern`, `touchstone`, `outputs` |

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::units::{parse_positive, parse_quantity, Quantity};
use crate::ecrlh::{ElementSet, UnitCell};
use crate::error::{Error, Result};
use crate::filter::{FilterTopology, SweepGrid};
use crate::synth::SynthesisSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plan,
    Synth,
    Analyze,
    Verify,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Plan => "plan",
            Mode::Synth => "synth",
            Mode::Analyze => "analyze",
            Mode::Verify => "verify",
        }
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self {
            Mode::Plan => &["mode", "outputs", "plans"],
            Mode::Synth => &[
                "mode",
                "outputs",
                "targets",
                "r_scale",
                "sign_pattern",
                "topology",
                "grid",
            ],
            Mode::Analyze => &[
                "mode",
                "outputs",
                "elements",
                "convention",
                "q_factor",
                "cell_length",
                "topology",
                "grid",
            ],
            Mode::Verify => &[
                "mode",
                "outputs",
                "elements",
                "elements_file",
                "targets",
                "r_scale",
                "sign_pattern",
                "touchstone",
            ],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plan" => Ok(Mode::Plan),
            "synth" => Ok(Mode::Synth),
            "analyze" => Ok(Mode::Analyze),
            "verify" => Ok(Mode::Verify),
            other => Err(Error::config("mode", format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub dir: PathBuf,
    pub touchstone: bool,
    pub csv: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            dir: PathBuf::from("."),
            touchstone: true,
            csv: true,
        }
    }
}

/// A validated job, all quantities in SI.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub mode: Mode,
    /// `(f_rf, f_lo)` pairs.
    pub plans: Vec<(f64, f64)>,
    pub synthesis: Option<SynthesisSpec>,
    /// Cell for analyze mode, or inline elements for verify mode.
    pub cell: Option<UnitCell>,
    pub elements_file: Option<PathBuf>,
    pub touchstone: Vec<PathBuf>,
    pub topology: FilterTopology,
    /// Explicit grid; `None` means the mode's default.
    pub grid: Option<SweepGrid>,
    pub outputs: Outputs,
}

/// Loads a config whose `mode` field selects the mode.
pub fn load_config(path: impl AsRef<Path>) -> Result<JobConfig> {
    let (root, base) = read_object(path.as_ref())?;
    let mode = match root.get("mode") {
        Some(Value::String(s)) => s.parse()?,
        Some(_) => return Err(Error::config("mode", "expected a string")),
        None => return Err(Error::config("mode", "missing required field")),
    };
    from_object(&root, mode, &base)
}

/// Loads a config for `mode`; a `mode` field in the file must agree.
pub fn load_config_for(path: impl AsRef<Path>, mode: Mode) -> Result<JobConfig> {
    let (root, base) = read_object(path.as_ref())?;
    if let Some(v) = root.get("mode") {
        let declared: Mode = v
            .as_str()
            .ok_or_else(|| Error::config("mode", "expected a string"))?
            .parse()?;
        if declared != mode {
            return Err(Error::config(
                "mode",
                format!("file declares `{declared}` but `{mode}` was requested"),
            ));
        }
    }
    from_object(&root, mode, &base)
}

fn read_object(path: &Path) -> Result<(Map<String, Value>, PathBuf)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let Value::Object(root) = value else {
        return Err(Error::config("<root>", "config must be a JSON object"));
    };
    let base = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((root, base))
}

fn required<'a>(obj: &'a Map<String, Value>, field: &str) -> Result<&'a Value> {
    obj.get(field)
        .ok_or_else(|| Error::config(field, "missing required field"))
}

fn object<'a>(value: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::config(field, "expected an object"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    match obj.keys().find(|k| !allowed.contains(k.as_str())) {
        Some(k) => Err(Error::config(
            format!("{prefix}{k}"),
            "field not accepted here",
        )),
        None => Ok(()),
    }
}

fn path_in(base: &Path, value: &Value, field: &str) -> Result<PathBuf> {
    let s = value
        .as_str()
        .ok_or_else(|| Error::config(field, "expected a path string"))?;
    let p = PathBuf::from(s);
    Ok(if p.is_absolute() { p } else { base.join(p) })
}

/// Parses an `elements` object with all eight values.
pub fn parse_elements(value: &Value, field: &str) -> Result<ElementSet> {
    let obj = object(value, field)?;
    reject_unknown(obj, &ElementSet::NAMES, &format!("{field}."))?;
    let mut v = [0.0; 8];
    for (slot, name) in v.iter_mut().zip(ElementSet::NAMES) {
        let key = format!("{field}.{name}");
        let kind = if name.starts_with('l') {
            Quantity::Inductance
        } else {
            Quantity::Capacitance
        };
        *slot = parse_positive(
            required(obj, name).map_err(|_| Error::config(&key, "missing required field"))?,
            kind,
            &key,
        )?;
    }
    ElementSet::from_values(v)
}

fn parse_targets(root: &Map<String, Value>) -> Result<SynthesisSpec> {
    let arr = required(root, "targets")?
        .as_array()
        .ok_or_else(|| Error::config("targets", "expected an array of four frequencies"))?;
    if arr.len() != 4 {
        return Err(Error::config(
            "targets",
            format!("expected 4 frequencies, got {}", arr.len()),
        ));
    }
    let mut targets = [0.0; 4];
    for (i, (t, v)) in targets.iter_mut().zip(arr).enumerate() {
        *t = parse_positive(v, Quantity::Frequency, &format!("targets[{i}]"))?;
    }
    let mut spec =
        SynthesisSpec::new(targets).map_err(|e| Error::config("targets", e.to_string()))?;
    if let Some(v) = root.get("r_scale") {
        spec = spec
            .with_r_scale(parse_positive(v, Quantity::Resistance, "r_scale")?)
            .map_err(|e| Error::config("r_scale", e.to_string()))?;
    }
    if let Some(v) = root.get("sign_pattern") {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::config("sign_pattern", "expected four signs"))?;
        let mut pattern = [0i8; 4];
        for (p, s) in pattern.iter_mut().zip(arr) {
            *p = match s.as_i64() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => {
                    return Err(Error::config(
                        "sign_pattern",
                        format!("entries must be -1 or 1, got {s}"),
                    ))
                }
            };
        }
        spec = spec
            .with_sign_pattern(pattern)
            .map_err(|e| Error::config("sign_pattern", e.to_string()))?;
    }
    Ok(spec)
}

fn parse_topology(value: &Value) -> Result<FilterTopology> {
    let obj = object(value, "topology")?;
    reject_unknown(
        obj,
        &["z0_line", "theta_per_side", "f_ref", "n_cells", "z_ref"],
        "topology.",
    )?;
    let mut t = FilterTopology::default();
    if let Some(v) = obj.get("z0_line") {
        t.z0_line = parse_positive(v, Quantity::Resistance, "topology.z0_line")?;
    }
    if let Some(v) = obj.get("theta_per_side") {
        t.theta_per_side = parse_quantity(v, Quantity::Angle, "topology.theta_per_side")?;
        if t.theta_per_side < 0.0 {
            return Err(Error::config(
                "topology.theta_per_side",
                "must be non-negative",
            ));
        }
    }
    if let Some(v) = obj.get("f_ref") {
        t.f_ref = parse_positive(v, Quantity::Frequency, "topology.f_ref")?;
    }
    if let Some(v) = obj.get("n_cells") {
        t.n_cells = v
            .as_u64()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::config("topology.n_cells", "expected a positive integer"))?
            as usize;
    }
    if let Some(v) = obj.get("z_ref") {
        t.z_ref = parse_positive(v, Quantity::Resistance, "topology.z_ref")?;
    }
    Ok(t)
}

fn parse_grid(value: &Value) -> Result<SweepGrid> {
    let obj = object(value, "grid")?;
    reject_unknown(obj, &["f_start", "f_stop", "n_points"], "grid.")?;
    let f_start = parse_positive(
        required(obj, "f_start")
            .map_err(|_| Error::config("grid.f_start", "missing required field"))?,
        Quantity::Frequency,
        "grid.f_start",
    )?;
    let f_stop = parse_positive(
        required(obj, "f_stop")
            .map_err(|_| Error::config("grid.f_stop", "missing required field"))?,
        Quantity::Frequency,
        "grid.f_stop",
    )?;
    let n_points = match obj.get("n_points") {
        Some(v) => v
            .as_u64()
            .filter(|&n| n >= 2)
            .ok_or_else(|| Error::config("grid.n_points", "expected an integer >= 2"))?
            as usize,
        None => SweepGrid::default().n_points,
    };
    SweepGrid::new(f_start, f_stop, n_points).map_err(|e| Error::config("grid", e.to_string()))
}

fn parse_outputs(value: &Value, base: &Path) -> Result<Outputs> {
    let obj = object(value, "outputs")?;
    reject_unknown(obj, &["dir", "formats"], "outputs.")?;
    let mut out = Outputs {
        dir: base.to_path_buf(),
        ..Outputs::default()
    };
    if let Some(v) = obj.get("dir") {
        out.dir = path_in(base, v, "outputs.dir")?;
    }
    if let Some(v) = obj.get("formats") {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::config("outputs.formats", "expected an array"))?;
        out.touchstone = false;
        out.csv = false;
        for f in arr {
            match f.as_str() {
                Some("touchstone") => out.touchstone = true,
                Some("csv") => out.csv = true,
                _ => {
                    return Err(Error::config(
                        "outputs.formats",
                        format!("unknown format {f}"),
                    ))
                }
            }
        }
    }
    Ok(out)
}

fn from_object(root: &Map<String, Value>, mode: Mode, base: &Path) -> Result<JobConfig> {
    reject_unknown(root, mode.allowed(), "")?;
    let mut job = JobConfig {
        mode,
        plans: Vec::new(),
        synthesis: None,
        cell: None,
        elements_file: None,
        touchstone: Vec::new(),
        topology: FilterTopology::default(),
        grid: None,
        outputs: Outputs {
            dir: base.to_path_buf(),
            ..Outputs::default()
        },
    };
    if let Some(v) = root.get("outputs") {
        job.outputs = parse_outputs(v, base)?;
    }
    if let Some(v) = root.get("topology") {
        job.topology = parse_topology(v)?;
    }
    if let Some(v) = root.get("grid") {
        job.grid = Some(parse_grid(v)?);
    }

    match mode {
        Mode::Plan => {
            let arr = required(root, "plans")?
                .as_array()
                .filter(|a| !a.is_empty())
                .ok_or_else(|| Error::config("plans", "expected a non-empty array"))?;
            for (i, p) in arr.iter().enumerate() {
                let field = format!("plans[{i}]");
                let obj = object(p, &field)?;
                reject_unknown(obj, &["f_rf", "f_lo"], &format!("{field}."))?;
                let get = |k: &str| {
                    let key = format!("{field}.{k}");
                    obj.get(k)
                        .ok_or_else(|| Error::config(&key, "missing required field"))
                        .and_then(|v| parse_positive(v, Quantity::Frequency, &key))
                };
                job.plans.push((get("f_rf")?, get("f_lo")?));
            }
        }
        Mode::Synth => {
            job.synthesis = Some(parse_targets(root)?);
        }
        Mode::Analyze => {
            let elements = parse_elements(required(root, "elements")?, "elements")?;
            let mut cell = UnitCell::new(elements)?;
            if let Some(v) = root.get("convention") {
                let s = v
                    .as_str()
                    .ok_or_else(|| Error::config("convention", "expected a string"))?;
                cell = cell.with_convention(
                    s.parse()
                        .map_err(|e: Error| Error::config("convention", e.to_string()))?,
                );
            }
            if let Some(v) = root.get("q_factor") {
                let q = parse_positive(v, Quantity::Number, "q_factor")?;
                cell = cell.with_q(q)?;
            }
            if let Some(v) = root.get("cell_length") {
                cell =
                    cell.with_cell_length(parse_positive(v, Quantity::Length, "cell_length")?)?;
            }
            job.cell = Some(cell);
        }
        Mode::Verify => {
            job.synthesis = Some(parse_targets(root)?);
            match (root.get("elements"), root.get("elements_file")) {
                (Some(v), None) => job.cell = Some(UnitCell::new(parse_elements(v, "elements")?)?),
                (None, Some(v)) => job.elements_file = Some(path_in(base, v, "elements_file")?),
                (Some(_), Some(_)) => {
                    return Err(Error::config(
                        "elements_file",
                        "give either elements or elements_file, not both",
                    ))
                }
                (None, None) => {
                    return Err(Error::config(
                        "elements",
                        "missing required field (or elements_file)",
                    ))
                }
            }
            if let Some(v) = root.get("touchstone") {
                let arr = v
                    .as_array()
                    .ok_or_else(|| Error::config("touchstone", "expected an array of paths"))?;
                for (i, p) in arr.iter().enumerate() {
                    job.touchstone
                        .push(path_in(base, p, &format!("touchstone[{i}]"))?);
                }
            }
        }
    }
    Ok(job)
}

/// Reads an element file written by synth mode (`{"elements": {...}}`).
pub fn read_elements_file(path: impl AsRef<Path>) -> Result<ElementSet> {
    let path = path.as_ref();
    let (root, _) = read_object(path)?;
    parse_elements(required(&root, "elements")?, "elements")
}

pub fn elements_json(e: &ElementSet) -> Value {
    let mut m = Map::new();
    for (name, v) in ElementSet::NAMES.iter().zip(e.values()) {
        m.insert((*name).to_string(), json!(v));
    }
    Value::Object(m)
}

impl JobConfig {
    /// The job with every quantity in SI, for audit.
    pub fn echo(&self) -> Value {
        let mut m = Map::new();
        m.insert("mode".into(), json!(self.mode.as_str()));
        if !self.plans.is_empty() {
            let plans: Vec<Value> = self
                .plans
                .iter()
                .map(|(rf, lo)| json!({"f_rf_hz": rf, "f_lo_hz": lo}))
                .collect();
            m.insert("plans".into(), Value::Array(plans));
        }
        if let Some(s) = &self.synthesis {
            m.insert("targets_hz".into(), json!(s.targets));
            m.insert("r_scale_ohm".into(), json!(s.r_scale));
            m.insert("sign_pattern".into(), json!(s.sign_pattern));
        }
        if let Some(c) = &self.cell {
            m.insert("elements".into(), elements_json(&c.elements));
            m.insert("convention".into(), json!(c.convention.as_str()));
            m.insert("q_factor".into(), json!(c.q_factor));
            m.insert("cell_length_m".into(), json!(c.cell_length));
        }
        if let Some(p) = &self.elements_file {
            m.insert("elements_file".into(), json!(p.display().to_string()));
        }
        if !self.touchstone.is_empty() {
            let t: Vec<String> = self
                .touchstone
                .iter()
                .map(|p| p.display().to_string())
                .collect();
            m.insert("touchstone".into(), json!(t));
        }
        if matches!(self.mode, Mode::Synth | Mode::Analyze) {
            let t = &self.topology;
            m.insert(
                "topology".into(),
                json!({
                    "z0_line_ohm": t.z0_line,
                    "theta_per_side_rad": t.theta_per_side,
                    "f_ref_hz": t.f_ref,
                    "n_cells": t.n_cells,
                    "z_ref_ohm": t.z_ref,
                }),
            );
            if let Some(g) = &self.grid {
                m.insert(
                    "grid".into(),
                    json!({"f_start_hz": g.f_start, "f_stop_hz": g.f_stop, "n_points": g.n_points}),
                );
            }
        }
        m.insert(
            "out_dir".into(),
            json!(self.outputs.dir.display().to_string()),
        );
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecrlh::SeriesConvention;
    use std::io::Write;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn plan_config() {
        let f = write(r#"{"mode": "plan", "plans": [{"f_rf": "1.4 GHz", "f_lo": "1.15 GHz"}]}"#);
        let job = load_config(f.path()).unwrap();
        assert_eq!(job.plans, vec![(1.4e9, 1.15e9)]);
    }

    #[test]
    fn reference_elements() {
        let f = write(
            r#"{"elements": {"c_r_c": "2.6 pF", "l_l_c": "3.7 nH", "l_l_d": "3.3 nH", "c_r_d": "1.9 pF",
                "l_r_c": "6.4 nH", "c_l_c": "1.5 pF", "c_l_d": "1.3 pF", "l_r_d": "4.8 nH"},
               "convention": "half-series", "q_factor": 80}"#,
        );
        let job = load_config_for(f.path(), Mode::Analyze).unwrap();
        let cell = job.cell.unwrap();
        assert_eq!(cell.elements, ElementSet::reference_qbnf());
        assert_eq!(cell.convention, SeriesConvention::HalfSeries);
        assert_eq!(cell.q_factor, Some(80.0));
    }

    fn field_of(r: Result<JobConfig>) -> String {
        match r {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn missing_targets_named() {
        let f = write(r#"{"r_scale": 50}"#);
        assert_eq!(field_of(load_config_for(f.path(), Mode::Synth)), "targets");
    }

    #[test]
    fn rejections() {
        let f = write(r#"{"targets": ["1 GHz", "2 GHz", "3 GHz", "4 furlong"]}"#);
        assert_eq!(
            field_of(load_config_for(f.path(), Mode::Synth)),
            "targets[3]"
        );
        let f = write(r#"{"targets": ["1 GHz", "2 GHz", "3 GHz", "-4 GHz"]}"#);
        assert_eq!(
            field_of(load_config_for(f.path(), Mode::Synth)),
            "targets[3]"
        );
        let f = write(r#"{"targets": ["1 GHz", "2 GHz", "3 GHz", "4 GHz"], "elements": {}}"#);
        assert_eq!(field_of(load_config_for(f.path(), Mode::Synth)), "elements");
        let f = write(r#"{"mode": "plan", "plans": [{"f_rf": 1, "f_lo": 2}]}"#);
        assert_eq!(field_of(load_config_for(f.path(), Mode::Synth)), "mode");
        let f = write(r#"{"plans": [{"f_rf": 1, "f_lo": 2}]}"#);
        assert_eq!(field_of(load_config(f.path())), "mode");
        let f = write(r#"{"elements": {"c_r_c": "2.6 pF"}}"#);
        assert_eq!(
            field_of(load_config_for(f.path(), Mode::Analyze)),
            "elements.l_l_c"
        );
        let f = write(
            r#"{"targets": ["1 GHz", "2 GHz", "3 GHz", "4 GHz"], "grid": {"f_start": "1 GHz"}}"#,
        );
        assert_eq!(
            field_of(load_config_for(f.path(), Mode::Synth)),
            "grid.f_stop"
        );
    }

    #[test]
    fn synth_options() {
        let f = write(
            r#"{"targets": ["0.9 GHz", "1.3 GHz", "2.55 GHz", "3.35 GHz"], "r_scale": "100 ohm",
                "sign_pattern": [1, -1, 1, -1], "grid": {"f_start": "0.5 GHz", "f_stop": "4 GHz", "n_points": 101},
                "topology": {"theta_per_side": "30 deg", "n_cells": 2}}"#,
        );
        let job = load_config_for(f.path(), Mode::Synth).unwrap();
        let spec = job.synthesis.unwrap();
        assert_eq!(spec.targets, [0.9e9, 1.3e9, 2.55e9, 3.35e9]);
        assert_eq!(spec.r_scale, 100.0);
        assert_eq!(spec.sign_pattern, [1, -1, 1, -1]);
        assert_eq!(job.grid.unwrap().n_points, 101);
        assert_eq!(job.topology.n_cells, 2);
        assert_eq!(job.topology.theta_per_side, 30f64.to_radians());
        let echo = job.echo();
        assert_eq!(echo["targets_hz"][2], json!(2.55e9));
    }

    #[test]
    fn verify_paths_resolve_against_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.json");
        fs::write(
            &path,
            r#"{"targets": [1e9, 2e9, 3e9, 4e9], "elements_file": "elements.json", "touchstone": ["a.s2p"]}"#,
        )
        .unwrap();
        let job = load_config_for(&path, Mode::Verify).unwrap();
        assert_eq!(job.elements_file.unwrap(), dir.path().join("elements.json"));
        assert_eq!(job.touchstone, vec![dir.path().join("a.s2p")]);
    }
}
