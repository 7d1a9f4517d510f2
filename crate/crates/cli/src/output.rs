//! CSV trajectories and JSON documents, plus readers for both.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use esdlab::analysis::{
    DarkPeriod, ExtremaMatch, Extremum, ExtremumKind, ModelSpec, ParamValue, SweepGrid, Trajectory,
};

use crate::error::CliError;

pub const CSV_HEADER: &str = "t,c_wootters,c_paper,e_h0,e_hI,purity";
pub const FORMAT_VERSION: u32 = 1;

/// Fixed-point with 12 decimals; `nan` for missing values.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let s = format!("{x:.12}");
    if s == "-0.000000000000" {
        s[1..].to_string()
    } else {
        s
    }
}

/// Model parameters as a key-sorted JSON object.
pub fn parameter_echo(model: &ModelSpec) -> BTreeMap<String, serde_json::Value> {
    model
        .parameters()
        .into_iter()
        .map(|(k, v)| {
            let v = match v {
                ParamValue::Number(x) => serde_json::json!(x),
                ParamValue::Text(s) => serde_json::json!(s),
            };
            (k, v)
        })
        .collect()
}

/// Renders a trajectory. `metadata` precedes the model parameters in the
/// comment block.
pub fn trajectory_csv(traj: &Trajectory, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    let params = traj.model.parameters().into_iter().map(|(k, v)| (k, v.to_string()));
    for (k, v) in metadata.iter().cloned().chain(params) {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let row = [
            s.t,
            s.wootters(),
            s.paper_cutoff(),
            s.energy_h0,
            s.energy_hi.unwrap_or(f64::NAN),
            s.purity,
        ];
        out.push_str(&row.map(format_value).join(","));
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn emit_trajectory_csv(traj: &Trajectory, metadata: &[(String, String)], path: &Path) -> Result<(), CliError> {
    write_file(path, &trajectory_csv(traj, metadata))
}

/// A trajectory CSV read back.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedCsv {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<[f64; 6]>,
}

impl ParsedCsv {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_trajectory_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (n, line) in text.lines().enumerate() {
        if let Some(comment) = line.strip_prefix("# ") {
            let (k, v) = comment.split_once('=').ok_or(format!("line {}: bad metadata", n + 1))?;
            metadata.push((k.to_string(), v.to_string()));
        } else if !header_seen {
            if line != CSV_HEADER {
                return Err(format!("line {}: unexpected header '{line}'", n + 1));
            }
            header_seen = true;
        } else {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
                .collect::<Result<_, _>>()?;
            let row: [f64; 6] = fields
                .try_into()
                .map_err(|_| format!("line {}: expected 6 fields", n + 1))?;
            rows.push(row);
        }
    }
    if !header_seen {
        return Err("missing header".into());
    }
    Ok(ParsedCsv { metadata, rows })
}

/// `file.csv` becomes `file.<tag>.csv`.
pub fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    match (path.file_stem(), path.extension()) {
        (Some(stem), Some(ext)) => {
            path.with_file_name(format!("{}.{tag}.{}", stem.to_string_lossy(), ext.to_string_lossy()))
        }
        _ => {
            let mut s = path.as_os_str().to_owned();
            s.push(format!(".{tag}"));
            PathBuf::from(s)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRecord {
    pub name: String,
    pub values: Vec<f64>,
}

/// Row-major boolean mask as alternating run lengths, the first run having
/// value `first`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLength {
    pub first: bool,
    pub runs: Vec<usize>,
}

impl RunLength {
    pub fn encode(mask: &[bool]) -> Self {
        let mut runs: Vec<usize> = Vec::new();
        let mut current = mask.first().copied().unwrap_or(false);
        let first = current;
        let mut len = 0;
        for &m in mask {
            if m == current {
                len += 1;
            } else {
                runs.push(len);
                current = m;
                len = 1;
            }
        }
        if len > 0 {
            runs.push(len);
        }
        RunLength { first, runs }
    }

    pub fn decode(&self) -> Vec<bool> {
        let mut out = Vec::new();
        let mut value = self.first;
        for &n in &self.runs {
            out.extend(std::iter::repeat_n(value, n));
            value = !value;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarkPeriodRecord {
    pub t_start: f64,
    pub t_end: f64,
    pub revived: bool,
}

impl From<&DarkPeriod> for DarkPeriodRecord {
    fn from(p: &DarkPeriod) -> Self {
        DarkPeriodRecord {
            t_start: p.t_start,
            t_end: p.t_end,
            revived: p.revived,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionRecord {
    pub value: f64,
    pub dark_periods: Vec<DarkPeriodRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub format: String,
    pub version: u32,
    pub preset: Option<String>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub variant: String,
    pub zero_tol: f64,
    pub x_axis: AxisRecord,
    pub y_axis: AxisRecord,
    /// `[rows, columns]`; rows follow the y axis.
    pub shape: [usize; 2],
    /// Row-major; `null` where the variant is undefined.
    pub values: Vec<Option<f64>>,
    pub dark_mask: RunLength,
    pub dark_fraction: f64,
    pub sections: Vec<SectionRecord>,
}

impl SweepDocument {
    pub fn new(grid: &SweepGrid, model: &ModelSpec, preset: Option<&str>, sections: Vec<SectionRecord>) -> Self {
        let mask: Vec<bool> = grid.dark_mask.iter().flatten().copied().collect();
        SweepDocument {
            format: "esdlab-sweep".into(),
            version: FORMAT_VERSION,
            preset: preset.map(str::to_string),
            parameters: parameter_echo(model),
            variant: grid.variant.name().into(),
            zero_tol: grid.zero_tol,
            x_axis: AxisRecord {
                name: grid.x_name.clone(),
                values: grid.x_values.clone(),
            },
            y_axis: AxisRecord {
                name: grid.y_name.clone(),
                values: grid.y_values.clone(),
            },
            shape: [grid.y_values.len(), grid.x_values.len()],
            values: grid
                .values
                .iter()
                .flatten()
                .map(|&v| (!v.is_nan()).then_some(v))
                .collect(),
            dark_mask: RunLength::encode(&mask),
            dark_fraction: grid.dark_fraction(),
            sections,
        }
    }

    /// Values as rows, `NaN` for nulls.
    pub fn value_rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.shape[1].max(1))
            .map(|row| row.iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremumRecord {
    pub time: f64,
    pub value: f64,
    pub kind: String,
}

impl From<&Extremum> for ExtremumRecord {
    fn from(e: &Extremum) -> Self {
        let kind = match e.kind {
            ExtremumKind::Min => "min",
            ExtremumKind::Max => "max",
        };
        ExtremumRecord {
            time: e.time,
            value: e.value,
            kind: kind.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub concurrence: usize,
    pub energy: usize,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremaRecord {
    pub observable: String,
    pub window: f64,
    pub concurrence_extrema: Vec<ExtremumRecord>,
    pub energy_extrema: Vec<ExtremumRecord>,
    pub pairs: Vec<PairRecord>,
    pub unpaired_concurrence: Vec<usize>,
    pub unpaired_energy: Vec<usize>,
    pub complete: bool,
}

impl ExtremaRecord {
    pub fn new(observable: &str, m: &ExtremaMatch) -> Self {
        ExtremaRecord {
            observable: observable.into(),
            window: m.window,
            concurrence_extrema: m.first.iter().map(Into::into).collect(),
            energy_extrema: m.second.iter().map(Into::into).collect(),
            pairs: m
                .pairs
                .iter()
                .map(|p| PairRecord {
                    concurrence: p.first,
                    energy: p.second,
                    offset: p.offset,
                })
                .collect(),
            unpaired_concurrence: m.unpaired_first.clone(),
            unpaired_energy: m.unpaired_second.clone(),
            complete: m.is_complete(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsdDocument {
    pub format: String,
    pub version: u32,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub source: String,
    pub cutoff: Option<usize>,
    pub t_max: f64,
    pub steps: usize,
    pub zero_tol: f64,
    pub min_width: usize,
    pub dark_periods: Vec<DarkPeriodRecord>,
    pub extrema: Vec<ExtremaRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareDocument {
    pub format: String,
    pub version: u32,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub t_max: f64,
    pub steps: usize,
    pub cutoff: usize,
    pub max_state_deviation: f64,
    pub max_concurrence_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn emit_json<T: Serialize>(doc: &T, path: &Path) -> Result<(), CliError> {
    write_file(path, &to_json(doc))
}
