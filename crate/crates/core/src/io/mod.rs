//! File formats: generator files, surface manifests, path and report JSON,
//! and DOT/SVG drawings.

mod manifest;
mod render;
mod report;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use manifest::{load_manifest, manifest_json, manifest_of, GluingEntry, Manifest};
pub use render::{cayley_dot, copy_graph_dot, default_viewport, sheet_svg, Viewport};
pub use report::{path_json, path_value, AngleSpot, SurfaceCheckReport};

use crate::group::GroupError;
use crate::linalg::Mat2;
use crate::psv::PsvError;
use crate::scalar::Rational;
use crate::surface::SurfaceError;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot access {path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown sheet {0:?}")]
    UnknownSheet(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Psv(#[from] PsvError),
}

/// `{"generators": [[["p/q", "p/q"], ["p/q", "p/q"]], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsFile {
    pub generators: Vec<Mat2<Rational>>,
}

pub fn parse_generators(json: &str) -> Result<Vec<Mat2<Rational>>, IoError> {
    let file: GeneratorsFile = serde_json::from_str(json)?;
    if file.generators.is_empty() {
        return Err(IoError::Invalid("no generators given".into()));
    }
    Ok(file.generators)
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    let fail = |e: std::io::Error| IoError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(fail)?;
    }
    std::fs::write(path, contents).map_err(fail)
}

pub fn load_generators(path: &Path) -> Result<Vec<Mat2<Rational>>, IoError> {
    parse_generators(&read_file(path)?)
}

/// Significant digits kept for floats in written output.
pub const FLOAT_DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON tree to [`FLOAT_DIGITS`] digits.
pub fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x, FLOAT_DIGITS))) {
                *n = r;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with floats rounded, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    let mut out = serde_json::to_string_pretty(&v)?;
    out.push('\n');
    Ok(out)
}

/// Settings shared by every command of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub group: PathBuf,
    pub radius: usize,
    pub cut: usize,
    /// Largest cut examined by end estimates; `None` means `R − 1`.
    pub r_max: Option<usize>,
    pub max_len: f64,
    pub event_budget: usize,
    pub probe_steps: usize,
    pub index_bound: u64,
    pub out: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(group: impl Into<PathBuf>, radius: usize) -> Self {
        Self {
            group: group.into(),
            radius,
            cut: radius.saturating_sub(1),
            r_max: None,
            max_len: 10.0,
            event_budget: 10_000,
            probe_steps: 720,
            index_bound: crate::psv::DEFAULT_INDEX_BOUND,
            out: PathBuf::from("out"),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), IoError> {
        let bad = |m: String| Err(IoError::Invalid(m));
        if self.cut >= self.radius {
            return bad(format!("cut {} must be below radius {}", self.cut, self.radius));
        }
        if let Some(r) = self.r_max {
            if r >= self.radius {
                return bad(format!("r_max {r} must be below radius {}", self.radius));
            }
        }
        if !(self.max_len > 0.0 && self.max_len.is_finite()) {
            return bad(format!("max length {} must be positive", self.max_len));
        }
        if self.event_budget == 0 || self.probe_steps == 0 || self.index_bound == 0 {
            return bad("budgets must be positive".into());
        }
        Ok(())
    }
}
