//! Experiment harness: config parsing, CSV ingestion/emission, the
//! multi-method experiment runner, and the comparison table.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{global_constrained_fit_with_eval, shepard_eval, BaselineError};
use crate::geometry::Rect;
use crate::kernels::{KernelError, KernelFamily, KernelSpec};
use crate::metrics::{error_report, eval_grid, random_nodes, ErrorReport, TestFunction};
use crate::pu::{self, PuConfig, PuError, PuMode};
use crate::Point2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("config: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error("ingest: {path}:{line}: {msg}")]
    CsvParse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("kernel: {0}")]
    Kernel(#[from] KernelError),
    #[error("fit ({method}): {source}")]
    Fit { method: Method, source: PuError },
    #[error("fit (global): {0}")]
    Global(#[from] BaselineError),
    #[error("report: {0}")]
    Report(#[from] serde_json::Error),
}

/// Interpolation methods known to the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Positivity-constrained partition-of-unity fit.
    Pcpu,
    /// Plain (unconstrained) partition-of-unity fit.
    Pu,
    /// Classical Shepard inverse-distance approximant.
    Shepard,
    /// Single-patch constrained fit.
    Global,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Pcpu, Method::Pu, Method::Shepard, Method::Global];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "pcpu" => Ok(Method::Pcpu),
            "pu" => Ok(Method::Pu),
            "shepard" => Ok(Method::Shepard),
            "global" => Ok(Method::Global),
            other => Err(CliError::Config(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Pcpu => "pcpu",
            Method::Pu => "pu",
            Method::Shepard => "shepard",
            Method::Global => "global",
        };
        f.write_str(s)
    }
}

fn default_eval_side() -> usize {
    80
}

fn default_seed() -> u64 {
    1
}

fn default_shepard_power() -> f64 {
    2.0
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Flat experiment configuration (TOML on disk; CLI flags override fields).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub methods: Vec<Method>,
    /// `wendland` or `imq`.
    pub kernel: String,
    pub eps: f64,
    /// Synthetic node count; ignored when `data` is set.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub d_override: Option<usize>,
    /// `f1` or `f2`; synthetic mode. Mutually exclusive with `data`.
    #[serde(default)]
    pub function: Option<String>,
    /// Path to a `x,y,f` CSV dataset.
    #[serde(default)]
    pub data: Option<PathBuf>,
    #[serde(default = "default_eval_side")]
    pub eval_side: usize,
    #[serde(default = "default_shepard_power")]
    pub shepard_power: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(toml::from_str(&text)?)
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec, CliError> {
        let family = match self.kernel.to_ascii_lowercase().as_str() {
            "wendland" => KernelFamily::WendlandC2,
            "imq" => KernelFamily::Imq,
            other => return Err(CliError::Config(format!("unknown kernel `{other}`"))),
        };
        Ok(KernelSpec::new(family, self.eps)?)
    }

    pub fn test_function(&self) -> Result<Option<TestFunction>, CliError> {
        match self.function.as_deref() {
            None => Ok(None),
            Some(s) => match s.to_ascii_lowercase().as_str() {
                "f1" => Ok(Some(TestFunction::F1)),
                "f2" => Ok(Some(TestFunction::F2)),
                other => Err(CliError::Config(format!("unknown function `{other}`"))),
            },
        }
    }
}

/// Per-method result block. Error metrics are present only when the true
/// function is known (synthetic mode).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MethodResult {
    pub mae: Option<f64>,
    pub rmse: Option<f64>,
    pub min_value: f64,
    pub n_negative: usize,
    pub n_eval: usize,
    /// Added constraint counts per patch (constrained methods only).
    pub constraints_per_patch: Option<Vec<usize>>,
    pub constrained_patches: Option<usize>,
}

/// Experiment output: the deterministic numeric section plus timings, which
/// are reported separately and never asserted on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub results: BTreeMap<String, MethodResult>,
    pub timings_seconds: BTreeMap<String, f64>,
}

impl Report {
    /// Serialization of the numeric section alone; byte-identical across
    /// repeated runs of the same config.
    pub fn results_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(&self.results)?)
    }
}

fn method_result(
    truth: Option<&[f64]>,
    approx: &[f64],
    constraints: Option<Vec<usize>>,
) -> MethodResult {
    let (mae, rmse, min_value, n_negative) = match truth {
        Some(t) => {
            let ErrorReport {
                mae,
                rmse,
                min_value,
                n_negative,
                ..
            } = error_report(t, approx).expect("matching grid lengths");
            (Some(mae), Some(rmse), min_value, n_negative)
        }
        None => {
            let min_value = approx.iter().cloned().fold(f64::INFINITY, f64::min);
            let n_negative = approx.iter().filter(|&&v| v < -1e-10).count();
            (None, None, min_value, n_negative)
        }
    };
    let constrained_patches = constraints
        .as_ref()
        .map(|c| c.iter().filter(|&&k| k > 0).count());
    MethodResult {
        mae,
        rmse,
        min_value,
        n_negative,
        n_eval: approx.len(),
        constraints_per_patch: constraints,
        constrained_patches,
    }
}

/// Runs one method of the experiment on prepared data, returning the
/// approximant values on the grid plus constraint counts where applicable.
pub fn run_method(
    method: Method,
    points: &[Point2],
    values: &[f64],
    grid: &[Point2],
    config: &Config,
) -> Result<(Vec<f64>, Option<Vec<usize>>), CliError> {
    let kernel = config.kernel_spec()?;
    match method {
        Method::Shepard => Ok((
            shepard_eval(points, values, grid, config.shepard_power),
            None,
        )),
        Method::Global => {
            let model = global_constrained_fit_with_eval(points, values, grid, kernel, Rect::UNIT)?;
            let approx = model
                .evaluate(grid)
                .map_err(|source| CliError::Fit { method, source })?;
            Ok((approx, Some(model.constraints_per_patch())))
        }
        Method::Pu | Method::Pcpu => {
            let mode = if method == Method::Pu {
                PuMode::Plain
            } else {
                PuMode::Positive
            };
            let pu_config = PuConfig {
                kernel,
                mode,
                domain: Rect::UNIT,
                d_override: config.d_override,
            };
            let model = pu::fit_with_eval(points, values, grid, pu_config)
                .map_err(|source| CliError::Fit { method, source })?;
            let approx = model
                .evaluate(grid)
                .map_err(|source| CliError::Fit { method, source })?;
            let constraints = (method == Method::Pcpu).then(|| model.constraints_per_patch());
            Ok((approx, constraints))
        }
    }
}

/// Obtains the experiment dataset: a CSV file when configured, otherwise
/// seeded random nodes sampled from the configured test function.
pub fn load_dataset(config: &Config) -> Result<(Vec<Point2>, Vec<f64>), CliError> {
    match (&config.data, config.test_function()?) {
        (Some(path), _) => load_csv(path),
        (None, Some(f)) => {
            let n = config.n.ok_or_else(|| {
                CliError::Config("synthetic mode needs `n` (node count)".into())
            })?;
            let points = random_nodes(n, config.seed);
            let values = points.iter().map(|p| f.eval(p)).collect();
            Ok((points, values))
        }
        (None, None) => Err(CliError::Config(
            "either `data` (CSV path) or `function` (f1/f2) is required".into(),
        )),
    }
}

/// Runs the full experiment: fits every configured method, writes one grid
/// CSV per method plus `report.json` under the output directory, and
/// returns the report. Never mutates input files.
pub fn run_experiment(config: &Config) -> Result<Report, CliError> {
    if config.methods.is_empty() {
        return Err(CliError::Config("`methods` must be nonempty".into()));
    }
    let (points, values) = load_dataset(config)?;
    let grid = eval_grid(config.eval_side, Rect::UNIT);
    let truth: Option<Vec<f64>> = config
        .test_function()?
        .filter(|_| config.data.is_none())
        .map(|f| grid.iter().map(|p| f.eval(p)).collect());

    fs::create_dir_all(&config.output_dir).map_err(|source| CliError::Io {
        path: config.output_dir.display().to_string(),
        source,
    })?;

    let mut results = BTreeMap::new();
    let mut timings = BTreeMap::new();
    for &method in &config.methods {
        let start = Instant::now();
        let (approx, constraints) = run_method(method, &points, &values, &grid, config)?;
        timings.insert(method.to_string(), start.elapsed().as_secs_f64());
        let grid_path = config.output_dir.join(format!("{method}_grid.csv"));
        write_grid_csv(&grid_path, &grid, &approx)?;
        results.insert(
            method.to_string(),
            method_result(truth.as_deref(), &approx, constraints),
        );
    }
    let report = Report {
        results,
        timings_seconds: timings,
    };
    write_report(&config.output_dir.join("report.json"), &report)?;
    Ok(report)
}

/// One row of the comparison table.
#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub method: Method,
    pub mae: f64,
    pub rmse: f64,
    pub min_value: f64,
    pub n_negative: usize,
}

/// Multi-method, multi-size comparison on synthetic data (the shape of the
/// benchmark tables): every method at every node count, one shared seed.
pub fn run_compare(config: &Config, n_list: &[usize]) -> Result<Vec<CompareRow>, CliError> {
    let f = config
        .test_function()?
        .ok_or_else(|| CliError::Config("compare needs `function` (f1/f2)".into()))?;
    let grid = eval_grid(config.eval_side, Rect::UNIT);
    let truth: Vec<f64> = grid.iter().map(|p| f.eval(p)).collect();
    let mut rows = Vec::new();
    for &n in n_list {
        let points = random_nodes(n, config.seed);
        let values: Vec<f64> = points.iter().map(|p| f.eval(p)).collect();
        for &method in &config.methods {
            let (approx, _) = run_method(method, &points, &values, &grid, config)?;
            let r = error_report(&truth, &approx).expect("matching grid lengths");
            rows.push(CompareRow {
                n,
                method,
                mae: r.mae,
                rmse: r.rmse,
                min_value: r.min_value,
                n_negative: r.n_negative,
            });
        }
    }
    Ok(rows)
}

pub fn format_compare_table(rows: &[CompareRow]) -> String {
    let mut out = String::from(format!(
        "{:>6}  {:<8} {:>12} {:>12} {:>12} {:>6}\n",
        "N", "method", "MAE", "RMSE", "min", "neg"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:>6}  {:<8} {:>12.4e} {:>12.4e} {:>12.4e} {:>6}\n",
            r.n, r.method, r.mae, r.rmse, r.min_value, r.n_negative
        ));
    }
    out
}

/// Reads a `x,y,f` CSV with a single header line. Rows must parse as three
/// finite floats with `(x, y)` in the unit square.
pub fn load_csv(path: &Path) -> Result<(Vec<Point2>, Vec<f64>), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let err = |line: usize, msg: String| CliError::CsvParse {
        path: path.display().to_string(),
        line,
        msg,
    };
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (i, row) in text.lines().enumerate().skip(1) {
        let line = i + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(err(line, format!("expected 3 fields, got {}", fields.len())));
        }
        let parse = |s: &str, name: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| err(line, format!("bad {name} value `{}`: {e}", s.trim())))
        };
        let x = parse(fields[0], "x")?;
        let y = parse(fields[1], "y")?;
        let f = parse(fields[2], "f")?;
        if !(x.is_finite() && y.is_finite() && f.is_finite()) {
            return Err(err(line, "non-finite value".into()));
        }
        points.push(Point2::new(x, y));
        values.push(f);
    }
    if points.is_empty() {
        return Err(err(1, "no data rows".into()));
    }
    Ok((points, values))
}

/// Writes a `x,y,f` CSV with 17 significant digits so a write/load
/// round-trip reproduces every value exactly.
pub fn write_grid_csv(path: &Path, points: &[Point2], values: &[f64]) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = fs::File::create(path).map_err(io_err)?;
    writeln!(out, "x,y,f").map_err(io_err)?;
    for (p, v) in points.iter().zip(values) {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", p.x, p.y, v).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_report(path: &Path, report: &Report) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)?;
    fs::write(path, json).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_parsing() {
        assert_eq!(Method::parse("PCPU").unwrap(), Method::Pcpu);
        assert!(Method::parse("spline").is_err());
    }

    #[test]
    fn config_toml_round_trip() {
        let text = r#"
            methods = ["pcpu", "pu"]
            kernel = "imq"
            eps = 1.0
            n = 300
            seed = 7
            function = "f1"
        "#;
        let config: Config = toml::from_str(text).unwrap();
        assert_eq!(config.methods, vec![Method::Pcpu, Method::Pu]);
        assert_eq!(config.eval_side, 80);
        assert_eq!(config.seed, 7);
        assert_eq!(config.test_function().unwrap(), Some(TestFunction::F1));
        assert!(config.kernel_spec().is_ok());
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"
            methods = ["pcpu"]
            kernel = "imq"
            eps = 1.0
            intensity = 12
        "#;
        assert!(toml::from_str::<Config>(text).is_err());
    }
}
