//! Command-line front end: atom reports, H2 curve generation and comparison
//! against a reference curve.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use dimscale::interp::{
    build_curve, exact_epsilon3, interpolate_atom, percent_error, to_hartree, CurvePoint, Eps1Source, PotentialCurve,
};
use dimscale::large_d::GramianForm;
use dimscale::optim::OptimSettings;
use dimscale::{AtomSpec, Element, PerturbCoeffs};

/// Restart count used when neither `--restarts` nor the environment sets one.
pub const DEFAULT_RESTARTS: usize = 16;
pub const RESTARTS_ENV: &str = "DIMSCALE_RESTARTS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: line {line}: {reason}")]
    MalformedCsv { path: PathBuf, line: u64, reason: String },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("no overlap between the computed grid [{lo}, {hi}] and the reference range [{ref_lo}, {ref_hi}]")]
    EmptyOverlap { lo: f64, hi: f64, ref_lo: f64, ref_hi: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgs(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Write { .. } => 4,
            CliError::MalformedCsv { .. } | CliError::Read { .. } | CliError::EmptyOverlap { .. } => 5,
        }
    }
}

impl From<dimscale::Error> for CliError {
    fn from(e: dimscale::Error) -> Self {
        match e {
            dimscale::Error::Domain { .. } => CliError::InvalidArgs(e.to_string()),
            dimscale::Error::NonConvergence(_) => CliError::NonConvergence(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dimscale", version, about = "Dimensional interpolation of atomic and H2 ground-state energies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Base seed for optimizer restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Optimizer restarts per minimization.
    #[arg(long, global = true, env = RESTARTS_ENV, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,

    /// Simplex-diameter tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Output file (stdout if omitted).
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolated ground-state energy of He, Li or Be.
    Atom {
        #[arg(long)]
        element: String,
    },
    /// H2 potential curve on a uniform grid.
    H2Curve {
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        #[arg(long, default_value_t = 6.0)]
        r_max: f64,
        #[arg(long, default_value_t = 56)]
        points: usize,
    },
    /// Compare the binding curve with a reference `R,E` curve in hartree.
    Compare {
        #[arg(long)]
        reference: PathBuf,
        /// Previously written curve; computed on the grid below if omitted.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        #[arg(long, default_value_t = 6.0)]
        r_max: f64,
        #[arg(long, default_value_t = 56)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Atom,
    H2Curve,
    Compare,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub element: Option<Element>,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub settings: OptimSettings,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub reference_path: Option<PathBuf>,
    pub curve_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.restarts == 0 {
            return Err(CliError::InvalidArgs("--restarts must be at least 1".into()));
        }
        if !(cli.tol > 0.0) {
            return Err(CliError::InvalidArgs("--tol must be positive".into()));
        }
        let settings = OptimSettings {
            seed: cli.seed,
            restarts: cli.restarts,
            tol: cli.tol,
            ..OptimSettings::default()
        };
        let mut config = RunConfig {
            command: CommandKind::Atom,
            element: None,
            r_min: 0.5,
            r_max: 6.0,
            points: 56,
            settings,
            output_format: OutputFormat::Text,
            output_path: cli.output,
            reference_path: None,
            curve_path: None,
        };
        let grid = |config: &mut RunConfig, r_min: f64, r_max: f64, points: usize| {
            if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
                return Err(CliError::InvalidArgs(format!("need 0 < r-min < r-max, got [{r_min}, {r_max}]")));
            }
            if points < 2 {
                return Err(CliError::InvalidArgs(format!("--points must be at least 2, got {points}")));
            }
            config.r_min = r_min;
            config.r_max = r_max;
            config.points = points;
            Ok(())
        };
        match cli.command {
            Command::Atom { element } => {
                config.element = Some(element.parse::<Element>().map_err(|e| CliError::InvalidArgs(e.to_string()))?);
                config.output_format = cli.format.unwrap_or(OutputFormat::Text);
                if config.output_format == OutputFormat::Csv {
                    return Err(CliError::InvalidArgs("atom reports are text or json".into()));
                }
            }
            Command::H2Curve { r_min, r_max, points } => {
                config.command = CommandKind::H2Curve;
                grid(&mut config, r_min, r_max, points)?;
                config.output_format = cli.format.unwrap_or(OutputFormat::Csv);
                if config.output_format == OutputFormat::Text {
                    return Err(CliError::InvalidArgs("curves are csv or json".into()));
                }
            }
            Command::Compare {
                reference,
                curve,
                r_min,
                r_max,
                points,
            } => {
                config.command = CommandKind::Compare;
                grid(&mut config, r_min, r_max, points)?;
                config.reference_path = Some(reference);
                config.curve_path = curve;
                config.output_format = cli.format.unwrap_or(OutputFormat::Text);
                if config.output_format == OutputFormat::Csv {
                    return Err(CliError::InvalidArgs("comparison reports are text or json".into()));
                }
            }
        }
        Ok(config)
    }
}

/// Formats `x` with nine significant digits in plain decimal notation.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomReport {
    pub element: Element,
    pub z: u32,
    pub lambda: f64,
    pub xi0: f64,
    pub eps1: BTreeMap<&'static str, f64>,
    pub epsinf: f64,
    pub gramian_form: GramianForm,
    pub radii: Vec<f64>,
    pub cosines: Vec<f64>,
    pub coeffs: PerturbCoeffs,
    pub default_source: &'static str,
    pub eps3: BTreeMap<&'static str, f64>,
    pub eps3_hartree: BTreeMap<&'static str, f64>,
    pub exact_eps3: f64,
    pub percent_error: BTreeMap<&'static str, f64>,
}

pub fn atom_report(element: Element, settings: &OptimSettings) -> Result<AtomReport, CliError> {
    let atom = AtomSpec::new(element);
    let run = interpolate_atom(&atom, settings)?;
    let exact = exact_epsilon3(element);
    let mut report = AtomReport {
        element,
        z: atom.z,
        lambda: atom.lambda,
        xi0: run.xi0,
        eps1: BTreeMap::new(),
        epsinf: run.epsinf,
        gramian_form: run.gramian_form,
        radii: run.geometry.radii().to_vec(),
        cosines: run.geometry.cosines().to_vec(),
        coeffs: run.coeffs,
        default_source: run.default_source.label(),
        eps3: BTreeMap::new(),
        eps3_hartree: BTreeMap::new(),
        exact_eps3: exact,
        percent_error: BTreeMap::new(),
    };
    for source in Eps1Source::ALL {
        let (Some(eps1), Some(eps3)) = (run.eps1(source), run.epsilon3(source)) else {
            continue;
        };
        let label = source.label();
        report.eps1.insert(label, eps1);
        report.eps3.insert(label, eps3);
        report.eps3_hartree.insert(label, to_hartree(eps3, atom.z, 3.0)?);
        report.percent_error.insert(label, percent_error(eps3, exact));
    }
    Ok(report)
}

impl AtomReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "element        {} (Z = {}, lambda = {:.6})", self.element, self.z, self.lambda);
        let _ = writeln!(s, "D = 1          xi0 = {:.6}", self.xi0);
        for (label, v) in &self.eps1 {
            let _ = writeln!(s, "               eps1 [{label}] = {v:.6}");
        }
        let _ = writeln!(s, "D -> inf       eps_inf = {:.6}  ({:?} Gramian)", self.epsinf, self.gramian_form);
        let _ = writeln!(s, "               radii   = {:?}", rounded(&self.radii));
        let _ = writeln!(s, "               cosines = {:?}", rounded(&self.cosines));
        let _ = writeln!(
            s,
            "first order    eps1^(1) = {:.6}  eps3^(1) = {:.6}  eps_inf^(1) = {:.6}",
            self.coeffs.eps1_1, self.coeffs.eps3_1, self.coeffs.epsinf_1
        );
        let _ = writeln!(s, "D = 3          exact eps3 = {:.6}", self.exact_eps3);
        for (label, v) in &self.eps3 {
            let marker = if *label == self.default_source { " *" } else { "" };
            let _ = writeln!(
                s,
                "               eps3 [{label}] = {v:.6}  ({:.6} hartree, error {:.2}%){marker}",
                self.eps3_hartree[label], self.percent_error[label]
            );
        }
        s
    }
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e6).round() / 1e6).collect()
}

pub fn write_curve_csv<W: Write>(curve: &PotentialCurve, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["R", "eps1_scaled", "epsinf_scaled", "eps3", "binding"])?;
    for p in &curve.points {
        w.write_record([sig9(p.r), sig9(p.eps1_scaled), sig9(p.epsinf_scaled), sig9(p.eps3), sig9(p.binding)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(R, E)` pairs from a CSV with an `R` column and an energy column
/// named `E` or `binding`.
pub fn read_curve_csv(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let malformed = |line: u64, reason: String| CliError::MalformedCsv {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let file = fs::File::open(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let col = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
    let (Some(r_col), Some(e_col)) = (col(&["R"]), col(&["E", "binding"])) else {
        return Err(malformed(1, format!("expected columns R and E, found {:?}", headers.iter().collect::<Vec<_>>())));
    };

    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let line = k as u64 + 2;
        let record = record.map_err(|e| malformed(line, e.to_string()))?;
        let field = |i: usize| -> Result<f64, CliError> {
            let raw = record.get(i).ok_or_else(|| malformed(line, "missing field".into()))?;
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(line, format!("not a number: {raw:?}")))
        };
        let (r, e) = (field(r_col)?, field(e_col)?);
        if let Some(&(prev, _)) = rows.last() {
            if !(r > prev) {
                return Err(malformed(line, format!("R must increase strictly ({r} after {prev})")));
            }
        }
        rows.push((r, e));
    }
    if rows.len() < 2 {
        return Err(malformed(rows.len() as u64 + 1, "need at least two data rows".into()));
    }
    Ok(rows)
}

/// Piecewise-linear interpolation of sorted `(x, y)` data; `None` outside.
pub fn interpolate_linear(data: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (data.first()?, data.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let k = data.partition_point(|&(xi, _)| xi < x);
    if data[k].0 == x {
        return Some(data[k].1);
    }
    let ((x0, y0), (x1, y1)) = (data[k - 1], data[k]);
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rmse: f64,
    pub max_abs_err: f64,
    pub n_points_compared: usize,
    pub interpolation_method_for_grid_mismatch: &'static str,
}

impl ComparisonReport {
    pub fn to_text(&self) -> String {
        format!(
            "compared {} points (reference interpolated {})\nrmse        {:.6} hartree\nmax |error| {:.6} hartree\n",
            self.n_points_compared, self.interpolation_method_for_grid_mismatch, self.rmse, self.max_abs_err
        )
    }
}

/// Compares computed `(R, V)` against a reference, on the computed grid
/// restricted to the reference's range.
pub fn compare_curves(computed: &[(f64, f64)], reference: &[(f64, f64)]) -> Result<ComparisonReport, CliError> {
    let errors: Vec<f64> = computed
        .iter()
        .filter_map(|&(r, v)| interpolate_linear(reference, r).map(|e| v - e))
        .collect();
    if errors.is_empty() {
        let lo = computed.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = computed.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        return Err(CliError::EmptyOverlap {
            lo,
            hi,
            ref_lo: reference.first().map_or(f64::NAN, |p| p.0),
            ref_hi: reference.last().map_or(f64::NAN, |p| p.0),
        });
    }
    let n = errors.len();
    Ok(ComparisonReport {
        rmse: (errors.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt(),
        max_abs_err: errors.iter().map(|e| e.abs()).fold(0.0, f64::max),
        n_points_compared: n,
        interpolation_method_for_grid_mismatch: "linear",
    })
}

fn emit(config: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => io::stdout().write_all(bytes).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn run_atom(config: &RunConfig) -> Result<AtomReport, CliError> {
    let element = config
        .element
        .ok_or_else(|| CliError::InvalidArgs("--element is required".into()))?;
    let report = atom_report(element, &config.settings)?;
    let bytes = match config.output_format {
        OutputFormat::Json => to_json(&report),
        _ => report.to_text().into_bytes(),
    };
    emit(config, &bytes)?;
    Ok(report)
}

fn compute_curve(config: &RunConfig) -> Result<PotentialCurve, CliError> {
    Ok(build_curve(config.r_min, config.r_max, config.points, &config.settings)?)
}

pub fn run_h2_curve(config: &RunConfig) -> Result<PotentialCurve, CliError> {
    let curve = compute_curve(config)?;
    let bytes = match config.output_format {
        OutputFormat::Json => to_json(&curve.points),
        _ => {
            let mut buf = Vec::new();
            write_curve_csv(&curve, &mut buf).map_err(|e| CliError::Write {
                path: PathBuf::from("<buffer>"),
                source: io::Error::other(e),
            })?;
            buf
        }
    };
    emit(config, &bytes)?;
    Ok(curve)
}

pub fn run_compare(config: &RunConfig) -> Result<ComparisonReport, CliError> {
    let reference_path = config
        .reference_path
        .as_deref()
        .ok_or_else(|| CliError::InvalidArgs("--reference is required".into()))?;
    let reference = read_curve_csv(reference_path)?;
    let computed: Vec<(f64, f64)> = match &config.curve_path {
        Some(path) => read_curve_csv(path)?,
        None => compute_curve(config)?
            .points
            .iter()
            .map(|p: &CurvePoint| (p.r, p.binding))
            .collect(),
    };
    let report = compare_curves(&computed, &reference)?;
    let bytes = match config.output_format {
        OutputFormat::Json => to_json(&report),
        _ => report.to_text().into_bytes(),
    };
    emit(config, &bytes)?;
    Ok(report)
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        CommandKind::Atom => run_atom(config).map(drop),
        CommandKind::H2Curve => run_h2_curve(config).map(drop),
        CommandKind::Compare => run_compare(config).map(drop),
    }
}
