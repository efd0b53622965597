//! Command-line front end for the `clone-invert` binary.
//!
//! Exit codes: 0 success, 1 invalid input, 2 oracle truncation failure,
//! 3 I/O failure.

mod config;
pub mod svg;

pub use config::FileConfig;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::analytic;
use crate::error::{ExperimentError, FockError};
use crate::experiment::{self, AxisRange, DiscrepancyReport, ScanAxis, ScanSpec, Target};
use crate::fock::{run_pipeline_with_state, TruncationPolicy, DEFAULT_TAIL_TOL};
use crate::params::{validate_params, ExperimentParams};
use crate::table::{round_sig, SweepTable, TableMetadata, SIGNIFICANT_DIGITS};
use svg::{Plot, Scale, Series};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Truncation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Truncation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Fock(f) => f.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::TruncationExceeded { .. } => CliError::Truncation(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<crate::error::ParamError> for CliError {
    fn from(e: crate::error::ParamError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<crate::error::AnalyticError> for CliError {
    fn from(e: crate::error::AnalyticError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "clone-invert",
    version,
    about = "Entanglement witness of a photon cloned and un-cloned through lossy channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form witness report at one point (JSON).
    Witness(WitnessArgs),
    /// Compare the Fock-space oracle with the closed form.
    Oracle(OracleArgs),
    /// Clone number needed for fixed witness levels, over eta2.
    Figure2(Figure2Args),
    /// Smallest resolvable eta2 change over a range of gains.
    Sensitivity(SensitivityArgs),
    /// Claimed gain-mismatch witness against the oracle, over epsilon.
    Mismatch(MismatchArgs),
    /// Cartesian sweep of closed-form quantities.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Validation(format!(
                "unknown format `{s}`, expected csv or json"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Flat TOML file with defaults for any flag (keys are flag names).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transmission before the first cloner.
    #[arg(long)]
    pub eta1: Option<f64>,
    /// Transmission between the cloners.
    #[arg(long)]
    pub eta2: Option<f64>,
    /// Transmission after the second cloner.
    #[arg(long)]
    pub eta3: Option<f64>,
    /// Gain of both cloners.
    #[arg(long)]
    pub g: Option<f64>,
    /// Gain of the first cloner.
    #[arg(long)]
    pub g1: Option<f64>,
    /// Gain of the inverse cloner (defaults to g1).
    #[arg(long)]
    pub g2: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Run the built-in validation grid instead of one point.
    #[arg(long)]
    pub grid: bool,
    /// Largest allowed absolute difference per quantity.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Allowed population of the two highest Fock levels.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Starting per-mode Fock cutoff (default: sized for the gain).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Fail instead of enlarging the cutoff.
    #[arg(long)]
    pub no_auto_grow: bool,
    /// Write the photon-number marginals of the final state as CSV.
    #[arg(long)]
    pub dump_marginals: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Figure2Args {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// start:stop:count, inside (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub eta2_range: Option<String>,
    /// Witness levels, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub levels: Option<Vec<f64>>,
    /// Also draw the curves; the table is written next to it as CSV.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// start:stop:count over g1.
    #[arg(long, allow_hyphen_values = true)]
    pub g_range: Option<String>,
    /// Smallest detectable witness change.
    #[arg(long)]
    pub delta_w_min: Option<f64>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MismatchArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// start:stop:count over epsilon = g2 - g1.
    #[arg(long, allow_hyphen_values = true)]
    pub eps_range: Option<String>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// axis=start:stop:count with axis one of eta1, eta2, eta3, g1, epsilon.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Vec<String>,
    /// Quantities to tabulate, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<String>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(params: &ParamArgs) -> Result<FileConfig, CliError> {
    match &params.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

/// Layers defaults, the config file and flags, in increasing priority.
fn resolve_params(
    args: &ParamArgs,
    cfg: &FileConfig,
    defaults: &[(&str, f64)],
) -> Result<ExperimentParams, CliError> {
    let mut map = BTreeMap::new();
    let flags = [
        ("eta1", args.eta1),
        ("eta2", args.eta2),
        ("eta3", args.eta3),
        ("g", args.g),
        ("g1", args.g1),
        ("g2", args.g2),
    ];
    for (key, flag) in flags {
        if let Some(v) = flag.or(cfg.f64(key)?) {
            map.insert(key.to_string(), v);
        }
    }
    // a gain flag replaces any gain from the file
    if args.g.is_some() && args.g1.is_none() {
        map.remove("g1");
    }
    if args.g1.is_some() && args.g.is_none() {
        map.remove("g");
    }
    let has_gain = map.contains_key("g") || map.contains_key("g1");
    for &(key, v) in defaults {
        let is_gain = key == "g" || key == "g1";
        if !map.contains_key(key) && !(is_gain && has_gain) {
            map.insert(key.to_string(), v);
        }
    }
    Ok(validate_params(&map)?)
}

fn range_arg(
    flag: &Option<String>,
    cfg: &FileConfig,
    key: &str,
    default: &str,
) -> Result<AxisRange, CliError> {
    let text = match flag {
        Some(s) => s.clone(),
        None => cfg.string(key)?.unwrap_or_else(|| default.to_string()),
    };
    text.parse::<AxisRange>()
        .map_err(|e| CliError::Validation(format!("--{key}: {e}")))
}

struct Outputs {
    out: Option<PathBuf>,
    format: Format,
}

impl Outputs {
    fn resolve(args: &OutputArgs, cfg: &FileConfig, default: Format) -> Result<Self, CliError> {
        let format = match args.format {
            Some(f) => f,
            None => match cfg.string("format")? {
                Some(s) => Format::parse(&s)?,
                None => default,
            },
        };
        let out = args.out.clone().or(cfg.string("out")?.map(PathBuf::from));
        Ok(Self { out, format })
    }

    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
        }
    }

    fn emit_table(&self, table: &SweepTable, stdout: &mut dyn Write) -> Result<(), CliError> {
        let text = match self.format {
            Format::Csv => table.to_csv_string(),
            Format::Json => table.to_json_string(),
        };
        self.emit(&text, stdout)
    }
}

fn svg_arg(flag: &Option<PathBuf>, cfg: &FileConfig) -> Result<Option<PathBuf>, CliError> {
    Ok(flag.clone().or(cfg.string("svg")?.map(PathBuf::from)))
}

fn backing_csv(svg: &Path) -> PathBuf {
    svg.with_extension("csv")
}

/// Fails early when `path` cannot be created or overwritten.
fn check_writable(path: &Path) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let bad = |why: &str| CliError::Io(format!("cannot write {}: {why}", path.display()));
    let meta = fs::metadata(&parent).map_err(|_| bad("directory does not exist"))?;
    if !meta.is_dir() {
        return Err(bad("parent is not a directory"));
    }
    if meta.permissions().readonly() {
        return Err(bad("directory is read-only"));
    }
    if let Ok(m) = fs::metadata(path) {
        if m.is_dir() {
            return Err(bad("it is a directory"));
        }
        if m.permissions().readonly() {
            return Err(bad("file is read-only"));
        }
    }
    Ok(())
}

fn check_all(paths: &[Option<&PathBuf>]) -> Result<(), CliError> {
    for p in paths.iter().flatten() {
        check_writable(p)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Rounds every number in a JSON value to the output precision.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => serde_json::Number::from_f64(round_sig(x, SIGNIFICANT_DIGITS))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

fn json_text<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Validation(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("json values serialize");
    s.push('\n');
    Ok(s)
}

fn execute(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Witness(a) => witness_cmd(a, stdout),
        Command::Oracle(a) => oracle_cmd(a, stdout),
        Command::Figure2(a) => figure2_cmd(a, stdout),
        Command::Sensitivity(a) => sensitivity_cmd(a, stdout, stderr),
        Command::Mismatch(a) => mismatch_cmd(a, stdout, stderr),
        Command::Sweep(a) => sweep_cmd(a, stdout),
    }
}

const UNIT_ETAS: [(&str, f64); 3] = [("eta1", 1.0), ("eta2", 1.0), ("eta3", 1.0)];

fn witness_cmd(a: &WitnessArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let params = resolve_params(&a.params, &cfg, &UNIT_ETAS)?;
    let out = Outputs::resolve(&a.output, &cfg, Format::Json)?;
    if out.format != Format::Json {
        return Err(CliError::Validation("witness writes JSON only".into()));
    }
    check_all(&[out.out.as_ref()])?;
    let mut doc = serde_json::Map::new();
    for (k, v) in params.to_map() {
        doc.insert(k, Value::from(v));
    }
    doc.insert(
        "n_clones".into(),
        Value::from(analytic::clone_number(&params)?.n_clones),
    );
    if params.is_matched() {
        let r = analytic::witness_report(&params)?;
        let v = serde_json::to_value(r).expect("report serializes");
        doc.extend(v.as_object().expect("object").clone());
        doc.insert(
            "certifies_entanglement".into(),
            Value::from(r.certifies_entanglement()),
        );
    } else {
        let m = analytic::witness_mismatch(&params)?;
        let v = serde_json::to_value(m).expect("report serializes");
        doc.extend(v.as_object().expect("object").clone());
    }
    out.emit(&json_text(&Value::Object(doc))?, stdout)
}

const COMPARE_COLUMNS: [&str; 14] = [
    "eta1",
    "eta2",
    "eta3",
    "g",
    "diff_witness",
    "diff_n_a",
    "diff_n_clones",
    "diff_xx",
    "diff_yy",
    "diff_zz",
    "max_diff",
    "pass",
    "n_max",
    "max_tail_population",
];

fn compare_row(r: &DiscrepancyReport) -> Vec<Option<f64>> {
    let p = &r.params;
    [
        p.eta1(),
        p.eta2(),
        p.eta3(),
        p.g1(),
        r.diff_witness,
        r.diff_n_a,
        r.diff_n_clones,
        r.diff_xx,
        r.diff_yy,
        r.diff_zz,
        r.max_diff(),
        if r.pass { 1.0 } else { 0.0 },
        r.truncation.n_max as f64,
        r.truncation.max_tail_population,
    ]
    .into_iter()
    .map(Some)
    .collect()
}

fn oracle_cmd(a: &OracleArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let tolerance = a.tolerance.or(cfg.f64("tolerance")?).unwrap_or(1e-8);
    if !(tolerance >= 0.0) {
        return Err(CliError::Validation(
            "--tolerance must be non-negative".into(),
        ));
    }
    let grid = a.grid || cfg.bool("grid")?.unwrap_or(false);
    let tail_tol = a
        .tail_tol
        .or(cfg.f64("tail-tol")?)
        .unwrap_or(DEFAULT_TAIL_TOL);
    let n_max = a.n_max.or(cfg.usize("n-max")?);
    let no_grow = a.no_auto_grow || cfg.bool("no-auto-grow")?.unwrap_or(false);
    let dump = a
        .dump_marginals
        .clone()
        .or(cfg.string("dump-marginals")?.map(PathBuf::from));
    let out = Outputs::resolve(
        &a.output,
        &cfg,
        if grid { Format::Csv } else { Format::Json },
    )?;

    let policy_for = |p: &ExperimentParams| -> Result<TruncationPolicy, CliError> {
        let mut policy = TruncationPolicy::sized_for_gain(p.g1().max(p.g2()), tail_tol);
        if let Some(n) = n_max {
            policy.n_max = n;
        }
        policy.tail_tol = tail_tol;
        policy.auto_grow = !no_grow;
        policy.validate()?;
        Ok(policy)
    };

    if grid {
        if dump.is_some() {
            return Err(CliError::Validation(
                "--dump-marginals needs a single point".into(),
            ));
        }
        let points = experiment::validation_grid();
        let policies = points
            .iter()
            .map(policy_for)
            .collect::<Result<Vec<_>, _>>()?;
        check_all(&[out.out.as_ref()])?;
        let jobs: Vec<(ExperimentParams, TruncationPolicy)> =
            points.into_iter().zip(policies).collect();
        let results = experiment::compare_many(&jobs, tolerance);
        let mut meta = TableMetadata::new("oracle-grid");
        meta.fixed.insert("tolerance".into(), tolerance);
        meta.fixed.insert("tail_tol".into(), tail_tol);
        let mut table = SweepTable::new(COMPARE_COLUMNS, meta);
        let mut all_pass = true;
        for r in results {
            let r = r?;
            all_pass &= r.pass;
            table.push_row(compare_row(&r)).expect("row width");
        }
        table
            .metadata
            .summary
            .insert("all_pass".into(), if all_pass { 1.0 } else { 0.0 });
        return out.emit_table(&table, stdout);
    }

    let params = resolve_params(&a.params, &cfg, &UNIT_ETAS)?;
    let policy = policy_for(&params)?;
    check_all(&[out.out.as_ref(), dump.as_ref()])?;
    let report = experiment::oracle_compare(&params, policy, tolerance)?;
    match out.format {
        Format::Json => out.emit(&json_text(&report)?, stdout)?,
        Format::Csv => {
            let mut table = SweepTable::new(COMPARE_COLUMNS, TableMetadata::new("oracle"));
            table.push_row(compare_row(&report)).expect("row width");
            out.emit_table(&table, stdout)?;
        }
    }
    if let Some(path) = dump {
        let (_, state) = run_pipeline_with_state(&params, policy)?;
        write_file(&path, &state.marginals_table().to_csv_string())?;
    }
    Ok(())
}

const SCAN_DEFAULTS: [(&str, f64); 4] = [("eta1", 0.8), ("eta2", 0.98), ("eta3", 0.8), ("g", 0.7)];

fn write_plot(
    svg: &Option<PathBuf>,
    table: &SweepTable,
    plot: impl FnOnce() -> Plot,
) -> Result<(), CliError> {
    if let Some(path) = svg {
        write_file(path, &plot().render())?;
        write_file(&backing_csv(path), &table.to_csv_string())?;
    }
    Ok(())
}

fn column_pairs(table: &SweepTable, x: &str, y: &str) -> Vec<(f64, f64)> {
    let xs = table.column(x).unwrap_or_default();
    let ys = table.column(y).unwrap_or_default();
    xs.into_iter()
        .zip(ys)
        .map(|(x, y)| (x.unwrap_or(f64::NAN), y.unwrap_or(f64::NAN)))
        .collect()
}

fn svg_and_csv_paths(svg: &Option<PathBuf>) -> Option<PathBuf> {
    svg.as_ref().map(|p| backing_csv(p))
}

fn figure2_cmd(a: &Figure2Args, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let params = resolve_params(&a.params, &cfg, &SCAN_DEFAULTS)?;
    let range = range_arg(&a.eta2_range, &cfg, "eta2-range", "0.9:0.999:50")?;
    let levels = match &a.levels {
        Some(l) => l.clone(),
        None => cfg.f64s("levels")?.unwrap_or_else(|| vec![0.0, 0.5, 1.0]),
    };
    let out = Outputs::resolve(&a.output, &cfg, Format::Csv)?;
    let svg = svg_arg(&a.svg, &cfg)?;
    let csv = svg_and_csv_paths(&svg);
    check_all(&[out.out.as_ref(), svg.as_ref(), csv.as_ref()])?;

    let mut spec = ScanSpec::new(params).with_range(ScanAxis::Eta2, range);
    spec.witness_levels = levels.clone();
    let table = experiment::figure2_sweep(&spec)?;
    out.emit_table(&table, stdout)?;
    write_plot(&svg, &table, || Plot {
        title: format!(
            "Clones at fixed witness, eta1 = {}, eta3 = {}",
            params.eta1(),
            params.eta3()
        ),
        x_label: "eta2".into(),
        y_label: "N_c".into(),
        x_scale: Scale::Linear,
        y_scale: Scale::Log,
        series: table.columns()[1..]
            .iter()
            .zip(&levels)
            .map(|(col, w)| Series {
                label: format!("W = {w}"),
                points: column_pairs(&table, "eta2", col),
            })
            .collect(),
    })
}

fn sensitivity_cmd(
    a: &SensitivityArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let params = resolve_params(&a.params, &cfg, &SCAN_DEFAULTS)?;
    let range = range_arg(&a.g_range, &cfg, "g-range", "1.5:4:26")?;
    let dw = a.delta_w_min.or(cfg.f64("delta-w-min")?).unwrap_or(0.01);
    let out = Outputs::resolve(&a.output, &cfg, Format::Csv)?;
    let svg = svg_arg(&a.svg, &cfg)?;
    let csv = svg_and_csv_paths(&svg);
    check_all(&[out.out.as_ref(), svg.as_ref(), csv.as_ref()])?;

    let mut spec = ScanSpec::new(params).with_range(ScanAxis::G1, range);
    spec.delta_w_min = Some(dw);
    let scan = experiment::sensitivity_scan(&spec)?;
    out.emit_table(&scan.table, stdout)?;
    if let (Some(s), Some(c)) = (scan.slope, scan.classical_slope) {
        let _ = writeln!(stderr, "log-log slope {s:.6} (classical {c:.6})");
    }
    write_plot(&svg, &scan.table, || Plot {
        title: format!("Resolvable eta2 change, delta W min = {dw}"),
        x_label: "N (clones)".into(),
        y_label: "delta eta2".into(),
        x_scale: Scale::Log,
        y_scale: Scale::Log,
        series: vec![
            Series {
                label: "witness".into(),
                points: column_pairs(&scan.table, "n_clones", "deta2_min"),
            },
            Series {
                label: "1/sqrt(N)".into(),
                points: column_pairs(&scan.table, "n_clones", "classical"),
            },
        ],
    })
}

fn mismatch_cmd(
    a: &MismatchArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let params = resolve_params(&a.params, &cfg, &SCAN_DEFAULTS)?;
    let range = range_arg(&a.eps_range, &cfg, "eps-range", "-0.05:0.05:11")?;
    let out = Outputs::resolve(&a.output, &cfg, Format::Csv)?;
    let svg = svg_arg(&a.svg, &cfg)?;
    let csv = svg_and_csv_paths(&svg);
    check_all(&[out.out.as_ref(), svg.as_ref(), csv.as_ref()])?;

    let spec = ScanSpec::new(params.to_matched()).with_range(ScanAxis::Epsilon, range);
    let scan = experiment::mismatch_scan(&spec)?;
    out.emit_table(&scan.table, stdout)?;
    if let Some(f) = scan.fit {
        let _ = writeln!(
            stderr,
            "fit: c0 {:.9} c1 {:.9} c2 {:.9}; claimed c2 {:.9}, ratio {:.6}",
            f.c0, f.c1, f.c2, f.claimed_c2, f.c2_ratio
        );
    }
    for (eps, e) in &scan.failures {
        let _ = writeln!(stderr, "eps {eps}: {e}");
    }
    write_plot(&svg, &scan.table, || Plot {
        title: format!("Mismatched gains, g1 = {}", params.g1()),
        x_label: "epsilon".into(),
        y_label: "W".into(),
        x_scale: Scale::Linear,
        y_scale: Scale::Linear,
        series: vec![
            Series {
                label: "claimed".into(),
                points: column_pairs(&scan.table, "eps", "w_claimed"),
            },
            Series {
                label: "oracle".into(),
                points: column_pairs(&scan.table, "eps", "w_oracle"),
            },
        ],
    })?;
    if !scan.failures.is_empty() {
        return Err(CliError::Truncation(format!(
            "{} of {} oracle cells exceeded the truncation budget",
            scan.failures.len(),
            scan.table.len()
        )));
    }
    Ok(())
}

fn sweep_cmd(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&a.params)?;
    let params = resolve_params(&a.params, &cfg, &SCAN_DEFAULTS)?;
    let ranges = if a.range.is_empty() {
        cfg.strings("range")?.unwrap_or_default()
    } else {
        a.range.clone()
    };
    let targets = if a.target.is_empty() {
        cfg.strings("target")?
            .unwrap_or_else(|| vec!["witness".into()])
    } else {
        a.target.clone()
    };
    let out = Outputs::resolve(&a.output, &cfg, Format::Csv)?;
    check_all(&[out.out.as_ref()])?;

    let mut spec = ScanSpec::new(params);
    for r in &ranges {
        let (axis, range) = r.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("--range expects axis=start:stop:count, got `{r}`"))
        })?;
        let axis: ScanAxis = axis
            .trim()
            .parse()
            .map_err(|e: ExperimentError| CliError::Validation(e.to_string()))?;
        let range: AxisRange = range
            .parse()
            .map_err(|e: ExperimentError| CliError::Validation(e.to_string()))?;
        spec = spec.with_range(axis, range);
    }
    spec.targets = targets
        .iter()
        .map(|t| t.trim().parse::<Target>())
        .collect::<Result<_, _>>()?;
    let table = experiment::grid_sweep(&spec)?;
    out.emit_table(&table, stdout)
}
