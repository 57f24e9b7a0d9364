//! The `spinwigner` command line.
//!
//! Exit codes: 0 success, 2 invalid configuration or arguments, 3 I/O or
//! malformed input file, 4 a comparison failed its chi-square threshold.
//! Failures print a JSON object `{"error": {kind, message, exit_code}}` to
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    shell_decomposition, smeared_density, two_spin_char_mixture, two_spin_char_oracle, two_spin_exact_terms,
    two_spin_smeared_density, two_spin_weights, SectorWeights, ShellTerm, SmearingKernel, TwoSpinModel,
};
use crate::compare::{
    compare_histograms, compare_to_reference, discretised_radial_bin_averages, marginal_bin_averages,
    radial_bin_averages, ComparisonReport, Geometry, DEFAULT_CHI2_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::mc::{run_estimation_with_workers, sign_scan, BinEstimate, McConfig, SignScanRow};
use crate::report::{
    create_file, format_float, open_file, read_histogram_csv, write_curve_csv, write_histogram_csv, write_json,
    write_mass_csv, BinMass, RunRecord, SimulationSummary, TimingRecord, TimingReport, SCHEMA_VERSION,
};
use crate::spin::{SpinRep, UnitVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_THRESHOLD: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "spinwigner", version, about = "Spin Wigner functions and the coherent-state Monte Carlo sign problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample closed coherent-state paths and histogram |(s+1) nbar|.
    Simulate(SimulateArgs),
    /// Tabulate the smeared density on a radial grid.
    Analytic(AnalyticArgs),
    /// Compare a histogram to the smeared density, the exact finite-L
    /// density, or another histogram.
    Compare(CompareArgs),
    /// Sign metrics over a grid of spins and slice counts.
    Signscan(SignscanArgs),
    /// Two coupled spin-1/2: sector weights, exact terms, smeared curve.
    Twospin(TwospinArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    /// Gaussian-smeared exact density, the large-L form.
    Smeared,
    /// Exact density of the L-slice approximant (radial only).
    Exact,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Twice the spin.
    #[arg(long = "two-s")]
    pub two_s: u32,
    /// Slice count: `8`, `2..15` (inclusive) or `2,4,8`.
    #[arg(long = "L", value_parser = parse_slices)]
    pub slices: SliceList,
    /// Paths per L; scientific notation such as `1e7` is accepted.
    #[arg(long, value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = McConfig::DEFAULT_BINS)]
    pub bins: usize,
    /// Histogram range; defaults to s+1.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long = "chunk-size", value_parser = parse_count, default_value_t = McConfig::DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,
    /// Also histogram the projection on this axis: `x`, `y`, `z` or `a,b,c`.
    #[arg(long, value_parser = parse_axis)]
    pub axis: Option<UnitVector>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write bin masses (density times bin volume or length).
    #[arg(long)]
    pub mass: bool,
}

#[derive(Args, Debug)]
pub struct AnalyticArgs {
    #[arg(long = "two-s")]
    pub two_s: u32,
    #[arg(long = "L")]
    pub slices: u32,
    /// Grid points on [0, s+1+3/sqrt(L)].
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long = "width-scale", default_value_t = 1.0)]
    pub width_scale: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Histogram CSV written by `simulate`.
    #[arg(long)]
    pub mc: PathBuf,
    /// Summary of the run; defaults to `summary.json` next to the histogram.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Compare against a second histogram instead of an analytic curve.
    #[arg(long)]
    pub against: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Reference::Smeared)]
    pub reference: Reference,
    #[arg(long = "two-s")]
    pub two_s: Option<u32>,
    #[arg(long = "L")]
    pub slices: Option<u32>,
    /// Slice count of the analytic curve, if different from the run's.
    #[arg(long = "analytic-L")]
    pub analytic_slices: Option<u32>,
    #[arg(long = "width-scale", default_value_t = 1.0)]
    pub width_scale: f64,
    #[arg(long, default_value_t = DEFAULT_CHI2_THRESHOLD)]
    pub threshold: f64,
    /// Treat the histogram as a projected marginal.
    #[arg(long)]
    pub marginal: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SignscanArgs {
    /// Comma-separated values of twice the spin.
    #[arg(long = "two-s", value_delimiter = ',', required = true)]
    pub two_s: Vec<u32>,
    #[arg(long = "L", value_parser = parse_slices)]
    pub slices: SliceList,
    #[arg(long, value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TwospinArgs {
    /// Product of inverse temperature and coupling.
    #[arg(long = "betaJ", allow_hyphen_values = true)]
    pub beta_j: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Slice count of the smeared curve.
    #[arg(long = "L", default_value_t = 8)]
    pub slices: u32,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long = "width-scale", default_value_t = 1.0)]
    pub width_scale: f64,
    /// Random wave vectors used for the character residual.
    #[arg(long = "oracle-points", default_value_t = 200)]
    pub oracle_points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceList(pub Vec<u32>);

/// `8`, `2..15`, `2..=15` or `2,4,8`.
pub fn parse_slices(text: &str) -> std::result::Result<SliceList, String> {
    let text = text.trim();
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("`{s}` is not a slice count"));
    let list = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {text}"));
        }
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    Ok(SliceList(list))
}

/// Non-negative integer, also as `1e7` or `2.5e6` when the value is whole.
pub fn parse_count(text: &str) -> std::result::Result<u64, String> {
    let text = text.trim().replace('_', "");
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|_| format!("`{text}` is not a count"))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15) {
        return Err(format!("`{text}` is not a whole number of samples"));
    }
    Ok(v as u64)
}

pub fn parse_axis(text: &str) -> std::result::Result<UnitVector, String> {
    match text.trim() {
        "x" => Ok(UnitVector::X),
        "y" => Ok(UnitVector::Y),
        "z" => Ok(UnitVector::NORTH),
        other => {
            let parts: Vec<f64> = other
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| format!("`{other}` is not an axis"))?;
            match parts[..] {
                [x, y, z] => UnitVector::normalized(x, y, z).map_err(|e| e.to_string()),
                _ => Err(format!("an axis needs three components, got `{other}`")),
            }
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

fn classify(err: &Error) -> (&'static str, i32) {
    match err {
        Error::InvalidConfig(_) => ("invalid_config", EXIT_INVALID),
        Error::InvalidArgument(_) => ("invalid_argument", EXIT_INVALID),
        Error::ConfigMismatch(_) => ("config_mismatch", EXIT_INVALID),
        Error::Parse(_) => ("malformed_input", EXIT_IO),
        Error::Io(_) => ("io", EXIT_IO),
    }
}

fn report_error(kind: &str, message: String, exit_code: i32) -> i32 {
    let body = ErrorReport { error: ErrorBody { kind, message, exit_code } };
    let mut stderr = io::stderr().lock();
    let _ = serde_json::to_writer(&mut stderr, &body);
    let _ = writeln!(stderr);
    exit_code
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            return report_error("usage", e.to_string().trim_end().to_string(), EXIT_INVALID);
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            let (kind, code) = classify(&err);
            report_error(kind, err.to_string(), code)
        }
    }
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Analytic(a) => analytic(a),
        Command::Compare(a) => compare(a),
        Command::Signscan(a) => signscan(a),
        Command::Twospin(a) => twospin(a),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = create_file(p)?;
            write(&mut f)?;
            f.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            write(&mut out)?;
        }
    }
    Ok(())
}

fn write_bins(path: &Path, bins: &[BinEstimate], format: Format) -> Result<()> {
    let mut f = create_file(path)?;
    match format {
        Format::Csv => write_histogram_csv(&mut f, bins)?,
        Format::Json => write_json(&mut f, bins)?,
    }
    f.flush()?;
    Ok(())
}

fn write_masses(path: &Path, bins: &[BinEstimate], geometry: Geometry, format: Format) -> Result<()> {
    let masses: Vec<BinMass> = bins.iter().map(|b| BinMass::from_estimate(b, geometry)).collect();
    let mut f = create_file(path)?;
    match format {
        Format::Csv => write_mass_csv(&mut f, &masses)?,
        Format::Json => write_json(&mut f, &masses)?,
    }
    f.flush()?;
    Ok(())
}

fn histogram_name(prefix: &str, slices: u32, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    format!("{prefix}_L{slices:02}.{ext}")
}

fn simulate(a: &SimulateArgs) -> Result<i32> {
    let spin = SpinRep::from_two_s(a.two_s);
    let mut configs = Vec::new();
    for &l in &a.slices.0 {
        let mut config = McConfig::new(spin, l, a.samples)
            .with_bins(a.bins)
            .with_seed(a.seed)
            .with_chunk_size(a.chunk_size);
        if let Some(r) = a.rmax {
            config = config.with_r_max(r);
        }
        if let Some(axis) = a.axis {
            config = config.with_axis(axis);
        }
        configs.push(config.resolved()?);
    }
    fs::create_dir_all(&a.out).map_err(|e| {
        Error::Io(io::Error::new(e.kind(), format!("{}: {e}", a.out.display())))
    })?;

    let mut runs = Vec::new();
    let mut timing = Vec::new();
    for config in &configs {
        let start = Instant::now();
        let estimate = run_estimation_with_workers(config, a.workers)?;
        let wall = start.elapsed().as_secs_f64();

        let histogram = histogram_name("hist", config.slices, a.format);
        let radial = estimate.radial.estimates();
        write_bins(&a.out.join(&histogram), &radial, a.format)?;
        let mut mass = None;
        if a.mass {
            let name = histogram_name("mass", config.slices, a.format);
            write_masses(&a.out.join(&name), &radial, Geometry::Radial, a.format)?;
            mass = Some(name);
        }
        let (mut marginal, mut marginal_mass) = (None, None);
        if let Some(m) = &estimate.marginal {
            let bins = m.estimates();
            let name = histogram_name("marginal", config.slices, a.format);
            write_bins(&a.out.join(&name), &bins, a.format)?;
            marginal = Some(name);
            if a.mass {
                let name = histogram_name("marginal_mass", config.slices, a.format);
                write_masses(&a.out.join(&name), &bins, Geometry::Linear, a.format)?;
                marginal_mass = Some(name);
            }
        }
        timing.push(TimingRecord {
            slices: config.slices,
            n_samples: config.n_samples,
            wall_seconds: wall,
            samples_per_second: config.n_samples as f64 / wall,
        });
        runs.push(RunRecord {
            slices: config.slices,
            histogram,
            marginal,
            mass,
            marginal_mass,
            n_chunks: estimate.radial.n_chunks(),
            config: estimate.config.clone(),
            metrics: estimate.metrics,
        });
    }
    let mut f = create_file(&a.out.join("summary.json"))?;
    write_json(&mut f, &SimulationSummary::new(a.two_s, runs))?;
    let mut f = create_file(&a.out.join("timing.json"))?;
    write_json(&mut f, &TimingReport { version: SCHEMA_VERSION.to_string(), workers: a.workers, runs: timing })?;
    Ok(EXIT_OK)
}

fn analytic_grid(top: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!("the grid needs at least 2 points, got {points}")));
    }
    let step = top / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { top } else { step * i as f64 }).collect())
}

#[derive(Serialize)]
struct AnalyticDocument {
    version: &'static str,
    spin: u32,
    terms: Vec<ShellTerm>,
    kernel: SmearingKernel,
    curve: Vec<[f64; 2]>,
}

fn analytic(a: &AnalyticArgs) -> Result<i32> {
    let spin = SpinRep::from_two_s(a.two_s);
    let kernel = SmearingKernel::with_width_scale(a.slices, a.width_scale)?;
    let top = spin.s() + 1.0 + 3.0 / f64::from(a.slices).sqrt();
    let curve: Vec<(f64, f64)> = analytic_grid(top, a.points)?
        .into_iter()
        .map(|s| smeared_density(s, spin, &kernel).map(|d| (s, d)))
        .collect::<Result<_>>()?;
    emit(a.out.as_deref(), |w| match a.format {
        Format::Csv => write_curve_csv(w, &curve),
        Format::Json => write_json(
            w,
            &AnalyticDocument {
                version: SCHEMA_VERSION,
                spin: a.two_s,
                terms: shell_decomposition(spin).terms,
                kernel,
                curve: curve.iter().map(|&(s, d)| [s, d]).collect(),
            },
        ),
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CompareDocument {
    mc: String,
    against: Option<String>,
    reference: &'static str,
    two_s: Option<u32>,
    #[serde(rename = "L")]
    slices: Option<u32>,
    kernel: Option<SmearingKernel>,
    config: Option<McConfig>,
    #[serde(flatten)]
    report: ComparisonReport,
}

fn read_bins(path: &Path) -> Result<Vec<BinEstimate>> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    let f = open_file(path)?;
    if is_json {
        Ok(serde_json::from_reader(io::BufReader::new(f))?)
    } else {
        read_histogram_csv(f)
    }
}

/// Summary entry describing `mc`, if a summary is given or sits next to it.
fn locate_run(mc: &Path, summary: Option<&Path>) -> Result<Option<(McConfig, bool)>> {
    let default = mc.parent().map(|d| d.join("summary.json"));
    let (path, explicit) = match (summary, default) {
        (Some(p), _) => (p.to_path_buf(), true),
        (None, Some(p)) if p.is_file() => (p, false),
        _ => return Ok(None),
    };
    let summary: SimulationSummary = serde_json::from_reader(io::BufReader::new(open_file(&path)?))?;
    let name = mc.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    match summary.find_histogram(name) {
        Some((run, is_marginal)) => Ok(Some((run.config.clone(), is_marginal))),
        None if explicit => Err(Error::ConfigMismatch(format!(
            "{} does not list a histogram named {name}",
            path.display()
        ))),
        None => Ok(None),
    }
}

fn check_edges(bins: &[BinEstimate], config: &McConfig, marginal: bool) -> Result<()> {
    let (lo, hi) = if marginal { (-config.r_max, config.r_max) } else { (0.0, config.r_max) };
    let ok = bins.len() == config.n_bins
        && bins.first().is_some_and(|b| b.bin_lo == lo)
        && bins.last().is_some_and(|b| b.bin_hi == hi);
    if ok {
        Ok(())
    } else {
        Err(Error::ConfigMismatch("histogram bins do not match the run configuration in the summary".into()))
    }
}

fn compare(a: &CompareArgs) -> Result<i32> {
    let bins = read_bins(&a.mc)?;
    let run = locate_run(&a.mc, a.summary.as_deref())?;
    let marginal = a.marginal || run.as_ref().is_some_and(|(_, m)| *m);
    let geometry = if marginal { Geometry::Linear } else { Geometry::Radial };
    if let Some((config, m)) = &run {
        check_edges(&bins, config, *m)?;
        let mismatch = |what: &str, given: u32, found: u32| {
            Error::ConfigMismatch(format!("--{what} {given} but the run used {found}"))
        };
        if let Some(t) = a.two_s.filter(|&t| t != config.spin.two_s()) {
            return Err(mismatch("two-s", t, config.spin.two_s()));
        }
        if let Some(l) = a.slices.filter(|&l| l != config.slices) {
            return Err(mismatch("L", l, config.slices));
        }
    }
    let two_s = a.two_s.or(run.as_ref().map(|(c, _)| c.spin.two_s()));
    let slices = a.slices.or(run.as_ref().map(|(c, _)| c.slices));
    let config = run.map(|(c, _)| c);

    let (report, reference, kernel) = if let Some(other) = &a.against {
        let other_bins = read_bins(other)?;
        (compare_histograms(&bins, &other_bins, geometry, a.threshold)?, "histogram", None)
    } else {
        let missing = || Error::InvalidArgument("comparing to a curve needs --two-s and --L (or a summary)".into());
        let spin = SpinRep::from_two_s(two_s.ok_or_else(missing)?);
        let l = a.analytic_slices.or(slices).ok_or_else(missing)?;
        let edges: Vec<(f64, f64)> = bins.iter().map(|b| (b.bin_lo, b.bin_hi)).collect();
        match a.reference {
            Reference::Smeared => {
                let kernel = SmearingKernel::with_width_scale(l, a.width_scale)?;
                let values = match geometry {
                    Geometry::Radial => radial_bin_averages(&edges, spin, &kernel)?,
                    Geometry::Linear => marginal_bin_averages(&edges, spin, &kernel),
                };
                (compare_to_reference(&bins, &values, geometry, a.threshold)?, "smeared", Some(kernel))
            }
            Reference::Exact => {
                if geometry == Geometry::Linear {
                    return Err(Error::InvalidArgument("the exact reference is available for radial histograms only".into()));
                }
                let values = discretised_radial_bin_averages(&edges, spin, l)?;
                (compare_to_reference(&bins, &values, geometry, a.threshold)?, "exact", None)
            }
        }
    };
    let pass = report.pass;
    let doc = CompareDocument {
        mc: a.mc.display().to_string(),
        against: a.against.as_ref().map(|p| p.display().to_string()),
        reference,
        two_s,
        slices,
        kernel,
        config,
        report,
    };
    emit(a.out.as_deref(), |w| write_json(w, &doc))?;
    Ok(if pass { EXIT_OK } else { EXIT_THRESHOLD })
}

#[derive(Serialize)]
struct SignscanDocument<'a> {
    version: &'static str,
    n_samples: u64,
    seed: u64,
    rows: &'a [SignScanRow],
}

fn signscan(a: &SignscanArgs) -> Result<i32> {
    let spins: Vec<SpinRep> = a.two_s.iter().map(|&t| SpinRep::from_two_s(t)).collect();
    let rows = sign_scan(&spins, &a.slices.0, a.samples, a.seed, a.workers)?;
    emit(a.out.as_deref(), |w| match a.format {
        Format::Json => write_json(w, &SignscanDocument { version: SCHEMA_VERSION, n_samples: a.samples, seed: a.seed, rows: &rows }),
        Format::Csv => {
            let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
            out.write_record([
                "two_s",
                "L",
                "n_paths",
                "phase_quality",
                "phase_quality_stderr",
                "mean_abs_weight",
                "mean_abs_weight_stderr",
                "normalization_re",
                "normalization_im",
                "normalization_stderr_re",
                "normalization_stderr_im",
                "scaled_weight_variance",
            ])?;
            for r in &rows {
                let m = &r.metrics;
                let mut record = vec![r.two_s.to_string(), r.slices.to_string(), m.n_paths.to_string()];
                record.extend(
                    [
                        m.phase_quality,
                        m.phase_quality_stderr,
                        m.mean_abs_weight,
                        m.mean_abs_weight_stderr,
                        m.normalization_check.re,
                        m.normalization_check.im,
                        m.normalization_check_stderr_re,
                        m.normalization_check_stderr_im,
                        m.scaled_weight_variance,
                    ]
                    .map(format_float),
                );
                out.write_record(&record)?;
            }
            out.flush()?;
            Ok(())
        }
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TwospinDocument {
    version: &'static str,
    model: TwoSpinModel,
    weights: SectorWeights,
    terms: Vec<ShellTerm>,
    kernel: SmearingKernel,
    oracle_points: usize,
    /// Largest `|trace oracle - mixture|` over random wave vectors.
    oracle_residual: f64,
    curve: Vec<[f64; 2]>,
}

fn twospin(a: &TwospinArgs) -> Result<i32> {
    if !(a.beta.is_finite() && a.beta > 0.0) {
        return Err(Error::InvalidArgument(format!("--beta must be positive, got {}", a.beta)));
    }
    let model = TwoSpinModel::new(a.beta, a.beta_j / a.beta)?;
    let kernel = SmearingKernel::with_width_scale(a.slices, a.width_scale)?;
    let top = 2.0 + 3.0 / f64::from(a.slices).sqrt();
    let curve: Vec<(f64, f64)> = analytic_grid(top, a.points)?
        .into_iter()
        .map(|s| two_spin_smeared_density(s, &model, &kernel).map(|d| (s, d)))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut residual = 0.0f64;
    for _ in 0..a.oracle_points {
        let lambda: [f64; 3] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
        let t = lambda.iter().map(|c| c * c).sum::<f64>().sqrt();
        let oracle = two_spin_char_oracle(&lambda, &model)?;
        residual = residual.max((oracle - two_spin_char_mixture(t, &model)).norm());
    }

    emit(a.out.as_deref(), |w| match a.format {
        Format::Csv => write_curve_csv(w, &curve),
        Format::Json => write_json(
            w,
            &TwospinDocument {
                version: SCHEMA_VERSION,
                model,
                weights: two_spin_weights(&model),
                terms: two_spin_exact_terms(&model),
                kernel,
                oracle_points: a.oracle_points,
                oracle_residual: residual,
                curve: curve.iter().map(|&(s, d)| [s, d]).collect(),
            },
        ),
    })?;
    Ok(EXIT_OK)
}
