//! File formats: CSV for histograms and curves, JSON for summaries.
//!
//! Floats in CSV are written with 17 significant digits (`{:.16e}`), so a
//! value read back is bit-identical. JSON uses the shortest representation
//! that round-trips, which has the same property. Non-finite values are
//! written as `NaN` in CSV and `null` in JSON.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::compare::Geometry;
use crate::error::{Error, Result};
use crate::mc::{BinEstimate, McConfig, SignMetrics};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: &str = "spec-1";

pub const HISTOGRAM_HEADER: [&str; 6] = ["bin_lo", "bin_hi", "re_density", "im_density", "stderr_re", "stderr_im"];
pub const MASS_HEADER: [&str; 6] = ["bin_lo", "bin_hi", "re_mass", "im_mass", "stderr_re", "stderr_im"];
pub const CURVE_HEADER: [&str; 2] = ["S", "density"];

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_float(field: &str, line: u64) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{field}` is not a number")))
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn read_table<R: Read>(input: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let found: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if found != header {
        return Err(Error::Parse(format!("expected header {}, found {}", header.join(","), found.join(","))));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(record.iter().map(|f| parse_float(f, line)).collect::<Result<Vec<f64>>>()?);
    }
    Ok(rows)
}

pub fn write_histogram_csv<W: Write>(out: W, bins: &[BinEstimate]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(HISTOGRAM_HEADER)?;
    for b in bins {
        w.write_record([b.bin_lo, b.bin_hi, b.re_density, b.im_density, b.stderr_re, b.stderr_im].map(format_float))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_histogram_csv<R: Read>(input: R) -> Result<Vec<BinEstimate>> {
    let rows = read_table(input, &HISTOGRAM_HEADER)?;
    let bins: Vec<BinEstimate> = rows
        .into_iter()
        .map(|r| BinEstimate {
            bin_lo: r[0],
            bin_hi: r[1],
            re_density: r[2],
            im_density: r[3],
            stderr_re: r[4],
            stderr_im: r[5],
        })
        .collect();
    if bins.windows(2).any(|w| w[0].bin_hi != w[1].bin_lo) || bins.iter().any(|b| b.bin_hi.partial_cmp(&b.bin_lo) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::Parse("histogram bins are not contiguous and increasing".into()));
    }
    Ok(bins)
}

/// Bin mass: a density estimate times the volume or length of its bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinMass {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub re_mass: f64,
    pub im_mass: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

impl BinMass {
    pub fn from_estimate(b: &BinEstimate, geometry: Geometry) -> Self {
        let v = geometry.measure(b.bin_lo, b.bin_hi);
        BinMass {
            bin_lo: b.bin_lo,
            bin_hi: b.bin_hi,
            re_mass: b.re_density * v,
            im_mass: b.im_density * v,
            stderr_re: b.stderr_re * v,
            stderr_im: b.stderr_im * v,
        }
    }
}

pub fn write_mass_csv<W: Write>(out: W, bins: &[BinMass]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(MASS_HEADER)?;
    for b in bins {
        w.write_record([b.bin_lo, b.bin_hi, b.re_mass, b.im_mass, b.stderr_re, b.stderr_im].map(format_float))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `(S, density)` rows.
pub fn write_curve_csv<W: Write>(out: W, points: &[(f64, f64)]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(CURVE_HEADER)?;
    for &(x, y) in points {
        w.write_record([format_float(x), format_float(y)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve_csv<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    Ok(read_table(input, &CURVE_HEADER)?.into_iter().map(|r| (r[0], r[1])).collect())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn with_path(path: &Path, err: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(err.kind(), format!("{}: {err}", path.display())))
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| with_path(path, e))
}

pub fn open_file(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| with_path(path, e))
}

/// One `L` of a `simulate` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(rename = "L")]
    pub slices: u32,
    /// Histogram file name, relative to the summary.
    pub histogram: String,
    pub marginal: Option<String>,
    /// Bin-mass files, written with `--mass`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal_mass: Option<String>,
    pub n_chunks: usize,
    /// Resolved configuration, including padding of `n_samples`.
    pub config: McConfig,
    pub metrics: SignMetrics,
}

/// Contents of `summary.json`. Deterministic for a given command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub version: String,
    pub two_s: u32,
    pub runs: Vec<RunRecord>,
}

impl SimulationSummary {
    pub fn new(two_s: u32, runs: Vec<RunRecord>) -> Self {
        SimulationSummary { version: SCHEMA_VERSION.to_string(), two_s, runs }
    }

    pub fn find_histogram(&self, file_name: &str) -> Option<(&RunRecord, bool)> {
        self.runs.iter().find_map(|r| {
            if r.histogram == file_name {
                Some((r, false))
            } else if r.marginal.as_deref() == Some(file_name) {
                Some((r, true))
            } else {
                None
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    #[serde(rename = "L")]
    pub slices: u32,
    pub n_samples: u64,
    pub wall_seconds: f64,
    pub samples_per_second: f64,
}

/// Contents of `timing.json`, kept apart so the summary stays reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub version: String,
    pub workers: usize,
    pub runs: Vec<TimingRecord>,
}
