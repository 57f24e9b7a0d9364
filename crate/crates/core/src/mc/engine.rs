use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::McConfig;
use super::histogram::{BinLayout, ChunkAccumulator, ChunkId, ComplexHistogram};
use super::metrics::SignMetrics;
use super::sampling::{chunk_stream, PathScratch};
use crate::error::{Error, Result};
use crate::spin::SpinRep;

/// Output of one Monte Carlo experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub config: McConfig,
    pub radial: ComplexHistogram,
    pub marginal: Option<ComplexHistogram>,
    pub metrics: SignMetrics,
}

impl Estimate {
    pub fn from_histograms(radial: ComplexHistogram, marginal: Option<ComplexHistogram>) -> Self {
        let metrics = SignMetrics::from_histogram(&radial);
        Estimate { config: radial.config().clone(), radial, marginal, metrics }
    }

    /// Union with another estimate of the same experiment.
    pub fn merge(&self, other: &Estimate) -> Result<Estimate> {
        let radial = self.radial.merge(&other.radial)?;
        let marginal = match (&self.marginal, &other.marginal) {
            (Some(a), Some(b)) => Some(a.merge(b)?),
            (None, None) => None,
            _ => return Err(Error::ConfigMismatch("only one estimate has a marginal histogram".into())),
        };
        Ok(Estimate::from_histograms(radial, marginal))
    }
}

fn bin_index(x: f64, lo: f64, width: f64, n_bins: usize) -> usize {
    (((x - lo) / width) as usize).min(n_bins - 1)
}

fn run_chunk(config: &McConfig, index: u64) -> (ChunkAccumulator, Option<ChunkAccumulator>) {
    let id = ChunkId { seed: config.seed, index };
    let n_bins = config.n_bins;
    let mut radial = ChunkAccumulator::new(id, n_bins);
    let mut marginal = config.project_axis.map(|_| ChunkAccumulator::new(id, n_bins));

    let start = index * config.chunk_size;
    let paths = config.chunk_size.min(config.n_samples.saturating_sub(start));
    let scale = config.spin.s() + 1.0;
    let radial_width = config.r_max / n_bins as f64;
    let projected_width = 2.0 * config.r_max / n_bins as f64;

    let mut rng = chunk_stream(config.seed, index);
    let mut scratch = PathScratch::default();
    for _ in 0..paths {
        let (nbar, w) = scratch.draw(config.slices, config.spin, &mut rng);
        let r = scale * (nbar[0] * nbar[0] + nbar[1] * nbar[1] + nbar[2] * nbar[2]).sqrt();
        let norm2 = w.norm_sqr();

        let b = &mut radial.bins[bin_index(r, 0.0, radial_width, n_bins)];
        b.sum_w += w;
        b.sum_w2 += norm2;
        b.count += 1;
        radial.weights.push(w);

        if let (Some(acc), Some(axis)) = (marginal.as_mut(), config.project_axis.as_ref()) {
            let u = scale * axis.dot3(&nbar);
            let b = &mut acc.bins[bin_index(u, -config.r_max, projected_width, n_bins)];
            b.sum_w += w;
            b.sum_w2 += norm2;
            b.count += 1;
            acc.weights.push(w);
        }
    }
    radial.paths = paths;
    if let Some(acc) = marginal.as_mut() {
        acc.paths = paths;
    }
    (radial, marginal)
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Runs the chunks `range` of a resolved configuration. `workers = 0` uses
/// the global rayon pool. The output does not depend on the worker count.
pub fn run_chunk_range(
    config: &McConfig,
    range: Range<u64>,
    workers: usize,
) -> Result<(ComplexHistogram, Option<ComplexHistogram>)> {
    config.validate()?;
    if range.end > config.n_chunks() {
        return Err(Error::InvalidConfig(format!(
            "chunk range {range:?} exceeds the {} chunks of this run",
            config.n_chunks()
        )));
    }
    let results: Vec<(ChunkAccumulator, Option<ChunkAccumulator>)> =
        with_workers(workers, || range.into_par_iter().map(|i| run_chunk(config, i)).collect())?;

    let (radial, marginal): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let radial = ComplexHistogram::from_chunks(config, BinLayout::Radial, radial)?;
    let marginal = match config.project_axis {
        Some(axis) => Some(ComplexHistogram::from_chunks(
            config,
            BinLayout::Projected { axis },
            marginal.into_iter().flatten().collect(),
        )?),
        None => None,
    };
    Ok((radial, marginal))
}

pub fn run_estimation(config: &McConfig) -> Result<Estimate> {
    run_estimation_with_workers(config, 0)
}

pub fn run_estimation_with_workers(config: &McConfig, workers: usize) -> Result<Estimate> {
    let config = config.resolved()?;
    let (radial, marginal) = run_chunk_range(&config, 0..config.n_chunks(), workers)?;
    Ok(Estimate::from_histograms(radial, marginal))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignScanRow {
    pub two_s: u32,
    #[serde(rename = "L")]
    pub slices: u32,
    pub metrics: SignMetrics,
}

/// Sign metrics for every `(s, L)` pair, each an independent experiment.
pub fn sign_scan(
    spins: &[SpinRep],
    slices: &[u32],
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<SignScanRow>> {
    let mut rows = Vec::with_capacity(spins.len() * slices.len());
    for &spin in spins {
        for &l in slices {
            let config = McConfig::new(spin, l, n_samples).with_seed(seed).with_bins(1);
            let estimate = run_estimation_with_workers(&config, workers)?;
            rows.push(SignScanRow { two_s: spin.two_s(), slices: l, metrics: estimate.metrics });
        }
    }
    Ok(rows)
}
