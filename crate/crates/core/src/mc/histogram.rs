use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::McConfig;
use crate::error::{Error, Result};
use crate::spin::UnitVector;

/// What a histogram bins: the radius `|(s+1) nbar|` or its projection on an axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinLayout {
    Radial,
    Projected { axis: UnitVector },
}

impl BinLayout {
    /// Histogram range for a given `r_max`.
    pub fn range(&self, r_max: f64) -> (f64, f64) {
        match self {
            BinLayout::Radial => (0.0, r_max),
            BinLayout::Projected { .. } => (-r_max, r_max),
        }
    }

    /// Volume of a radial shell, or the width of a projected bin.
    pub fn measure(&self, lo: f64, hi: f64) -> f64 {
        match self {
            BinLayout::Radial => 4.0 * PI / 3.0 * (hi.powi(3) - lo.powi(3)),
            BinLayout::Projected { .. } => hi - lo,
        }
    }
}

/// Identifies the random stream a chunk was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChunkId {
    pub seed: u64,
    pub index: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BinSums {
    pub sum_w: Complex64,
    /// Sum of `|w|^2`.
    pub sum_w2: f64,
    pub count: u64,
}

impl BinSums {
    fn add(&mut self, other: &BinSums) {
        self.sum_w += other.sum_w;
        self.sum_w2 += other.sum_w2;
        self.count += other.count;
    }
}

/// Raw (unscaled) weight moments over every path of a chunk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightSums {
    pub sum_w: Complex64,
    pub sum_abs: f64,
    pub sum_abs2: f64,
}

impl WeightSums {
    pub(crate) fn push(&mut self, w: Complex64) {
        let a = w.norm();
        self.sum_w += w;
        self.sum_abs += a;
        self.sum_abs2 += a * a;
    }

    pub(crate) fn add(&mut self, other: &WeightSums) {
        self.sum_w += other.sum_w;
        self.sum_abs += other.sum_abs;
        self.sum_abs2 += other.sum_abs2;
    }
}

/// Everything accumulated from one chunk of paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChunkAccumulator {
    pub id: ChunkId,
    pub paths: u64,
    pub bins: Vec<BinSums>,
    pub weights: WeightSums,
}

impl ChunkAccumulator {
    pub(crate) fn new(id: ChunkId, n_bins: usize) -> Self {
        ChunkAccumulator { id, paths: 0, bins: vec![BinSums::default(); n_bins], weights: WeightSums::default() }
    }
}

/// Final per-bin estimate, as exported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEstimate {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub re_density: f64,
    pub im_density: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

/// Complex-weighted histogram built from independently seeded chunks.
///
/// Totals are always re-summed in chunk-id order, so the result of merging
/// any partition of the chunks is bit-identical to a single run.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexHistogram {
    config: McConfig,
    layout: BinLayout,
    chunks: BTreeMap<ChunkId, ChunkAccumulator>,
}

impl ComplexHistogram {
    pub fn empty(config: &McConfig, layout: BinLayout) -> Self {
        let mut config = config.clone();
        config.n_samples = 0;
        ComplexHistogram { config, layout, chunks: BTreeMap::new() }
    }

    pub(crate) fn from_chunks(config: &McConfig, layout: BinLayout, chunks: Vec<ChunkAccumulator>) -> Result<Self> {
        let mut hist = Self::empty(config, layout);
        for chunk in chunks {
            hist.insert(chunk)?;
        }
        Ok(hist)
    }

    fn insert(&mut self, chunk: ChunkAccumulator) -> Result<()> {
        if chunk.bins.len() != self.config.n_bins {
            return Err(Error::ConfigMismatch(format!(
                "chunk has {} bins, histogram has {}",
                chunk.bins.len(),
                self.config.n_bins
            )));
        }
        if self.chunks.contains_key(&chunk.id) {
            return Err(Error::ConfigMismatch(format!(
                "chunk {:?} is already present; merged histograms must come from disjoint streams",
                chunk.id
            )));
        }
        self.config.n_samples += chunk.paths;
        self.chunks.insert(chunk.id, chunk);
        Ok(())
    }

    /// Configuration with `n_samples` equal to the paths actually held.
    pub fn config(&self) -> &McConfig {
        &self.config
    }

    pub fn layout(&self) -> BinLayout {
        self.layout
    }

    pub fn n_paths(&self) -> u64 {
        self.config.n_samples
    }

    pub fn n_chunks(&self) -> usize {
        self.chunks.len()
    }

    pub fn chunks(&self) -> impl Iterator<Item = &ChunkAccumulator> {
        self.chunks.values()
    }

    pub fn bin_edges(&self) -> Vec<(f64, f64)> {
        let (lo, hi) = self.layout.range(self.config.r_max);
        let n = self.config.n_bins;
        let width = (hi - lo) / n as f64;
        (0..n)
            .map(|i| (lo + width * i as f64, if i + 1 == n { hi } else { lo + width * (i + 1) as f64 }))
            .collect()
    }

    /// Bin-wise totals over all chunks.
    pub fn totals(&self) -> Vec<BinSums> {
        let mut out = vec![BinSums::default(); self.config.n_bins];
        for chunk in self.chunks.values() {
            for (acc, b) in out.iter_mut().zip(&chunk.bins) {
                acc.add(b);
            }
        }
        out
    }

    pub fn weight_totals(&self) -> WeightSums {
        let mut out = WeightSums::default();
        for chunk in self.chunks.values() {
            out.add(&chunk.weights);
        }
        out
    }

    /// Density estimates `(2s+1)^{L-1} sum(w) / (N * measure)` with
    /// batch-means standard errors over chunks. Errors are NaN with fewer
    /// than two chunks.
    pub fn estimates(&self) -> Vec<BinEstimate> {
        let scale = self.config.weight_scale();
        let n_paths = self.n_paths() as f64;
        let n_chunks = self.chunks.len();
        let totals = self.totals();
        self.bin_edges()
            .into_iter()
            .enumerate()
            .map(|(i, (lo, hi))| {
                let measure = self.layout.measure(lo, hi);
                let density = totals[i].sum_w * (scale / (n_paths * measure));
                let (stderr_re, stderr_im) = if n_chunks < 2 {
                    (f64::NAN, f64::NAN)
                } else {
                    let per_chunk: Vec<Complex64> = self
                        .chunks
                        .values()
                        .map(|c| c.bins[i].sum_w * (scale / (c.paths as f64 * measure)))
                        .collect();
                    batch_stderr(&per_chunk)
                };
                BinEstimate {
                    bin_lo: lo,
                    bin_hi: hi,
                    re_density: density.re,
                    im_density: density.im,
                    stderr_re,
                    stderr_im,
                }
            })
            .collect()
    }

    /// Union of two histograms of the same experiment.
    pub fn merge(&self, other: &ComplexHistogram) -> Result<ComplexHistogram> {
        if !self.config.same_experiment(&other.config) || self.layout != other.layout {
            return Err(Error::ConfigMismatch(
                "histograms describe different experiments (spin, L, binning, chunking or axis differ)".into(),
            ));
        }
        let mut out = self.clone();
        for chunk in other.chunks.values() {
            out.insert(chunk.clone())?;
        }
        Ok(out)
    }
}

/// Standard error of the mean of per-batch values, separately for the real
/// and imaginary parts.
pub(crate) fn batch_stderr(values: &[Complex64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / n;
    let (vr, vi) = values.iter().fold((0.0, 0.0), |(vr, vi), v| {
        let d = v - mean;
        (vr + d.re * d.re, vi + d.im * d.im)
    });
    ((vr / (n * (n - 1.0))).sqrt(), (vi / (n * (n - 1.0))).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::SpinRep;

    fn chunk(seed: u64, index: u64, n_bins: usize, fill: f64) -> ChunkAccumulator {
        let mut c = ChunkAccumulator::new(ChunkId { seed, index }, n_bins);
        c.paths = 10;
        for (i, b) in c.bins.iter_mut().enumerate() {
            b.sum_w = Complex64::new(fill * i as f64, -fill);
            b.sum_w2 = fill * fill;
            b.count = 3;
        }
        c.weights.push(Complex64::new(fill, 0.0));
        c
    }

    fn config() -> McConfig {
        McConfig::new(SpinRep::HALF, 3, 10).with_bins(4).with_chunk_size(10)
    }

    #[test]
    fn merge_identity_and_commutativity() {
        let cfg = config();
        let a = ComplexHistogram::from_chunks(&cfg, BinLayout::Radial, vec![chunk(0, 0, 4, 1.0), chunk(0, 1, 4, 2.5)]).unwrap();
        let b = ComplexHistogram::from_chunks(&cfg, BinLayout::Radial, vec![chunk(0, 2, 4, 0.3)]).unwrap();
        let empty = ComplexHistogram::empty(&cfg, BinLayout::Radial);
        assert_eq!(a.merge(&empty).unwrap(), a);
        assert_eq!(empty.merge(&a).unwrap(), a);
        let ab = a.merge(&b).unwrap();
        let ba = b.merge(&a).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.n_paths(), 30);
        assert_eq!(ab.estimates(), ba.estimates());
    }

    #[test]
    fn merge_rejects_mismatch_and_overlap() {
        let cfg = config();
        let a = ComplexHistogram::from_chunks(&cfg, BinLayout::Radial, vec![chunk(0, 0, 4, 1.0)]).unwrap();
        let other = McConfig { slices: 4, ..cfg.clone() };
        let b = ComplexHistogram::from_chunks(&other, BinLayout::Radial, vec![chunk(0, 1, 4, 1.0)]).unwrap();
        assert!(matches!(a.merge(&b), Err(Error::ConfigMismatch(_))));
        assert!(matches!(a.merge(&a), Err(Error::ConfigMismatch(_))));
        let proj = ComplexHistogram::empty(&cfg, BinLayout::Projected { axis: UnitVector::NORTH });
        assert!(a.merge(&proj).is_err());
        // Same chunk index from a different seed is a different stream.
        let c = ComplexHistogram::from_chunks(&cfg, BinLayout::Radial, vec![chunk(1, 0, 4, 1.0)]).unwrap();
        assert_eq!(a.merge(&c).unwrap().n_chunks(), 2);
    }

    #[test]
    fn edges_and_measures() {
        let cfg = config();
        let h = ComplexHistogram::empty(&cfg, BinLayout::Radial);
        let edges = h.bin_edges();
        assert_eq!(edges.first().unwrap().0, 0.0);
        assert_eq!(edges.last().unwrap().1, 1.5);
        let total: f64 = edges.iter().map(|&(lo, hi)| BinLayout::Radial.measure(lo, hi)).sum();
        assert!((total - 4.0 * PI / 3.0 * 1.5f64.powi(3)).abs() < 1e-12);
        let p = ComplexHistogram::empty(&cfg, BinLayout::Projected { axis: UnitVector::NORTH });
        assert_eq!(p.bin_edges().first().unwrap().0, -1.5);
    }

    #[test]
    fn batch_stderr_of_constant_is_zero() {
        let v = vec![Complex64::new(2.0, -1.0); 5];
        assert_eq!(batch_stderr(&v), (0.0, 0.0));
        let v = [Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)];
        assert_eq!(batch_stderr(&v).0, 1.0);
    }
}
