use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{SpinRep, UnitVector};

/// Parameters of one Monte Carlo experiment at fixed `s` and `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    #[serde(rename = "two_s")]
    pub spin: SpinRep,
    #[serde(rename = "L")]
    pub slices: u32,
    pub n_samples: u64,
    pub n_bins: usize,
    pub r_max: f64,
    pub seed: u64,
    pub chunk_size: u64,
    /// Axis of the optional planar-marginal histogram.
    pub project_axis: Option<UnitVector>,
}

impl McConfig {
    pub const DEFAULT_BINS: usize = 60;
    pub const DEFAULT_CHUNK_SIZE: u64 = 10_000;

    pub fn new(spin: SpinRep, slices: u32, n_samples: u64) -> Self {
        McConfig {
            spin,
            slices,
            n_samples,
            n_bins: Self::DEFAULT_BINS,
            r_max: spin.s() + 1.0,
            seed: 0,
            chunk_size: Self::DEFAULT_CHUNK_SIZE,
            project_axis: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_bins(mut self, n_bins: usize) -> Self {
        self.n_bins = n_bins;
        self
    }

    pub fn with_r_max(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    pub fn with_axis(mut self, axis: UnitVector) -> Self {
        self.project_axis = Some(axis);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.slices < 2 {
            return bad(format!("L must be >= 2, got {}", self.slices));
        }
        if self.n_samples == 0 {
            return bad("n_samples must be >= 1".into());
        }
        if self.n_bins == 0 {
            return bad("n_bins must be >= 1".into());
        }
        if self.chunk_size == 0 {
            return bad("chunk_size must be >= 1".into());
        }
        // |(s+1) nbar| never exceeds s+1.
        let support = self.spin.s() + 1.0;
        if !(self.r_max.is_finite() && self.r_max >= support) {
            return bad(format!("r_max must be >= s+1 = {support}, got {}", self.r_max));
        }
        Ok(())
    }

    /// Validated copy with `chunk_size <= n_samples` and `n_samples`
    /// padded up to a whole number of chunks.
    pub fn resolved(&self) -> Result<McConfig> {
        self.validate()?;
        let mut out = self.clone();
        out.chunk_size = out.chunk_size.min(out.n_samples);
        out.n_samples = out.n_samples.div_ceil(out.chunk_size) * out.chunk_size;
        Ok(out)
    }

    pub fn n_chunks(&self) -> u64 {
        self.n_samples.div_ceil(self.chunk_size.max(1))
    }

    /// `(2s+1)^{L-1}`: one factor `(2s+1)` per slice from the coherent-state
    /// measure, divided by the overall `2s+1`.
    pub fn weight_scale(&self) -> f64 {
        (self.spin.dimension() as f64).powi(self.slices as i32 - 1)
    }

    /// Whether two configs describe the same experiment up to seed and length.
    pub fn same_experiment(&self, other: &McConfig) -> bool {
        self.spin == other.spin
            && self.slices == other.slices
            && self.n_bins == other.n_bins
            && self.r_max == other.r_max
            && self.chunk_size == other.chunk_size
            && self.project_axis == other.project_axis
    }
}
