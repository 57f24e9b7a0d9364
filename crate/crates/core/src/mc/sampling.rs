use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spin::{loop_weight_from_spinors, SpinRep, Spinor, UnitVector};

/// Random stream for one chunk. ChaCha is counter based, so every
/// `(seed, chunk)` pair addresses an independent stream directly.
pub fn chunk_stream(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform point on the sphere: `z` uniform in `[-1, 1]`, azimuth uniform.
pub fn sample_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = TAU * rng.random::<f64>();
    UnitVector::from_z_phi(z, phi)
}

/// One closed coherent-state path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    pub points: Vec<UnitVector>,
    /// Time-averaged label `nbar = sum_i n_i / L`.
    pub mean_label: [f64; 3],
    pub weight: Complex64,
}

impl PathSample {
    /// `(s+1) nbar`, the quantity that is histogrammed.
    pub fn lower_symbol(&self, spin: SpinRep) -> [f64; 3] {
        let scale = spin.s() + 1.0;
        self.mean_label.map(|c| scale * c)
    }
}

/// Reusable buffers for drawing paths without allocating.
#[derive(Default)]
pub(crate) struct PathScratch {
    points: Vec<UnitVector>,
    spinors: Vec<Spinor>,
}

impl PathScratch {
    /// Draws `slices` independent points; returns `(nbar, weight)`.
    pub(crate) fn draw<R: Rng + ?Sized>(&mut self, slices: u32, spin: SpinRep, rng: &mut R) -> ([f64; 3], Complex64) {
        self.points.clear();
        self.spinors.clear();
        let mut sum = [0.0; 3];
        for _ in 0..slices {
            let n = sample_unit_vector(rng);
            sum[0] += n.x();
            sum[1] += n.y();
            sum[2] += n.z();
            self.spinors.push(Spinor::from_unit_vector(&n));
            self.points.push(n);
        }
        let inv = 1.0 / f64::from(slices);
        (sum.map(|c| c * inv), loop_weight_from_spinors(&self.spinors, spin))
    }
}

pub fn sample_path<R: Rng + ?Sized>(slices: u32, spin: SpinRep, rng: &mut R) -> Result<PathSample> {
    if slices < 2 {
        return Err(Error::InvalidArgument(format!("a path needs L >= 2 slices, got {slices}")));
    }
    let mut scratch = PathScratch::default();
    let (mean_label, weight) = scratch.draw(slices, spin, rng);
    Ok(PathSample { points: scratch.points, mean_label, weight })
}
