use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::histogram::{batch_stderr, ComplexHistogram, WeightSums};

/// Serialize NaN as `null` and read `null` back as NaN.
pub(crate) mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Sign-problem diagnostics of a run. Complex values serialize as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignMetrics {
    pub n_paths: u64,
    pub mean_weight: Complex64,
    #[serde(with = "nan_as_null")]
    pub mean_weight_stderr_re: f64,
    #[serde(with = "nan_as_null")]
    pub mean_weight_stderr_im: f64,
    pub mean_abs_weight: f64,
    #[serde(with = "nan_as_null")]
    pub mean_abs_weight_stderr: f64,
    /// `|E[w]| / E[|w|]`; 1 means no sign problem.
    pub phase_quality: f64,
    #[serde(with = "nan_as_null")]
    pub phase_quality_stderr: f64,
    /// `(2s+1)^{L-1} E[w]`, which is 1 in expectation.
    pub normalization_check: Complex64,
    #[serde(with = "nan_as_null")]
    pub normalization_check_stderr_re: f64,
    #[serde(with = "nan_as_null")]
    pub normalization_check_stderr_im: f64,
    /// Variance of the scaled per-path weight `(2s+1)^{L-1} w`.
    pub scaled_weight_variance: f64,
}

impl SignMetrics {
    pub fn from_histogram(hist: &ComplexHistogram) -> Self {
        let scale = hist.config().weight_scale();
        let chunks: Vec<(u64, WeightSums)> = hist.chunks().map(|c| (c.paths, c.weights)).collect();
        let total = hist.weight_totals();
        let n = hist.n_paths() as f64;

        let mean_weight = total.sum_w / n;
        let mean_abs_weight = total.sum_abs / n;
        let phase_quality = mean_weight.norm() / mean_abs_weight;
        let scaled_weight_variance = scale * scale * (total.sum_abs2 / n - mean_weight.norm_sqr());

        let (mut se_w, mut se_abs, mut se_pq) = ((f64::NAN, f64::NAN), f64::NAN, f64::NAN);
        if chunks.len() >= 2 {
            let means: Vec<Complex64> = chunks.iter().map(|(p, w)| w.sum_w / *p as f64).collect();
            se_w = batch_stderr(&means);
            let abs: Vec<Complex64> = chunks.iter().map(|(p, w)| Complex64::from(w.sum_abs / *p as f64)).collect();
            se_abs = batch_stderr(&abs).0;
            se_pq = jackknife_phase_quality(&chunks, &total);
        }

        SignMetrics {
            n_paths: hist.n_paths(),
            mean_weight,
            mean_weight_stderr_re: se_w.0,
            mean_weight_stderr_im: se_w.1,
            mean_abs_weight,
            mean_abs_weight_stderr: se_abs,
            phase_quality,
            phase_quality_stderr: se_pq,
            normalization_check: mean_weight * scale,
            normalization_check_stderr_re: se_w.0 * scale,
            normalization_check_stderr_im: se_w.1 * scale,
            scaled_weight_variance,
        }
    }
}

/// Leave-one-chunk-out jackknife error of the ratio `|sum w| / sum |w|`.
fn jackknife_phase_quality(chunks: &[(u64, WeightSums)], total: &WeightSums) -> f64 {
    let n = chunks.len() as f64;
    let loo: Vec<f64> = chunks
        .iter()
        .map(|(_, w)| (total.sum_w - w.sum_w).norm() / (total.sum_abs - w.sum_abs))
        .collect();
    let mean = loo.iter().sum::<f64>() / n;
    let var = loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>() * (n - 1.0) / n;
    var.sqrt()
}
