//! Monte Carlo histograms against analytic curves or against each other.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytic::{discretised_radial_cdf, smeared_density, smeared_marginal, SmearingKernel};
use crate::error::{Error, Result};
use crate::mc::{nan_as_null, BinEstimate, BinLayout};
use crate::quad::AdaptiveIntegrator;
use crate::report::SCHEMA_VERSION;
use crate::spin::SpinRep;

pub const DEFAULT_CHI2_THRESHOLD: f64 = 2.0;

/// How a bin's density relates to its mass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Bins are spherical shells in `S`; density is per unit volume.
    Radial,
    /// Bins are intervals of a projection; density is per unit length.
    Linear,
}

impl Geometry {
    pub fn measure(self, lo: f64, hi: f64) -> f64 {
        match self {
            Geometry::Radial => 4.0 * PI / 3.0 * (hi.powi(3) - lo.powi(3)),
            Geometry::Linear => hi - lo,
        }
    }
}

impl From<BinLayout> for Geometry {
    fn from(layout: BinLayout) -> Self {
        match layout {
            BinLayout::Radial => Geometry::Radial,
            BinLayout::Projected { .. } => Geometry::Linear,
        }
    }
}

fn integrator() -> AdaptiveIntegrator {
    AdaptiveIntegrator::new(1e-13, 1e-11)
}

/// Smeared radial density averaged over each shell `[lo, hi]`.
pub fn radial_bin_averages(edges: &[(f64, f64)], spin: SpinRep, kernel: &SmearingKernel) -> Result<Vec<f64>> {
    let q = integrator();
    edges
        .iter()
        .map(|&(lo, hi)| {
            if lo < 0.0 {
                return Err(Error::InvalidArgument(format!("radial bin starts below zero: {lo}")));
            }
            let mass = q.integrate(lo, hi, |s| {
                4.0 * PI * s * s * smeared_density(s, spin, kernel).unwrap_or(f64::NAN)
            });
            Ok(mass / Geometry::Radial.measure(lo, hi))
        })
        .collect()
}

/// Smeared planar marginal averaged over each interval.
pub fn marginal_bin_averages(edges: &[(f64, f64)], spin: SpinRep, kernel: &SmearingKernel) -> Vec<f64> {
    let q = integrator();
    edges
        .iter()
        .map(|&(lo, hi)| q.integrate(lo, hi, |u| smeared_marginal(u, spin, kernel)) / (hi - lo))
        .collect()
}

/// Exact finite-`L` radial density averaged over each shell.
pub fn discretised_radial_bin_averages(edges: &[(f64, f64)], spin: SpinRep, slices: u32) -> Result<Vec<f64>> {
    let mut radii: Vec<f64> = edges.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    radii.dedup();
    let cdf = discretised_radial_cdf(&radii, spin, slices)?;
    let at = |r: f64| cdf[radii.iter().position(|&x| x == r).unwrap()];
    Ok(edges
        .iter()
        .map(|&(lo, hi)| (at(hi) - at(lo)) / Geometry::Radial.measure(lo, hi))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinComparison {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub estimate: f64,
    pub reference: f64,
    #[serde(with = "nan_as_null")]
    pub stderr: f64,
    /// `(estimate - reference) / stderr`; null for unpopulated bins.
    #[serde(with = "nan_as_null")]
    pub pull: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub version: String,
    pub geometry: Geometry,
    /// Bins with a finite, positive standard error.
    pub populated_bins: usize,
    pub chi2: f64,
    pub dof: usize,
    #[serde(with = "nan_as_null")]
    pub chi2_per_dof: f64,
    /// `sum |estimate - reference| * bin measure`.
    pub l1_distance: f64,
    pub threshold: f64,
    pub pass: bool,
    pub bins: Vec<BinComparison>,
}

impl ComparisonReport {
    fn build(geometry: Geometry, threshold: f64, bins: Vec<BinComparison>) -> Self {
        let populated: Vec<&BinComparison> = bins.iter().filter(|b| b.stderr.is_finite() && b.stderr > 0.0).collect();
        let chi2 = populated.iter().fold(0.0, |acc, b| acc + b.pull * b.pull);
        let dof = populated.len();
        let chi2_per_dof = if dof > 0 { chi2 / dof as f64 } else { f64::NAN };
        let l1_distance = bins
            .iter()
            .fold(0.0, |acc, b| acc + (b.estimate - b.reference).abs() * geometry.measure(b.bin_lo, b.bin_hi));
        ComparisonReport {
            version: SCHEMA_VERSION.to_string(),
            geometry,
            populated_bins: dof,
            chi2,
            dof,
            chi2_per_dof,
            l1_distance,
            threshold,
            // Without error bars only an exact match passes.
            pass: if dof > 0 { chi2_per_dof <= threshold } else { l1_distance == 0.0 },
            bins,
        }
    }

    /// Mean standard error over populated bins.
    pub fn mean_stderr(&self) -> f64 {
        let errs: Vec<f64> = self.bins.iter().map(|b| b.stderr).filter(|e| e.is_finite() && *e > 0.0).collect();
        errs.iter().sum::<f64>() / errs.len() as f64
    }
}

fn pull(diff: f64, stderr: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if stderr.is_finite() && stderr > 0.0 {
        diff / stderr
    } else {
        f64::NAN
    }
}

/// Real parts of `bins` against reference bin averages.
pub fn compare_to_reference(
    bins: &[BinEstimate],
    reference: &[f64],
    geometry: Geometry,
    threshold: f64,
) -> Result<ComparisonReport> {
    if bins.len() != reference.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} histogram bins against {} reference values",
            bins.len(),
            reference.len()
        )));
    }
    let rows = bins
        .iter()
        .zip(reference)
        .map(|(b, &r)| BinComparison {
            bin_lo: b.bin_lo,
            bin_hi: b.bin_hi,
            estimate: b.re_density,
            reference: r,
            stderr: b.stderr_re,
            pull: pull(b.re_density - r, b.stderr_re),
        })
        .collect();
    Ok(ComparisonReport::build(geometry, threshold, rows))
}

/// Two histograms of the same binning; errors add in quadrature.
pub fn compare_histograms(
    a: &[BinEstimate],
    b: &[BinEstimate],
    geometry: Geometry,
    threshold: f64,
) -> Result<ComparisonReport> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.bin_lo != y.bin_lo || x.bin_hi != y.bin_hi) {
        return Err(Error::ConfigMismatch("histograms have different bin edges".into()));
    }
    let rows = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let stderr = x.stderr_re.hypot(y.stderr_re);
            BinComparison {
                bin_lo: x.bin_lo,
                bin_hi: x.bin_hi,
                estimate: x.re_density,
                reference: y.re_density,
                stderr,
                pull: pull(x.re_density - y.re_density, stderr),
            }
        })
        .collect();
    Ok(ComparisonReport::build(geometry, threshold, rows))
}
