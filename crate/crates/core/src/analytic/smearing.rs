use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::shells::{shell_decomposition, ShellKind, ShellTerm, ShellTerms};
use crate::error::{Error, Result};
use crate::quad::AdaptiveIntegrator;
use crate::spin::SpinRep;

/// Half-separation of the two shells standing in for a dipole layer in
/// the quadrature oracle.
pub const ORACLE_SHELL_SPLIT: f64 = 1e-5;

/// Isotropic Gaussian `(l/pi)^{3/2} exp(-l |x|^2)` with `l = L / c`.
///
/// `c = 1` is the asymptotic width of the `L`-slice approximant for spin
/// 1/2; other values are for empirical fits at higher spin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmearingKernel {
    #[serde(rename = "L")]
    slices: u32,
    #[serde(rename = "c")]
    width_scale: f64,
}

impl SmearingKernel {
    pub fn new(slices: u32) -> Result<Self> {
        Self::with_width_scale(slices, 1.0)
    }

    pub fn with_width_scale(slices: u32, width_scale: f64) -> Result<Self> {
        if slices == 0 {
            return Err(Error::InvalidArgument("the kernel needs L >= 1 time slices".into()));
        }
        if !(width_scale.is_finite() && width_scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "width scale must be positive, got {width_scale}"
            )));
        }
        Ok(SmearingKernel { slices, width_scale })
    }

    pub fn slices(&self) -> u32 {
        self.slices
    }

    pub fn width_scale(&self) -> f64 {
        self.width_scale
    }

    /// Per-axis Gaussian exponent `L / c`.
    pub fn exponent(&self) -> f64 {
        f64::from(self.slices) / self.width_scale
    }

    /// Kernel value at displacement `r`.
    pub fn value(&self, r: f64) -> f64 {
        let l = self.exponent();
        (l / PI).powf(1.5) * (-l * r * r).exp()
    }
}

fn check_radius(s_radius: f64) -> Result<()> {
    if !(s_radius >= 0.0 && s_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be >= 0, got {s_radius}")));
    }
    Ok(())
}

/// Gaussian-smeared free-spin Wigner density at radius `s_radius`.
pub fn smeared_density(s_radius: f64, spin: SpinRep, kernel: &SmearingKernel) -> Result<f64> {
    check_radius(s_radius)?;
    Ok(shell_decomposition(spin).smeared(s_radius, kernel))
}

/// Smeared density of a thin uniform shell `delta(r - R) / r` (mass `4 pi R`),
/// with the angular integral done by adaptive quadrature.
fn smeared_thin_shell(q: &AdaptiveIntegrator, s_radius: f64, shell: f64, l: f64) -> f64 {
    let kappa = 2.0 * l * s_radius * shell;
    let angular = q.integrate(-1.0, 1.0, |u| (-kappa * (1.0 - u)).exp());
    shell * 2.0 * PI * (l / PI).powf(1.5) * (-l * (s_radius - shell).powi(2)).exp() * angular
}

fn term_by_quadrature(q: &AdaptiveIntegrator, term: &ShellTerm, s_radius: f64, l: f64) -> f64 {
    let eps = ORACLE_SHELL_SPLIT;
    match term.kind {
        // A point mass w is a shell delta(r - eps)/r of mass 4 pi eps scaled to w.
        ShellKind::OriginDelta => {
            term.coefficient / (4.0 * PI * eps) * smeared_thin_shell(q, s_radius, eps, l)
        }
        // delta'(r - m) ~ [delta(r - m + eps) - delta(r - m - eps)] / (2 eps)
        ShellKind::DipoleShell => {
            let inner = smeared_thin_shell(q, s_radius, term.radius - eps, l);
            let outer = smeared_thin_shell(q, s_radius, term.radius + eps, l);
            term.coefficient * (inner - outer) / (2.0 * eps)
        }
    }
}

/// Independent evaluation of [`smeared_density`]: each dipole layer is
/// replaced by two uniform shells a distance `2 eps` apart, and the
/// convolution with the kernel is integrated numerically.
pub fn smeared_density_quadrature_oracle(
    s_radius: f64,
    spin: SpinRep,
    kernel: &SmearingKernel,
) -> Result<f64> {
    check_radius(s_radius)?;
    let q = AdaptiveIntegrator::new(1e-16, 1e-14);
    let l = kernel.exponent();
    Ok(shell_decomposition(spin)
        .terms
        .iter()
        .map(|t| term_by_quadrature(&q, t, s_radius, l))
        .sum())
}

/// Positions `m = -s..s` of the exact planar marginal, each with weight `1/(2s+1)`.
pub fn marginal_comb(spin: SpinRep) -> Vec<(f64, f64)> {
    let w = 1.0 / spin.dimension() as f64;
    spin.projections().rev().map(|m| (m, w)).collect()
}

/// One-dimensional marginal of the smeared density along any axis.
pub fn smeared_marginal(u: f64, spin: SpinRep, kernel: &SmearingKernel) -> f64 {
    let l = kernel.exponent();
    let norm = (l / PI).sqrt();
    marginal_comb(spin)
        .into_iter()
        .map(|(m, w)| w * norm * (-l * (u - m).powi(2)).exp())
        .sum()
}

/// Normalized character `sin((2s+1)t/2) / ((2s+1) sin(t/2))` of the spin-`s`
/// representation, the Fourier transform of the free-spin Wigner function.
pub fn char_free(t: f64, spin: SpinRep) -> f64 {
    let dim = spin.dimension() as f64;
    let den = (0.5 * t).sin();
    if den.abs() < 1e-6 {
        // Near t = 2 pi k fall back to the spectral sum.
        spin.projections().map(|m| (m * t).cos()).sum::<f64>() / dim
    } else {
        (0.5 * dim * t).sin() / (dim * den)
    }
}
