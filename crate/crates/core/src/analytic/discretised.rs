//! Exact characteristic function of the `L`-slice approximant.
//!
//! With `L` independent uniform points, the Fourier transform of the
//! approximant factorizes: for `lambda` along z every slice contributes the
//! diagonal matrix
//! `A_m(alpha) = (2s+1)/2 \int_{-1}^{1} e^{-i alpha u} |<m|n(u)>|^2 du`
//! with `alpha = (s+1)|lambda|/L`, and the closed loop gives a trace of the
//! `L`-th power. This is an independent route to what the Monte Carlo
//! engine samples.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::SpinRep;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `(1/(2s+1)) sum_m A_m(alpha)^L`, the Fourier transform at wave number
/// `k` of the `L`-slice approximant (and of its planar marginal).
pub fn discretised_char(k: f64, spin: SpinRep, slices: u32) -> Result<Complex64> {
    if slices < 2 {
        return Err(Error::InvalidArgument(format!("need L >= 2 slices, got {slices}")));
    }
    if !k.is_finite() {
        return Err(Error::InvalidArgument(format!("wave number must be finite, got {k}")));
    }
    let alpha = (spin.s() + 1.0) * k / f64::from(slices);
    let two_s = spin.two_s();
    let nodes = 48 + two_s as usize + 2 * alpha.abs().ceil() as usize;
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
    let dim = spin.dimension() as f64;

    let mut total = Complex64::new(0.0, 0.0);
    for up in 0..=two_s {
        // |<m|n>|^2 = C(2s, s+m) ((1+u)/2)^{s+m} ((1-u)/2)^{s-m}, s+m = up
        let c = binomial(two_s, up);
        let mut a = Complex64::new(0.0, 0.0);
        for &(u, w) in rule.iter() {
            let p = c * ((1.0 + u) / 2.0).powi(up as i32) * ((1.0 - u) / 2.0).powi((two_s - up) as i32);
            a += Complex64::from_polar(w * p, -alpha * u);
        }
        total += (a * (dim / 2.0)).powu(slices);
    }
    Ok(total / dim)
}

const PANEL_WIDTH: f64 = 0.5;
const TAIL_CUTOFF: f64 = 1e-13;
const MAX_WAVE_NUMBER: f64 = 2000.0;

/// Probability that `|(s+1) nbar|` lies below each radius, for the exact
/// `L`-slice approximant, by Fourier inversion of [`discretised_char`]:
/// `P(S) = (2/pi) \int_0^inf chi(k) [sin(kS) - kS cos(kS)] / k dk`.
///
/// The integral is cut once `|chi|` stays below 1e-13 over a unit of `k`,
/// and in any case at `k = 2000`, which only matters for `L = 2`.
pub fn discretised_radial_cdf(radii: &[f64], spin: SpinRep, slices: u32) -> Result<Vec<f64>> {
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::InvalidArgument(format!("radius must be finite and >= 0, got {r}")));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(16).unwrap());
    let mut out = vec![0.0; radii.len()];
    let mut k0 = 0.0;
    let mut quiet = 0.0;
    while k0 < MAX_WAVE_NUMBER && quiet < 1.0 {
        let mut peak = 0.0f64;
        for &(x, w) in rule.iter() {
            let k = k0 + 0.5 * PANEL_WIDTH * (x + 1.0);
            let chi = discretised_char(k, spin, slices)?.re;
            peak = peak.max(chi.abs());
            let wk = 0.5 * PANEL_WIDTH * w * chi / k;
            for (acc, &r) in out.iter_mut().zip(radii) {
                let kr = k * r;
                *acc += wk * (kr.sin() - kr * kr.cos());
            }
        }
        quiet = if peak < TAIL_CUTOFF { quiet + PANEL_WIDTH } else { 0.0 };
        k0 += PANEL_WIDTH;
    }
    Ok(out.into_iter().map(|v| v * 2.0 / std::f64::consts::PI).collect())
}
