use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::smearing::SmearingKernel;
use crate::spin::SpinRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellKind {
    /// `coefficient * delta_3(S)`.
    OriginDelta,
    /// `coefficient * delta'(|S| - m) / |S|`.
    DipoleShell,
}

/// One term of an exact (distributional) Wigner density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellTerm {
    pub kind: ShellKind,
    #[serde(rename = "m")]
    pub radius: f64,
    pub coefficient: f64,
}

impl ShellTerm {
    pub fn origin(weight: f64) -> Self {
        ShellTerm { kind: ShellKind::OriginDelta, radius: 0.0, coefficient: weight }
    }

    pub fn dipole(radius: f64, coefficient: f64) -> Self {
        ShellTerm { kind: ShellKind::DipoleShell, radius, coefficient }
    }

    /// Integral of the term over all of 3-space.
    pub fn mass(&self) -> f64 {
        match self.kind {
            ShellKind::OriginDelta => self.coefficient,
            // \int 4 pi S^2 c delta'(S - m) / S dS = -4 pi c
            ShellKind::DipoleShell => -4.0 * PI * self.coefficient,
        }
    }

    /// 3-D Fourier transform at wave number `k` (real and isotropic).
    pub fn fourier(&self, k: f64) -> f64 {
        match self.kind {
            ShellKind::OriginDelta => self.coefficient,
            ShellKind::DipoleShell => -4.0 * PI * self.coefficient * (k * self.radius).cos(),
        }
    }

    /// Convolution with the Gaussian kernel, evaluated at radius `s_radius >= 0`.
    pub fn smeared(&self, s_radius: f64, kernel: &SmearingKernel) -> f64 {
        let l = kernel.exponent();
        match self.kind {
            ShellKind::OriginDelta => {
                self.coefficient * (l / PI).powf(1.5) * (-l * s_radius * s_radius).exp()
            }
            ShellKind::DipoleShell => {
                // Radial reduction sqrt(l/pi)/S \int r f(r) g(r) dr with
                // g(r) = e^{-l(S-r)^2} - e^{-l(S+r)^2} and f = c delta'(r-m)/r
                // leaves -c sqrt(l/pi) g'(m) / S.
                -self.coefficient * 2.0 * l * (l / PI).sqrt() * dipole_profile(s_radius, self.radius, l)
            }
        }
    }
}

/// `[(S-m) e^{-l(S-m)^2} + (S+m) e^{-l(S+m)^2}] / S`, finite at `S = 0`.
fn dipole_profile(s_radius: f64, m: f64, l: f64) -> f64 {
    let x = 2.0 * l * s_radius * m;
    if x < 0.1 {
        // The bracket is odd in S; expand in x = 2lSm:
        // 2 e^{-l(S^2+m^2)} [cosh x - 2 l m^2 sinh(x)/x]
        let x2 = x * x;
        let (mut cosh, mut sinhc, mut term_c, mut term_s) = (1.0, 1.0, 1.0, 1.0);
        for k in 1..=5 {
            let k2 = 2.0 * k as f64;
            term_c *= x2 / ((k2 - 1.0) * k2);
            term_s *= x2 / (k2 * (k2 + 1.0));
            cosh += term_c;
            sinhc += term_s;
        }
        2.0 * (-l * (s_radius * s_radius + m * m)).exp() * (cosh - 2.0 * l * m * m * sinhc)
    } else {
        let inner = s_radius - m;
        let outer = s_radius + m;
        (inner * (-l * inner * inner).exp() + outer * (-l * outer * outer).exp()) / s_radius
    }
}

/// Operations shared by every list of shell terms.
pub trait ShellTerms {
    fn terms(&self) -> &[ShellTerm];

    fn total_mass(&self) -> f64 {
        self.terms().iter().map(ShellTerm::mass).sum()
    }

    fn fourier(&self, k: f64) -> f64 {
        self.terms().iter().map(|t| t.fourier(k)).sum()
    }

    fn smeared(&self, s_radius: f64, kernel: &SmearingKernel) -> f64 {
        self.terms().iter().map(|t| t.smeared(s_radius, kernel)).sum()
    }
}

impl ShellTerms for [ShellTerm] {
    fn terms(&self) -> &[ShellTerm] {
        self
    }
}

impl ShellTerms for Vec<ShellTerm> {
    fn terms(&self) -> &[ShellTerm] {
        self
    }
}

/// Exact free-spin Wigner function as a list of shell terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellDecomposition {
    pub spin: SpinRep,
    pub terms: Vec<ShellTerm>,
}

impl ShellTerms for ShellDecomposition {
    fn terms(&self) -> &[ShellTerm] {
        &self.terms
    }
}

/// Origin delta of weight `1/(2s+1)` for integer `s`, then one dipole
/// shell for each positive `m <= s`. Shells with `m < 0` carry no weight.
pub fn shell_decomposition(spin: SpinRep) -> ShellDecomposition {
    let dim = spin.dimension() as f64;
    let mut terms = Vec::with_capacity(spin.dimension() / 2 + 1);
    if spin.is_integer() {
        terms.push(ShellTerm::origin(1.0 / dim));
    }
    let coefficient = -1.0 / (2.0 * PI * dim);
    terms.extend(
        spin.projections()
            .rev()
            .filter(|&m| m > 0.0)
            .map(|m| ShellTerm::dipole(m, coefficient)),
    );
    ShellDecomposition { spin, terms }
}
