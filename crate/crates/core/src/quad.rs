//! Adaptive Gauss-Legendre integration built on fixed `gauss-quad` rules.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

const MAX_DEPTH: u32 = 40;

/// Interval bisection driven by the disagreement between a 10- and a
/// 20-point Gauss-Legendre rule on each panel.
pub struct AdaptiveIntegrator {
    coarse: GaussLegendre,
    fine: GaussLegendre,
    abs_tol: f64,
    rel_tol: f64,
}

impl AdaptiveIntegrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        AdaptiveIntegrator {
            coarse: GaussLegendre::new(NonZeroUsize::new(10).unwrap()),
            fine: GaussLegendre::new(NonZeroUsize::new(20).unwrap()),
            abs_tol,
            rel_tol,
        }
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let whole = self.fine.integrate(a, b, &f);
        let tol = self.abs_tol.max(self.rel_tol * whole.abs());
        self.panel(a, b, &f, whole, tol, 0)
    }

    fn panel(&self, a: f64, b: f64, f: &impl Fn(f64) -> f64, fine: f64, tol: f64, depth: u32) -> f64 {
        let coarse = self.coarse.integrate(a, b, f);
        if (fine - coarse).abs() <= tol || depth >= MAX_DEPTH {
            return fine;
        }
        let mid = 0.5 * (a + b);
        let left = self.fine.integrate(a, mid, f);
        let right = self.fine.integrate(mid, b, f);
        self.panel(a, mid, f, left, 0.5 * tol, depth + 1) + self.panel(mid, b, f, right, 0.5 * tol, depth + 1)
    }
}

/// Integrates over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks(
    integrator: &AdaptiveIntegrator,
    a: f64,
    b: f64,
    breaks: &[f64],
    f: impl Fn(f64) -> f64,
) -> f64 {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.windows(2).map(|w| integrator.integrate(w[0], w[1], &f)).sum()
}
