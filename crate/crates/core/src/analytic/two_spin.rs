//! Two spins 1/2 coupled by `H = -J S1 . S2`.
//!
//! The total-spin Wigner function is the thermal mixture of the triplet
//! (spin 1) and singlet (spin 0) free-spin functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::shells::{shell_decomposition, ShellKind, ShellTerm, ShellTerms};
use super::smearing::{char_free, SmearingKernel};
use crate::error::{Error, Result};
use crate::oracle::{hermitian_function, spin_matrices, CMatrix};
use crate::spin::SpinRep;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSpinModel {
    pub beta: f64,
    #[serde(rename = "J")]
    pub coupling: f64,
}

impl TwoSpinModel {
    pub fn new(beta: f64, coupling: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be finite and >= 0, got {beta}")));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidArgument(format!("J must be finite, got {coupling}")));
        }
        Ok(TwoSpinModel { beta, coupling })
    }

    pub fn beta_j(&self) -> f64 {
        self.beta * self.coupling
    }
}

/// Thermal populations of the two total-spin sectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorWeights {
    pub p_triplet: f64,
    pub p_singlet: f64,
}

/// `3 e^{bJ/4} / (3 e^{bJ/4} + e^{-3bJ/4})` and its complement.
pub fn two_spin_weights(model: &TwoSpinModel) -> SectorWeights {
    let bj = model.beta_j();
    // Divide through by e^{bJ/4} so that neither sector overflows.
    SectorWeights {
        p_triplet: 3.0 / (3.0 + (-bj).exp()),
        p_singlet: 1.0 / (3.0 * bj.exp() + 1.0),
    }
}

/// Exact mixture `p_t W_1 + p_s W_0` as a term list. The two origin deltas
/// are combined; terms with zero weight are dropped.
pub fn two_spin_exact_terms(model: &TwoSpinModel) -> Vec<ShellTerm> {
    let w = two_spin_weights(model);
    let triplet = shell_decomposition(SpinRep::ONE);
    let singlet = shell_decomposition(SpinRep::ZERO);
    let origin_mass = |terms: &[ShellTerm]| -> f64 {
        terms.iter().filter(|t| t.kind == ShellKind::OriginDelta).map(ShellTerm::mass).sum()
    };
    let origin = w.p_triplet * origin_mass(&triplet.terms) + w.p_singlet * origin_mass(&singlet.terms);
    let mut terms = Vec::with_capacity(2);
    if origin != 0.0 {
        terms.push(ShellTerm::origin(origin));
    }
    terms.extend(
        triplet
            .terms
            .iter()
            .filter(|t| t.radius > 0.0 && w.p_triplet > 0.0)
            .map(|t| ShellTerm::dipole(t.radius, t.coefficient * w.p_triplet)),
    );
    terms
}

pub fn two_spin_smeared_density(s_radius: f64, model: &TwoSpinModel, kernel: &SmearingKernel) -> Result<f64> {
    if !(s_radius >= 0.0 && s_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be >= 0, got {s_radius}")));
    }
    Ok(two_spin_exact_terms(model).smeared(s_radius, kernel))
}

/// `p_t chi_1(|lambda|) + p_s`: the character of the mixture.
pub fn two_spin_char_mixture(lambda_norm: f64, model: &TwoSpinModel) -> f64 {
    let w = two_spin_weights(model);
    w.p_triplet * char_free(lambda_norm, SpinRep::ONE) + w.p_singlet
}

/// `Tr(e^{-bH} e^{-i lambda.(S1+S2)}) / Tr(e^{-bH})` from 4x4 matrices.
pub fn two_spin_char_oracle(lambda: &[f64; 3], model: &TwoSpinModel) -> Result<Complex64> {
    let single = spin_matrices(SpinRep::HALF)?;
    let id = CMatrix::identity(2, 2);
    let first = [&single.sx, &single.sy, &single.sz].map(|m| m.kronecker(&id));
    let second = [&single.sx, &single.sy, &single.sz].map(|m| id.kronecker(m));

    let mut hamiltonian = CMatrix::zeros(4, 4);
    let mut probe = CMatrix::zeros(4, 4);
    for axis in 0..3 {
        hamiltonian -= &first[axis] * &second[axis] * Complex64::from(model.coupling);
        probe += (&first[axis] + &second[axis]) * Complex64::from(lambda[axis]);
    }
    let beta = model.beta;
    let rho = hermitian_function(&hamiltonian, |e| Complex64::from((-beta * e).exp()));
    let rotation = hermitian_function(&probe, |e| Complex64::from_polar(1.0, -e));
    Ok((&rho * rotation).trace() / rho.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model(beta_j: f64) -> TwoSpinModel {
        TwoSpinModel::new(1.0, beta_j).unwrap()
    }

    #[test]
    fn weights() {
        let w = two_spin_weights(&TwoSpinModel::new(0.0, 3.0).unwrap());
        assert_eq!((w.p_triplet, w.p_singlet), (0.75, 0.25));
        let w = two_spin_weights(&model(4.0));
        let e = 1f64.exp();
        assert_abs_diff_eq!(w.p_triplet, 3.0 * e / (3.0 * e + (-3.0f64).exp()), epsilon = 1e-15);
        assert_abs_diff_eq!(w.p_triplet, 0.99393, epsilon = 5e-6);
        let w = two_spin_weights(&model(1e4));
        assert_eq!((w.p_triplet, w.p_singlet), (1.0, 0.0));
        let w = two_spin_weights(&model(-1e4));
        assert_eq!((w.p_triplet, w.p_singlet), (0.0, 1.0));
        assert!(TwoSpinModel::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn exact_mixture_at_infinite_temperature() {
        let terms = two_spin_exact_terms(&TwoSpinModel::new(0.0, 1.0).unwrap());
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].kind, ShellKind::OriginDelta);
        assert_abs_diff_eq!(terms[0].mass(), 0.5, epsilon = 1e-15);
        assert_eq!(terms[1].radius, 1.0);
        assert_abs_diff_eq!(terms[1].mass(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(terms.total_mass(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_mixture_limits() {
        let ferro = two_spin_exact_terms(&model(1e4));
        assert_eq!(ferro, shell_decomposition(SpinRep::ONE).terms);
        let anti = two_spin_exact_terms(&model(-1e4));
        assert_eq!(anti, vec![ShellTerm::origin(1.0)]);
    }

    #[test]
    fn smeared_mixture_is_linear() {
        let m = model(0.7);
        let k = SmearingKernel::new(8).unwrap();
        let w = two_spin_weights(&m);
        for s in [0.0, 0.2, 0.9, 1.3] {
            let mixed = two_spin_smeared_density(s, &m, &k).unwrap();
            let parts = w.p_triplet * shell_decomposition(SpinRep::ONE).smeared(s, &k)
                + w.p_singlet * shell_decomposition(SpinRep::ZERO).smeared(s, &k);
            assert_abs_diff_eq!(mixed, parts, epsilon = 1e-12);
        }
    }

    #[test]
    fn oracle_examples() {
        let c = two_spin_char_oracle(&[0.0; 3], &model(2.0)).unwrap();
        assert_abs_diff_eq!((c - 1.0).norm(), 0.0, epsilon = 1e-12);
        let c = two_spin_char_oracle(&[0.0, std::f64::consts::PI, 0.0], &TwoSpinModel::new(0.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(c.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn oracle_matches_mixture() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let lambda: [f64; 3] = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let beta = rng.random_range(0.1..2.0);
            let m = TwoSpinModel::new(beta, rng.random_range(-5.0..5.0) / beta).unwrap();
            let t = (lambda[0].powi(2) + lambda[1].powi(2) + lambda[2].powi(2)).sqrt();
            let oracle = two_spin_char_oracle(&lambda, &m).unwrap();
            assert!((oracle - two_spin_char_mixture(t, &m)).norm() <= 1e-10);
        }
    }
}
