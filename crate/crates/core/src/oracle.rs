//! Dense `(2s+1)`-dimensional matrix representations used to validate the
//! closed forms elsewhere in the crate. Nothing on the Monte Carlo path
//! depends on this module.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{SpinRep, Spinor, UnitVector};

/// Largest `2s` for which the dense oracles are built.
pub const MAX_ORACLE_TWO_S: u32 = 20;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Angular-momentum matrices in the `|s, m>` basis ordered `m = s, ..., -s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrices {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

impl SpinMatrices {
    pub fn dimension(&self) -> usize {
        self.sz.nrows()
    }

    /// `v . S` for an arbitrary real 3-vector.
    pub fn dot(&self, v: &[f64; 3]) -> CMatrix {
        &self.sx * Complex64::from(v[0]) + &self.sy * Complex64::from(v[1]) + &self.sz * Complex64::from(v[2])
    }
}

fn check_oracle_spin(spin: SpinRep) -> Result<()> {
    if spin.two_s() > MAX_ORACLE_TWO_S {
        return Err(Error::InvalidArgument(format!(
            "matrix oracles are limited to 2s <= {MAX_ORACLE_TWO_S}, got 2s = {}",
            spin.two_s()
        )));
    }
    Ok(())
}

pub fn spin_matrices(spin: SpinRep) -> Result<SpinMatrices> {
    check_oracle_spin(spin)?;
    let dim = spin.dimension();
    let s = spin.s();
    let ms: Vec<f64> = spin.projections().collect();

    let mut raise = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        // S+ |m_k> = sqrt(s(s+1) - m_k(m_k+1)) |m_k + 1>, and m_{k-1} = m_k + 1.
        let m = ms[k];
        raise[(k - 1, k)] = Complex64::from((s * (s + 1.0) - m * (m + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let half = Complex64::from(0.5);
    let sx = (&raise + &lower) * half;
    let sy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let sz = CMatrix::from_diagonal(&CVector::from_iterator(dim, ms.iter().map(|&m| Complex64::from(m))));
    Ok(SpinMatrices { sx, sy, sz })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `|n>` as a vector of `|s, m>` amplitudes, in the same gauge as
/// [`Spinor::from_unit_vector`]: the amplitude of `m = s - k` is
/// `sqrt(C(2s, k)) a^{2s-k} b^k`.
pub fn coherent_state_vector(n: &UnitVector, spin: SpinRep) -> Result<CVector> {
    check_oracle_spin(spin)?;
    let z = Spinor::from_unit_vector(n);
    let two_s = spin.two_s();
    Ok(CVector::from_iterator(
        spin.dimension(),
        (0..=two_s).map(|k| z.a.powu(two_s - k) * z.b.powu(k) * binomial(two_s, k).sqrt()),
    ))
}

/// `<u|v>`.
pub fn inner_product(u: &CVector, v: &CVector) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// `f(H)` for Hermitian `H` via its eigendecomposition.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| f(e)),
    ));
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

/// Normalized character `Tr exp(-i lambda . S) / (2s+1)` by the spectral
/// sum over `m`. Real up to rounding.
pub fn matrix_char(lambda: &[f64; 3], spin: SpinRep) -> Complex64 {
    let t = (lambda[0] * lambda[0] + lambda[1] * lambda[1] + lambda[2] * lambda[2]).sqrt();
    let sum: Complex64 = spin.projections().map(|m| Complex64::from_polar(1.0, -t * m)).sum();
    sum / spin.dimension() as f64
}

/// The same character from the dense matrix exponential of `lambda . S`.
pub fn matrix_char_dense(lambda: &[f64; 3], spin: SpinRep) -> Result<Complex64> {
    let mats = spin_matrices(spin)?;
    let u = hermitian_function(&mats.dot(lambda), |e| Complex64::from_polar(1.0, -e));
    Ok(u.trace() / spin.dimension() as f64)
}

/// `((2s+1)/4pi) \int dn |n><n|` by a product rule: Gauss-Legendre in
/// `cos(theta)` times a uniform azimuthal grid. Should be the identity.
pub fn resolution_of_unity(spin: SpinRep, n_theta: usize, n_phi: usize) -> Result<CMatrix> {
    check_oracle_spin(spin)?;
    let n_theta = NonZeroUsize::new(n_theta)
        .ok_or_else(|| Error::InvalidArgument("need at least one polar node".into()))?;
    if n_phi == 0 {
        return Err(Error::InvalidArgument("need at least one azimuthal node".into()));
    }
    let rule = GaussLegendre::new(n_theta);
    let dim = spin.dimension();
    let mut acc = CMatrix::zeros(dim, dim);
    let dphi = std::f64::consts::TAU / n_phi as f64;
    for &(z, w) in rule.iter() {
        for j in 0..n_phi {
            let n = UnitVector::from_z_phi(z, j as f64 * dphi);
            let v = coherent_state_vector(&n, spin)?;
            acc += (&v * v.adjoint()) * Complex64::from(w * dphi);
        }
    }
    Ok(acc * Complex64::from(dim as f64 / (4.0 * std::f64::consts::PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::overlap;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn random_unit(rng: &mut impl Rng) -> UnitVector {
        UnitVector::from_z_phi(rng.random_range(-1.0..=1.0), rng.random_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn low_spin_matrices() {
        let m = spin_matrices(SpinRep::HALF).unwrap();
        assert_eq!(m.sz[(0, 0)].re, 0.5);
        assert_eq!(m.sz[(1, 1)].re, -0.5);
        let m = spin_matrices(SpinRep::ONE).unwrap();
        let diag: Vec<f64> = m.sz.diagonal().iter().map(|c| c.re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn commutators_and_casimir() {
        let i = Complex64::i();
        for two_s in 0..=MAX_ORACLE_TWO_S {
            let spin = SpinRep::from_two_s(two_s);
            let m = spin_matrices(spin).unwrap();
            let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
            assert!(max_abs(&(comm(&m.sx, &m.sy) - &m.sz * i)) < 1e-12);
            assert!(max_abs(&(comm(&m.sy, &m.sz) - &m.sx * i)) < 1e-12);
            assert!(max_abs(&(comm(&m.sz, &m.sx) - &m.sy * i)) < 1e-12);
            let c = &m.sx * &m.sx + &m.sy * &m.sy + &m.sz * &m.sz;
            let id = CMatrix::identity(spin.dimension(), spin.dimension()) * Complex64::from(spin.casimir());
            assert!(max_abs(&(c - id)) < 1e-12, "two_s = {two_s}");
        }
        assert!(spin_matrices(SpinRep::from_two_s(21)).is_err());
    }

    #[test]
    fn coherent_state_is_top_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_s in 0..=6 {
            let spin = SpinRep::from_two_s(two_s);
            let mats = spin_matrices(spin).unwrap();
            for _ in 0..10 {
                let n = random_unit(&mut rng);
                let v = coherent_state_vector(&n, spin).unwrap();
                let nv = mats.dot(&n.to_array()) * &v;
                let diff = nv - &v * Complex64::from(spin.s());
                assert!(diff.norm() < 1e-12);
                assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            }
        }
        let v = coherent_state_vector(&UnitVector::NORTH, SpinRep::from_two_s(3)).unwrap();
        assert_eq!(v[0], Complex64::from(1.0));
        let v = coherent_state_vector(&UnitVector::X, SpinRep::HALF).unwrap();
        assert_abs_diff_eq!(v[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn overlap_matches_vector_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (n1, n2) = (random_unit(&mut rng), random_unit(&mut rng));
            for two_s in 0..=5 {
                let spin = SpinRep::from_two_s(two_s);
                let v1 = coherent_state_vector(&n1, spin).unwrap();
                let v2 = coherent_state_vector(&n2, spin).unwrap();
                assert!((inner_product(&v1, &v2) - overlap(&n1, &n2, spin)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn character_examples() {
        assert_abs_diff_eq!((matrix_char(&[0.0; 3], SpinRep::ONE) - 1.0).norm(), 0.0, epsilon = 1e-15);
        let pi = std::f64::consts::PI;
        assert_abs_diff_eq!(matrix_char(&[0.0, 0.0, pi], SpinRep::HALF).norm(), 0.0, epsilon = 1e-15);
        let c = matrix_char(&[pi, 0.0, 0.0], SpinRep::ONE);
        assert_abs_diff_eq!(c.re, -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spectral_character_matches_dense_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let lambda = [rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0)];
            let two_s = rng.random_range(0..=8);
            let spin = SpinRep::from_two_s(two_s);
            let dense = matrix_char_dense(&lambda, spin).unwrap();
            assert!((dense - matrix_char(&lambda, spin)).norm() < 1e-10);
        }
    }

    #[test]
    fn resolution_of_unity_by_quadrature() {
        for two_s in 0..=4 {
            let spin = SpinRep::from_two_s(two_s);
            let r = resolution_of_unity(spin, 64, 64).unwrap();
            let id = CMatrix::identity(spin.dimension(), spin.dimension());
            assert!(max_abs(&(r - id)) < 1e-6, "two_s = {two_s}");
        }
    }
}
