//! Spin representations, coherent-state labels and their overlaps.
//!
//! A spin-`s` coherent state `|n>` is the maximal-projection eigenstate of
//! `n . S`. It is the `2s`-fold symmetric product of the spin-1/2 state
//! with the same label, so every overlap reduces to a power of a two
//! component spinor product.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|n|^2 - 1` accepted by [`UnitVector::new`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Spin quantum number `s`, stored exactly as the integer `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinRep {
    two_s: u32,
}

impl SpinRep {
    pub const ZERO: SpinRep = SpinRep { two_s: 0 };
    pub const HALF: SpinRep = SpinRep { two_s: 1 };
    pub const ONE: SpinRep = SpinRep { two_s: 2 };

    pub const fn from_two_s(two_s: u32) -> Self {
        SpinRep { two_s }
    }

    pub const fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    /// Dimension `2s + 1` of the representation.
    pub const fn dimension(self) -> usize {
        self.two_s as usize + 1
    }

    /// `s(s+1)`, exact for every representable spin.
    pub fn casimir(self) -> f64 {
        let t = f64::from(self.two_s);
        t * (t + 2.0) / 4.0
    }

    pub const fn is_integer(self) -> bool {
        self.two_s % 2 == 0
    }

    /// Magnetic quantum numbers `m = s, s-1, ..., -s`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = f64> + ExactSizeIterator {
        let two_s = i64::from(self.two_s);
        (0..self.two_s as usize + 1).map(move |k| (two_s - 2 * k as i64) as f64 / 2.0)
    }
}

impl fmt::Display for SpinRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}

/// A point on the unit sphere. Serializes as `[x, y, z]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    pub const NORTH: UnitVector = UnitVector { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: UnitVector = UnitVector { x: 0.0, y: 0.0, z: -1.0 };
    pub const X: UnitVector = UnitVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitVector = UnitVector { x: 0.0, y: 1.0, z: 0.0 };

    /// Checked constructor; the components must already be normalized.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm2 = x * x + y * y + z * z;
        if !norm2.is_finite() || (norm2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "({x}, {y}, {z}) is not a unit vector (|n|^2 = {norm2})"
            )));
        }
        Ok(UnitVector { x, y, z })
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize ({x}, {y}, {z})"
            )));
        }
        Ok(UnitVector { x: x / norm, y: y / norm, z: z / norm })
    }

    /// Polar angle `theta` from +z and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector { x: st * cp, y: st * sp, z: ct }
    }

    /// Builds a unit vector from `z = cos(theta)` and the azimuth.
    pub(crate) fn from_z_phi(z: f64, phi: f64) -> Self {
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let (sp, cp) = phi.sin_cos();
        UnitVector { x: rho * cp, y: rho * sp, z }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn dot3(&self, v: &[f64; 3]) -> f64 {
        self.x * v[0] + self.y * v[1] + self.z * v[2]
    }
}

impl TryFrom<[f64; 3]> for UnitVector {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        UnitVector::new(v[0], v[1], v[2])
    }
}

impl From<UnitVector> for [f64; 3] {
    fn from(n: UnitVector) -> Self {
        n.to_array()
    }
}

/// Two-component representative `(a, b)` of the spin-1/2 coherent state `|n>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor {
    pub a: Complex64,
    pub b: Complex64,
}

impl Spinor {
    /// `(cos(theta/2), e^{i phi} sin(theta/2))`; the exact south pole maps to `(0, 1)`.
    pub fn from_unit_vector(n: &UnitVector) -> Self {
        if n.z >= 0.0 {
            // sin(theta/2) e^{i phi} = (x + i y) / (2 cos(theta/2))
            let c = ((1.0 + n.z) / 2.0).sqrt();
            Spinor {
                a: Complex64::new(c, 0.0),
                b: Complex64::new(n.x, n.y) / (2.0 * c),
            }
        } else {
            let sn = ((1.0 - n.z) / 2.0).sqrt();
            let rho = n.x.hypot(n.y);
            if rho == 0.0 {
                return Spinor { a: Complex64::new(0.0, 0.0), b: Complex64::new(1.0, 0.0) };
            }
            let c = rho / (2.0 * sn);
            Spinor {
                a: Complex64::new(c, 0.0),
                b: Complex64::new(n.x, n.y) * (sn / rho),
            }
        }
    }

    pub fn to_unit_vector(&self) -> UnitVector {
        let ab = self.a.conj() * self.b;
        UnitVector {
            x: 2.0 * ab.re,
            y: 2.0 * ab.im,
            z: self.a.norm_sqr() - self.b.norm_sqr(),
        }
    }

    /// The same ray with a different gauge: `e^{i alpha} (a, b)`.
    pub fn with_phase(&self, alpha: f64) -> Self {
        let phase = Complex64::from_polar(1.0, alpha);
        Spinor { a: self.a * phase, b: self.b * phase }
    }

    /// Spin-1/2 inner product `<self|other>`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.a.conj() * other.a + self.b.conj() * other.b
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

pub fn spinor_from_unit_vector(n: &UnitVector) -> Spinor {
    Spinor::from_unit_vector(n)
}

/// Coherent-state overlap `<n1|n2>` for spin `s`.
pub fn overlap(n1: &UnitVector, n2: &UnitVector, spin: SpinRep) -> Complex64 {
    let z = Spinor::from_unit_vector(n1).inner(&Spinor::from_unit_vector(n2));
    z.powu(spin.two_s())
}

/// Closed-loop product `<n1|n2><n2|n3>...<nL|n1>`.
pub fn loop_weight(path: &[UnitVector], spin: SpinRep) -> Result<Complex64> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a closed path needs at least 2 points, got {}",
            path.len()
        )));
    }
    let spinors: Vec<Spinor> = path.iter().map(Spinor::from_unit_vector).collect();
    Ok(loop_weight_from_spinors(&spinors, spin))
}

/// Closed-loop product over arbitrary spinor representatives. The result
/// does not depend on the phase of any individual spinor.
///
/// Panics if fewer than two spinors are given.
pub fn loop_weight_from_spinors(spinors: &[Spinor], spin: SpinRep) -> Complex64 {
    assert!(spinors.len() >= 2, "closed loop needs at least two points");
    if spinors.len() == 2 {
        // <1|2><2|1> = |<1|2>|^2, kept exactly real.
        let p = spinors[0].inner(&spinors[1]).norm_sqr();
        return Complex64::new(p.powi(spin.two_s() as i32), 0.0);
    }
    let mut product = Complex64::new(1.0, 0.0);
    for (i, zi) in spinors.iter().enumerate() {
        let next = &spinors[(i + 1) % spinors.len()];
        product *= zi.inner(next);
    }
    product.powu(spin.two_s())
}

/// Lower symbol `(s + 1) n` of the spin operator.
pub fn lower_symbol(n: &UnitVector, spin: SpinRep) -> [f64; 3] {
    let scale = spin.s() + 1.0;
    [scale * n.x, scale * n.y, scale * n.z]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit(theta: f64, phi: f64) -> UnitVector {
        UnitVector::from_angles(theta, phi)
    }

    #[test]
    fn unit_vector_json_is_validated() {
        let v = UnitVector::from_angles(0.7, -2.0);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<UnitVector>(&text).unwrap(), v);
        assert!(serde_json::from_str::<UnitVector>("[1.0, 1.0, 0.0]").is_err());
        assert_eq!(serde_json::to_string(&SpinRep::from_two_s(3)).unwrap(), "3");
    }

    #[test]
    fn spin_rep_basics() {
        let s = SpinRep::from_two_s(3);
        assert_eq!(s.dimension(), 4);
        assert_eq!(s.casimir(), 15.0 / 4.0);
        assert!(!s.is_integer());
        assert_eq!(s.projections().collect::<Vec<_>>(), vec![1.5, 0.5, -0.5, -1.5]);
        assert_eq!(SpinRep::ZERO.projections().collect::<Vec<_>>(), vec![0.0]);
        assert_eq!(SpinRep::ONE.to_string(), "1");
        assert_eq!(SpinRep::HALF.to_string(), "1/2");
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(1.0, 1.0, 0.0).is_err());
        assert!(UnitVector::new(0.6, 0.8, 0.0).is_ok());
        assert!(UnitVector::normalized(0.0, 0.0, 0.0).is_err());
        let n = UnitVector::normalized(1.0, 2.0, 2.0).unwrap();
        assert_abs_diff_eq!(n.y(), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn spinor_poles_and_equator() {
        let north = Spinor::from_unit_vector(&UnitVector::NORTH);
        assert_eq!(north.a, Complex64::new(1.0, 0.0));
        assert_eq!(north.b, Complex64::new(0.0, 0.0));

        let south = Spinor::from_unit_vector(&UnitVector::SOUTH);
        assert_eq!(south.a, Complex64::new(0.0, 0.0));
        assert_eq!(south.b, Complex64::new(1.0, 0.0));

        let x = Spinor::from_unit_vector(&UnitVector::X);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(x.a.re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(x.b.re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(x.b.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spinor_near_south_pole_stays_normalized() {
        let n = UnitVector::normalized(1e-9, -2e-9, -1.0).unwrap();
        let z = Spinor::from_unit_vector(&n);
        assert_abs_diff_eq!(z.norm_sqr(), 1.0, epsilon = 1e-12);
        let back = z.to_unit_vector();
        assert_abs_diff_eq!(back.x(), n.x(), epsilon = 1e-12);
        assert_abs_diff_eq!(back.y(), n.y(), epsilon = 1e-12);
    }

    #[test]
    fn overlap_examples() {
        for two_s in 0..6 {
            let s = SpinRep::from_two_s(two_s);
            let n = unit(1.1, 0.3);
            assert_abs_diff_eq!((overlap(&n, &n, s) - 1.0).norm(), 0.0, epsilon = 1e-14);
        }
        let o = overlap(&UnitVector::NORTH, &UnitVector::SOUTH, SpinRep::ONE);
        assert_eq!(o.norm(), 0.0);
        let o = overlap(&UnitVector::NORTH, &UnitVector::X, SpinRep::HALF);
        assert_abs_diff_eq!(o.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(o.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn loop_weight_examples() {
        let n = unit(0.4, 2.0);
        let w = loop_weight(&[n, n, n], SpinRep::from_two_s(3)).unwrap();
        assert_abs_diff_eq!((w - 1.0).norm(), 0.0, epsilon = 1e-14);

        let w = loop_weight(&[UnitVector::NORTH, UnitVector::X], SpinRep::HALF).unwrap();
        assert_abs_diff_eq!(w.re, 0.5, epsilon = 1e-15);
        assert_eq!(w.im, 0.0);

        // <z|x><x|y><y|z> with |<a|b>|^2 = 1/2 on each edge.
        let w = loop_weight(&[UnitVector::NORTH, UnitVector::X, UnitVector::Y], SpinRep::HALF)
            .unwrap();
        assert_abs_diff_eq!(w.norm(), 0.5f64.powf(1.5), epsilon = 1e-15);
        // Solid angle of the octant is pi/2; Berry phase is -Omega/2.
        assert_abs_diff_eq!(w.arg().abs(), std::f64::consts::FRAC_PI_4, epsilon = 1e-14);

        assert!(loop_weight(&[n], SpinRep::HALF).is_err());
    }

    #[test]
    fn lower_symbol_examples() {
        assert_eq!(lower_symbol(&UnitVector::NORTH, SpinRep::HALF), [0.0, 0.0, 1.5]);
        assert_eq!(lower_symbol(&UnitVector::X, SpinRep::ONE), [2.0, 0.0, 0.0]);
        let n = unit(0.7, 0.1);
        assert_eq!(lower_symbol(&n, SpinRep::ZERO), n.to_array());
    }

    fn arb_unit() -> impl Strategy<Value = UnitVector> {
        (-1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| UnitVector::from_z_phi(z, phi))
    }

    proptest! {
        #[test]
        fn spinor_round_trip(n in arb_unit()) {
            let z = Spinor::from_unit_vector(&n);
            prop_assert!((z.norm_sqr() - 1.0).abs() < 1e-12);
            let back = z.to_unit_vector();
            prop_assert!((back.x() - n.x()).abs() < 1e-12);
            prop_assert!((back.y() - n.y()).abs() < 1e-12);
            prop_assert!((back.z() - n.z()).abs() < 1e-12);
        }

        #[test]
        fn overlap_modulus(n1 in arb_unit(), n2 in arb_unit(), two_s in 0u32..8) {
            let s = SpinRep::from_two_s(two_s);
            let expected = ((1.0 + n1.dot(&n2)) / 2.0).powi(two_s as i32);
            prop_assert!((overlap(&n1, &n2, s).norm_sqr() - expected).abs() < 1e-12);
        }

        #[test]
        fn loop_weight_gauge_invariant(
            points in prop::collection::vec(arb_unit(), 2..12),
            phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 12),
            two_s in 0u32..6,
        ) {
            let s = SpinRep::from_two_s(two_s);
            let base = loop_weight(&points, s).unwrap();
            let regauged: Vec<Spinor> = points
                .iter()
                .zip(&phases)
                .map(|(n, &alpha)| Spinor::from_unit_vector(n).with_phase(alpha))
                .collect();
            let w = loop_weight_from_spinors(&regauged, s);
            prop_assert!((w - base).norm() < 1e-12);
            prop_assert!(base.norm() <= 1.0 + 1e-12);
        }
    }
}
