//! Truncated cavity ⊗ two-level-atom Hilbert space.
//!
//! Basis ordering is photon-major: `index = 2 n + s` with `n` the photon
//! number and `s = 0` (ground) or `1` (excited). The atom is therefore a 2×2
//! block on the diagonal of every photon-number sector.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Smallest admissible photon truncation (the amplitude method keeps n ≤ 3).
pub const MIN_N_MAX: usize = 3;

/// Default truncation for master-equation runs.
pub const DEFAULT_N_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    Ground,
    Excited,
}

impl AtomLevel {
    #[inline]
    pub fn offset(self) -> usize {
        match self {
            AtomLevel::Ground => 0,
            AtomLevel::Excited => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockQubitSpace {
    n_max: usize,
}

impl FockQubitSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < MIN_N_MAX {
            return Err(Error::TruncationTooSmall { n_max });
        }
        Ok(FockQubitSpace { n_max })
    }

    #[inline]
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    #[inline]
    pub fn index(&self, n: usize, level: AtomLevel) -> usize {
        debug_assert!(n <= self.n_max);
        2 * n + level.offset()
    }

    /// Photon number and atom level of a basis index.
    #[inline]
    pub fn decompose(&self, index: usize) -> (usize, AtomLevel) {
        let level = if index % 2 == 0 { AtomLevel::Ground } else { AtomLevel::Excited };
        (index / 2, level)
    }

    pub fn basis_vector(&self, n: usize, level: AtomLevel) -> Vec<Complex64> {
        let mut v = vec![Complex64::zero(); self.dim()];
        v[self.index(n, level)] = Complex64::new(1.0, 0.0);
        v
    }
}

/// Shorthand for [`FockQubitSpace::new`].
pub fn make_space(n_max: usize) -> Result<FockQubitSpace> {
    FockQubitSpace::new(n_max)
}

/// A dense operator on a [`FockQubitSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: FockQubitSpace,
    matrix: CMatrix,
    label: String,
}

impl Operator {
    pub fn new(space: FockQubitSpace, matrix: CMatrix, label: impl Into<String>) -> Result<Self> {
        let dim = space.dim();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: matrix.rows().max(matrix.cols()) });
        }
        Ok(Operator { space, matrix, label: label.into() })
    }

    pub fn zero(space: FockQubitSpace) -> Self {
        Operator { space, matrix: CMatrix::zeros(space.dim(), space.dim()), label: "0".into() }
    }

    pub fn identity(space: FockQubitSpace) -> Self {
        Operator { space, matrix: CMatrix::identity(space.dim()), label: "I".into() }
    }

    pub fn space(&self) -> FockQubitSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// ⟨n, s| X |n', s'⟩.
    pub fn element(&self, bra: (usize, AtomLevel), ket: (usize, AtomLevel)) -> Complex64 {
        self.matrix[(self.space.index(bra.0, bra.1), self.space.index(ket.0, ket.1))]
    }

    pub fn adjoint(&self) -> Operator {
        Operator { space: self.space, matrix: self.matrix.adjoint(), label: self.label.clone() + "†" }
    }

    fn check_space(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { left: self.space.dim(), right: other.space.dim() });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Operator) -> Result<Operator> {
        self.check_space(other)?;
        let mut label = self.label.clone();
        label.push_str(&other.label);
        Ok(Operator { space: self.space, matrix: self.matrix.matmul(&other.matrix), label })
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &Operator) -> Result<Operator> {
        self.check_space(other)?;
        Ok(Operator { space: self.space, matrix: self.matrix.add_scaled(c, &other.matrix), label: self.label.clone() })
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        Operator { space: self.space, matrix: self.matrix.scale(c), label: self.label.clone() }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        ab.add_scaled(Complex64::new(-1.0, 0.0), &ba)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.space.dim() {
            return Err(Error::DimensionMismatch { left: self.space.dim(), right: v.len() });
        }
        Ok(self.matrix.mul_vec(v))
    }

    /// ⟨v| X |v⟩ (no normalization is applied).
    pub fn expectation_in_vector(&self, v: &[Complex64]) -> Result<Complex64> {
        let xv = self.apply(v)?;
        Ok(v.iter().zip(&xv).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.max_abs_diff(&self.matrix.adjoint()) <= tol
    }
}

/// Cavity annihilation operator `a`: ⟨n−1, s| a |n, s⟩ = √n.
pub fn annihilation(space: FockQubitSpace) -> Operator {
    let mut m = CMatrix::zeros(space.dim(), space.dim());
    for n in 1..=space.n_max() {
        let amp = Complex64::new((n as f64).sqrt(), 0.0);
        for level in [AtomLevel::Ground, AtomLevel::Excited] {
            m[(space.index(n - 1, level), space.index(n, level))] = amp;
        }
    }
    Operator { space, matrix: m, label: "a".into() }
}

pub fn creation(space: FockQubitSpace) -> Operator {
    annihilation(space).adjoint()
}

/// Atomic lowering operator σ₋ = |g⟩⟨e|.
pub fn sigma_minus(space: FockQubitSpace) -> Operator {
    let mut m = CMatrix::zeros(space.dim(), space.dim());
    for n in 0..=space.n_max() {
        m[(space.index(n, AtomLevel::Ground), space.index(n, AtomLevel::Excited))] = Complex64::new(1.0, 0.0);
    }
    Operator { space, matrix: m, label: "σ-".into() }
}

pub fn sigma_plus(space: FockQubitSpace) -> Operator {
    sigma_minus(space).adjoint().with_label("σ+")
}

/// Photon number `a†a`, diagonal in the basis.
pub fn number_operator(space: FockQubitSpace) -> Operator {
    let m = CMatrix::from_fn(space.dim(), space.dim(), |i, j| {
        if i == j {
            Complex64::new(space.decompose(i).0 as f64, 0.0)
        } else {
            Complex64::zero()
        }
    });
    Operator { space, matrix: m, label: "n".into() }
}

/// Projector σ₊σ₋ onto the excited atom.
pub fn excited_projector(space: FockQubitSpace) -> Operator {
    let m = CMatrix::from_fn(space.dim(), space.dim(), |i, j| {
        if i == j && space.decompose(i).1 == AtomLevel::Excited {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    Operator { space, matrix: m, label: "σ+σ-".into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomLevel::{Excited as E, Ground as G};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn space_dimensions() {
        assert_eq!(make_space(3).unwrap().dim(), 8);
        assert_eq!(make_space(10).unwrap().dim(), 22);
        assert_eq!(make_space(2), Err(Error::TruncationTooSmall { n_max: 2 }));
    }

    #[test]
    fn annihilation_elements() {
        let s = make_space(3).unwrap();
        let a = annihilation(s);
        assert_eq!(a.element((0, G), (1, G)), one());
        assert!((a.element((2, E), (3, E)).re - 3f64.sqrt()).abs() < 1e-15);
        let out = a.apply(&s.basis_vector(0, G)).unwrap();
        assert!(out.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn sigma_minus_elements() {
        let s = make_space(4).unwrap();
        let sm = sigma_minus(s);
        assert_eq!(sm.apply(&s.basis_vector(0, E)).unwrap(), s.basis_vector(0, G));
        let sm2 = sm.multiply(&sm).unwrap();
        assert_eq!(sm2.matrix().max_abs(), 0.0);
        let proj = sigma_plus(s).multiply(&sm).unwrap();
        assert_eq!(proj.matrix(), excited_projector(s).matrix());
    }

    #[test]
    fn number_operator_is_a_dagger_a() {
        let s = make_space(6).unwrap();
        let a = annihilation(s);
        let n = a.adjoint().multiply(&a).unwrap();
        assert!(n.matrix().max_abs_diff(number_operator(s).matrix()) < 1e-14);
        let e = number_operator(s).expectation_in_vector(&s.basis_vector(2, G)).unwrap();
        assert!((e - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn truncated_commutator() {
        let s = make_space(5).unwrap();
        let a = annihilation(s);
        let comm = a.commutator(&a.adjoint()).unwrap();
        for i in 0..s.dim() {
            let (n, _) = s.decompose(i);
            let expected = if n < s.n_max() { 1.0 } else { -(s.n_max() as f64) };
            assert!((comm.matrix()[(i, i)].re - expected).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn two_level_completeness_and_commuting_factors() {
        let s = make_space(4).unwrap();
        let sm = sigma_minus(s);
        let sp = sigma_plus(s);
        let sum = sp.multiply(&sm).unwrap().add_scaled(one(), &sm.multiply(&sp).unwrap()).unwrap();
        assert!(sum.matrix().max_abs_diff(&CMatrix::identity(s.dim())) < 1e-15);
        let a = annihilation(s);
        let left = a.multiply(&sm).unwrap();
        let right = sm.multiply(&a).unwrap();
        assert_eq!(left.matrix(), right.matrix());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let a3 = annihilation(make_space(3).unwrap());
        let a4 = annihilation(make_space(4).unwrap());
        assert_eq!(a3.multiply(&a4).unwrap_err(), Error::DimensionMismatch { left: 8, right: 10 });
        assert!(a3.expectation_in_vector(&[Complex64::zero(); 3]).is_err());
    }
}
