//! Truncated two-mode Fock space.
//!
//! Basis states `|n_a, n_b⟩` with `0 ≤ n_a, n_b ≤ n_max` are laid out
//! row-major by `(n_a, n_b)` with `n_b` fastest, so the flat index is
//! `n_a * (n_max + 1) + n_b`. The same layout is used for state vectors and
//! for density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::{NORM_TOL, PSD_FLOOR};

/// One of the two spatial paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

/// Photon counts in paths A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockIndex {
    pub n_a: usize,
    pub n_b: usize,
}

impl FockIndex {
    pub const fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    pub fn total(self) -> usize {
        self.n_a + self.n_b
    }

    pub fn count(self, mode: Mode) -> usize {
        match mode {
            Mode::A => self.n_a,
            Mode::B => self.n_b,
        }
    }

    pub fn fits(self, n_max: usize) -> bool {
        self.n_a <= n_max && self.n_b <= n_max
    }

    /// Flat position in a space truncated at `n_max`. Caller guarantees `fits`.
    pub fn flat(self, n_max: usize) -> usize {
        debug_assert!(self.fits(n_max));
        self.n_a * (n_max + 1) + self.n_b
    }

    pub fn unflat(i: usize, n_max: usize) -> Self {
        Self::new(i / (n_max + 1), i % (n_max + 1))
    }

    fn checked_flat(self, n_max: usize) -> Result<usize> {
        if self.fits(n_max) {
            Ok(self.flat(n_max))
        } else {
            Err(Error::TruncationExceeded { n_a: self.n_a, n_b: self.n_b, n_max })
        }
    }
}

/// Dimension of the two-mode space truncated at `n_max`.
pub fn dimension(n_max: usize) -> usize {
    (n_max + 1) * (n_max + 1)
}

/// All basis labels in flat order.
pub fn basis(n_max: usize) -> impl Iterator<Item = FockIndex> {
    (0..dimension(n_max)).map(move |i| FockIndex::unflat(i, n_max))
}

fn check_truncation(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(invalid("truncation n_max must be at least 1"));
    }
    Ok(())
}

/// Normalized pure state over the truncated two-mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    n_max: usize,
    amplitudes: DVector<Complex64>,
}

impl TwoModeState {
    /// The basis state `|n_a, n_b⟩`.
    pub fn fock(n_a: usize, n_b: usize, n_max: usize) -> Result<Self> {
        check_truncation(n_max)?;
        let i = FockIndex::new(n_a, n_b).checked_flat(n_max)?;
        let mut amplitudes = DVector::zeros(dimension(n_max));
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Self { n_max, amplitudes })
    }

    pub fn vacuum(n_max: usize) -> Result<Self> {
        Self::fock(0, 0, n_max)
    }

    /// `(|N,0⟩ + |0,N⟩)/√2`.
    pub fn noon(n: usize, n_max: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("N00N photon number must be at least 1"));
        }
        check_truncation(n_max)?;
        let hi = FockIndex::new(n, 0).checked_flat(n_max)?;
        let lo = FockIndex::new(0, n).flat(n_max);
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amplitudes = DVector::zeros(dimension(n_max));
        amplitudes[hi] = c;
        amplitudes[lo] = c;
        Ok(Self { n_max, amplitudes })
    }

    /// Builds a state from explicit amplitudes in flat order; they must
    /// already be normalized.
    pub fn from_amplitudes(n_max: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_truncation(n_max)?;
        if amplitudes.len() != dimension(n_max) {
            return Err(Error::DimensionMismatch { expected: dimension(n_max), got: amplitudes.len() });
        }
        let state = Self { n_max, amplitudes: DVector::from_vec(amplitudes) };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Sparse constructor: unspecified amplitudes are zero.
    pub fn from_support(n_max: usize, support: &[(FockIndex, Complex64)]) -> Result<Self> {
        check_truncation(n_max)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dimension(n_max)];
        for &(idx, c) in support {
            amps[idx.checked_flat(n_max)?] += c;
        }
        Self::from_amplitudes(n_max, amps)
    }

    pub(crate) fn from_vector_unchecked(n_max: usize, amplitudes: DVector<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), dimension(n_max));
        Self { n_max, amplitudes }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Amplitude at `|n_a, n_b⟩`; zero outside the truncation.
    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        let idx = FockIndex::new(n_a, n_b);
        if idx.fits(self.n_max) {
            self.amplitudes[idx.flat(self.n_max)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `Σ |amplitude|²`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &TwoModeState) -> Result<Complex64> {
        if self.n_max != other.n_max {
            return Err(Error::TruncationMismatch { left: self.n_max, right: other.n_max });
        }
        Ok(self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityOperator {
        let matrix = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator { n_max: self.n_max, matrix }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator over the same basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_max: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates and wraps `matrix`.
    pub fn from_matrix(n_max: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_truncation(n_max)?;
        let dim = dimension(n_max);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows().max(matrix.ncols()) });
        }
        let rho = Self { n_max, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_max: usize, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), dimension(n_max));
        Self { n_max, matrix }
    }

    /// Checks Hermiticity, unit trace and the eigenvalue floor.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > NORM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // symmetrize first so roundoff asymmetry does not leak into the solver
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `⟨row|ρ|col⟩`; zero for labels outside the truncation.
    pub fn element(&self, row: FockIndex, col: FockIndex) -> Complex64 {
        if row.fits(self.n_max) && col.fits(self.n_max) {
            self.matrix[(row.flat(self.n_max), col.flat(self.n_max))]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Diagonal weight `⟨i|ρ|i⟩`.
    pub fn probability(&self, idx: FockIndex) -> f64 {
        self.element(idx, idx).re
    }

    /// `(⟨n_A⟩, ⟨n_B⟩)` read off the diagonal.
    pub fn mean_photon_numbers(&self) -> (f64, f64) {
        basis(self.n_max).enumerate().fold((0.0, 0.0), |(a, b), (i, idx)| {
            let p = self.matrix[(i, i)].re;
            (a + p * idx.n_a as f64, b + p * idx.n_b as f64)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fock_basis_states() {
        let vac = TwoModeState::fock(0, 0, 2).unwrap();
        assert_eq!(vac.amplitude(0, 0), c(1.0, 0.0));
        assert_eq!(vac.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);

        let s = TwoModeState::fock(1, 1, 2).unwrap();
        assert_eq!(s.amplitude(1, 1), c(1.0, 0.0));
        assert_eq!(s.amplitudes()[FockIndex::new(1, 1).flat(2)], c(1.0, 0.0));
    }

    #[test]
    fn fock_rejects_out_of_range() {
        let err = TwoModeState::fock(3, 0, 2).unwrap_err();
        assert!(err.to_string().contains("photon count exceeds truncation"));
        assert!(TwoModeState::fock(0, 0, 0).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn noon_amplitudes() {
        let s = TwoModeState::noon(2, 4).unwrap();
        assert_abs_diff_eq!(s.amplitude(2, 0).re, 0.70710678, epsilon = 1e-8);
        assert_abs_diff_eq!(s.amplitude(0, 2).re, 0.70710678, epsilon = 1e-8);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);

        let one = TwoModeState::noon(1, 1).unwrap();
        assert_eq!(one.amplitude(1, 0), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(one.amplitude(0, 1), c(FRAC_1_SQRT_2, 0.0));

        assert!(TwoModeState::noon(5, 3).is_err());
        assert!(TwoModeState::noon(0, 3).is_err());
    }

    #[test]
    fn norm_of_superposition() {
        let s = TwoModeState::from_support(
            1,
            &[(FockIndex::new(1, 0), c(0.6, 0.0)), (FockIndex::new(0, 1), c(0.0, 0.8))],
        )
        .unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(TwoModeState::fock(1, 0, 1).unwrap().norm(), 1.0);
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized() {
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(0.5, 0.0);
        assert!(matches!(TwoModeState::from_amplitudes(1, amps), Err(Error::NotNormalized(_))));
        assert!(matches!(
            TwoModeState::from_amplitudes(1, vec![c(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_of_pure_states() {
        let vac = TwoModeState::vacuum(1).unwrap().to_density();
        assert_eq!(vac.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(vac.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let rho = TwoModeState::noon(1, 1).unwrap().to_density();
        let nonzero: Vec<_> = rho.matrix().iter().filter(|z| z.norm() > 1e-15).collect();
        assert_eq!(nonzero.len(), 4);
        for z in nonzero {
            assert_abs_diff_eq!(z.norm(), 0.5, epsilon = 1e-12);
        }

        let rho2 = TwoModeState::noon(2, 2).unwrap().to_density();
        let coh = rho2.element(FockIndex::new(2, 0), FockIndex::new(0, 2));
        assert_abs_diff_eq!(coh.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(coh.im, 0.0);
        assert_abs_diff_eq!(rho2.trace(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho2.purity(), 1.0, epsilon = 1e-12);
        rho2.validate().unwrap();
    }

    #[test]
    fn overlaps() {
        let n2 = TwoModeState::noon(2, 2).unwrap();
        let z = n2.overlap(&n2).unwrap();
        assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(z.im, 0.0);

        let f20 = TwoModeState::fock(2, 0, 2).unwrap();
        let f02 = TwoModeState::fock(0, 2, 2).unwrap();
        assert_eq!(f20.overlap(&f02).unwrap(), c(0.0, 0.0));
        assert_abs_diff_eq!(f20.overlap(&n2).unwrap().re, FRAC_1_SQRT_2, epsilon = 1e-12);

        let other = TwoModeState::noon(2, 3).unwrap();
        assert!(matches!(n2.overlap(&other), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn mean_photon_numbers() {
        let vac = TwoModeState::vacuum(2).unwrap().to_density();
        assert_eq!(vac.mean_photon_numbers(), (0.0, 0.0));
        let (a, b) = TwoModeState::noon(2, 2).unwrap().to_density().mean_photon_numbers();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-12);
        let (a, b) = TwoModeState::fock(1, 1, 2).unwrap().to_density().mean_photon_numbers();
        assert_eq!((a, b), (1.0, 1.0));
    }

    #[test]
    fn density_validation_errors() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityOperator::from_matrix(1, m.clone()), Err(Error::NotHermitian(_))));

        m[(0, 1)] = c(0.0, 0.0);
        m[(0, 0)] = c(0.9, 0.0);
        assert!(matches!(DensityOperator::from_matrix(1, m.clone()), Err(Error::InvalidTrace(_))));

        let mut neg = DMatrix::<Complex64>::zeros(4, 4);
        neg[(0, 0)] = c(1.5, 0.0);
        neg[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(DensityOperator::from_matrix(1, neg), Err(Error::NotPositive(_))));

        assert!(matches!(
            DensityOperator::from_matrix(1, DMatrix::zeros(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn flat_layout_is_row_major_b_fastest() {
        assert_eq!(FockIndex::new(0, 1).flat(2), 1);
        assert_eq!(FockIndex::new(1, 0).flat(2), 3);
        assert_eq!(FockIndex::new(2, 2).flat(2), 8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn flat_unflat_bijection(n_max in 1usize..8, a in 0usize..8, b in 0usize..8) {
                prop_assume!(a <= n_max && b <= n_max);
                let idx = FockIndex::new(a, b);
                prop_assert_eq!(FockIndex::unflat(idx.flat(n_max), n_max), idx);
            }

            #[test]
            fn overlap_is_conjugate_symmetric(
                re in proptest::collection::vec(-1.0f64..1.0, 9),
                im in proptest::collection::vec(-1.0f64..1.0, 9),
                n in 1usize..=2,
            ) {
                let raw: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| c(r, i)).collect();
                let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assume!(norm > 1e-3);
                let s = TwoModeState::from_amplitudes(2, raw.iter().map(|z| z / norm).collect()).unwrap();
                let t = TwoModeState::noon(n, 2).unwrap();
                let ab = s.overlap(&t).unwrap();
                let ba = t.overlap(&s).unwrap();
                prop_assert!((ab - ba.conj()).norm() < 1e-12);
                prop_assert!((s.overlap(&s).unwrap() - c(1.0, 0.0)).norm() < 1e-10);
                let rho = s.to_density();
                prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
                prop_assert!((rho.purity() - 1.0).abs() < 1e-9);
            }
        }
    }
}
