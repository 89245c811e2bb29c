//! Pure-loss (attenuation) channels.
//!
//! A single photon survives with probability `η`. On an `n`-photon Fock
//! state the channel removes `k` photons with binomial weight, and the
//! coherence between `|N,0⟩` and `|0,N⟩` decays as `(η_A η_B)^{N/2}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{basis, dimension, DensityOperator, FockIndex, Mode};

/// Attenuation of one path with transmissivity `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    eta: f64,
    mode: Mode,
    n_max: usize,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid(format!("transmissivity must be in [0, 1], got {eta}")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl LossChannel {
    pub fn new(eta: f64, mode: Mode, n_max: usize) -> Result<Self> {
        check_eta(eta)?;
        if n_max == 0 {
            return Err(invalid("truncation n_max must be at least 1"));
        }
        Ok(Self { eta, mode, n_max })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Kraus operator removing exactly `k` photons from the lossy mode:
    /// `|n⟩ → √(C(n,k) η^{n−k} (1−η)^k) |n−k⟩`.
    pub fn kraus_operator(&self, k: usize) -> DMatrix<Complex64> {
        let dim = dimension(self.n_max);
        let mut op = DMatrix::zeros(dim, dim);
        for (col, idx) in basis(self.n_max).enumerate() {
            let n = idx.count(self.mode);
            if n < k {
                continue;
            }
            let weight = binomial(n, k) * self.eta.powi((n - k) as i32) * (1.0 - self.eta).powi(k as i32);
            let out = match self.mode {
                Mode::A => FockIndex::new(n - k, idx.n_b),
                Mode::B => FockIndex::new(idx.n_a, n - k),
            };
            op[(out.flat(self.n_max), col)] = Complex64::new(weight.sqrt(), 0.0);
        }
        op
    }

    /// `K_0..=K_{n_max}`; only `K_0` survives at `η = 1`.
    pub fn kraus(&self) -> Vec<DMatrix<Complex64>> {
        let kmax = if self.eta == 1.0 { 0 } else { self.n_max };
        (0..=kmax).map(|k| self.kraus_operator(k)).collect()
    }

    /// `Σ_k K_k ρ K_k†`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.n_max() != self.n_max {
            return Err(Error::TruncationMismatch { left: self.n_max, right: rho.n_max() });
        }
        if self.eta == 1.0 {
            return Ok(rho.clone());
        }
        let dim = dimension(self.n_max);
        let out = self
            .kraus()
            .iter()
            .fold(DMatrix::zeros(dim, dim), |acc, k| acc + k * rho.matrix() * k.adjoint());
        Ok(DensityOperator::from_matrix_unchecked(self.n_max, out))
    }
}

/// Independent per-arm loss: mode A with `eta_a`, then mode B with `eta_b`.
pub fn apply_loss(rho: &DensityOperator, eta_a: f64, eta_b: f64) -> Result<DensityOperator> {
    check_eta(eta_a)?;
    check_eta(eta_b)?;
    let n_max = rho.n_max();
    let after_a = LossChannel::new(eta_a, Mode::A, n_max)?.apply(rho)?;
    LossChannel::new(eta_b, Mode::B, n_max)?.apply(&after_a)
}

/// `⟨N,0|ρ|0,N⟩`, the N00N off-diagonal coherence.
pub fn noon_coherence(rho: &DensityOperator, n: usize) -> Result<Complex64> {
    if n < 1 || n > rho.n_max() {
        return Err(invalid(format!("N = {n} outside 1..={}", rho.n_max())));
    }
    Ok(rho.element(FockIndex::new(n, 0), FockIndex::new(0, n)))
}
