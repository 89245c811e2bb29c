//! Linear optical elements over the truncated two-mode space and the
//! Mach-Zehnder pipeline built from them.
//!
//! Beam splitters use the symmetric convention
//!
//! ```text
//! a† → √T a† + i√(1−T) b†
//! b† → i√(1−T) a† + √T b†
//! ```
//!
//! and conserve total photon number, so every operator here is block
//! diagonal in `n_a + n_b`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{basis, dimension, DensityOperator, FockIndex, Mode, TwoModeState};
use crate::loss;

/// Diagonal weight below which a sector counts as unoccupied.
const SUPPORT_FLOOR: f64 = 1e-20;

/// Unitary acting on the truncated space.
///
/// A beam splitter cannot represent sectors whose total photon number exceeds
/// `n_max` (the output would leave the box), so it only acts on totals up to
/// `max_total` and is the identity above. Applying it to a state with weight
/// in those sectors is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementOperator {
    n_max: usize,
    max_total: usize,
    matrix: DMatrix<Complex64>,
}

impl ElementOperator {
    pub fn identity(n_max: usize) -> Self {
        let dim = dimension(n_max);
        Self { n_max, max_total: 2 * n_max, matrix: DMatrix::identity(dim, dim) }
    }

    /// Relabels path A as B and vice versa.
    pub fn swap(n_max: usize) -> Self {
        let dim = dimension(n_max);
        let mut matrix = DMatrix::zeros(dim, dim);
        for (i, idx) in basis(n_max).enumerate() {
            matrix[(FockIndex::new(idx.n_b, idx.n_a).flat(n_max), i)] = Complex64::new(1.0, 0.0);
        }
        Self { n_max, max_total: 2 * n_max, matrix }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Largest total photon number the operator acts on physically.
    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Conjugate transpose; the inverse of a unitary element.
    pub fn dagger(&self) -> Self {
        Self { n_max: self.n_max, max_total: self.max_total, matrix: self.matrix.adjoint() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ElementOperator) -> Result<Self> {
        if self.n_max != next.n_max {
            return Err(Error::TruncationMismatch { left: self.n_max, right: next.n_max });
        }
        Ok(Self {
            n_max: self.n_max,
            max_total: self.max_total.min(next.max_total),
            matrix: &next.matrix * &self.matrix,
        })
    }

    fn check_support(&self, weights: impl Iterator<Item = (FockIndex, f64)>) -> Result<()> {
        let excess: f64 =
            weights.filter(|(idx, _)| idx.total() > self.max_total).map(|(_, w)| w).filter(|&w| w > SUPPORT_FLOOR).sum();
        if excess > 0.0 {
            return Err(Error::SupportExceedsTruncation { weight: excess, max_total: self.max_total });
        }
        Ok(())
    }

    pub fn apply(&self, state: &TwoModeState) -> Result<TwoModeState> {
        if state.n_max() != self.n_max {
            return Err(Error::TruncationMismatch { left: self.n_max, right: state.n_max() });
        }
        self.check_support(basis(self.n_max).zip(state.amplitudes().iter().map(|c| c.norm_sqr())))?;
        Ok(TwoModeState::from_vector_unchecked(self.n_max, &self.matrix * state.amplitudes()))
    }

    /// `U ρ U†`.
    pub fn apply_density(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.n_max() != self.n_max {
            return Err(Error::TruncationMismatch { left: self.n_max, right: rho.n_max() });
        }
        self.check_support(basis(self.n_max).map(|idx| (idx, rho.probability(idx))))?;
        let out = &self.matrix * rho.matrix() * self.matrix.adjoint();
        Ok(DensityOperator::from_matrix_unchecked(self.n_max, out))
    }
}

/// Lossless beam splitter with power transmissivity `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub transmissivity: f64,
    pub n_max: usize,
}

impl BeamSplitter {
    pub fn balanced(n_max: usize) -> Self {
        Self { transmissivity: 0.5, n_max }
    }

    pub fn reflectivity(&self) -> f64 {
        1.0 - self.transmissivity
    }

    pub fn operator(&self) -> Result<ElementOperator> {
        beam_splitter_operator(self.transmissivity, self.n_max)
    }
}

/// Phase `φ` accumulated on one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifter {
    pub phi: f64,
    pub mode: Mode,
}

impl PhaseShifter {
    pub fn operator(&self, n_max: usize) -> ElementOperator {
        phase_operator(self.phi, self.mode, n_max)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Fock-space matrix of a beam splitter, built by expanding
/// `(t a† + r b†)^m (r a† + t b†)^n |0,0⟩ / √(m! n!)` for every input `|m, n⟩`.
pub fn beam_splitter_operator(transmissivity: f64, n_max: usize) -> Result<ElementOperator> {
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(invalid(format!("beam splitter transmissivity must be in [0, 1], got {transmissivity}")));
    }
    if n_max == 0 {
        return Err(invalid("truncation n_max must be at least 1"));
    }
    let t = Complex64::new(transmissivity.sqrt(), 0.0);
    let r = Complex64::new(0.0, (1.0 - transmissivity).sqrt());
    let dim = dimension(n_max);
    let mut matrix = DMatrix::zeros(dim, dim);

    for (col, input) in basis(n_max).enumerate() {
        let (m, n) = (input.n_a, input.n_b);
        let total = m + n;
        if total > n_max {
            matrix[(col, col)] = Complex64::new(1.0, 0.0);
            continue;
        }
        let norm_in = (factorial(m) * factorial(n)).sqrt();
        for j in 0..=m {
            let from_a = t.powu(j as u32) * r.powu((m - j) as u32) * binomial(m, j);
            for k in 0..=n {
                let from_b = r.powu(k as u32) * t.powu((n - k) as u32) * binomial(n, k);
                let out = FockIndex::new(j + k, total - j - k);
                let ladder = (factorial(out.n_a) * factorial(out.n_b)).sqrt() / norm_in;
                matrix[(out.flat(n_max), col)] += from_a * from_b * ladder;
            }
        }
    }
    Ok(ElementOperator { n_max, max_total: n_max, matrix })
}

/// Diagonal operator multiplying `|n_a, n_b⟩` by `exp(i φ n_mode)`.
pub fn phase_operator(phi: f64, mode: Mode, n_max: usize) -> ElementOperator {
    let dim = dimension(n_max);
    let mut matrix = DMatrix::zeros(dim, dim);
    for (i, idx) in basis(n_max).enumerate() {
        matrix[(i, i)] = Complex64::from_polar(1.0, phi * idx.count(mode) as f64);
    }
    ElementOperator { n_max, max_total: 2 * n_max, matrix }
}

/// Where the input state enters the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Injection {
    /// Before the first beam splitter (ordinary use).
    #[default]
    Front,
    /// Directly into the two arms, skipping the first beam splitter. Used to
    /// feed a prepared N00N state into the phase/recombination stage.
    Interior,
}

/// Single-pass Mach-Zehnder run: phase in path B, optional per-arm loss
/// `(η_A, η_B)` between the splitters.
#[derive(Debug, Clone, PartialEq)]
pub struct MachZehnderConfig {
    pub input: TwoModeState,
    pub phi: f64,
    pub loss: Option<(f64, f64)>,
    pub injection: Injection,
}

impl MachZehnderConfig {
    pub fn new(input: TwoModeState, phi: f64) -> Self {
        Self { input, phi, loss: None, injection: Injection::Front }
    }

    pub fn with_loss(mut self, eta_a: f64, eta_b: f64) -> Self {
        self.loss = Some((eta_a, eta_b));
        self
    }

    pub fn injected(mut self, injection: Injection) -> Self {
        self.injection = injection;
        self
    }
}

/// Runs the interferometer and returns the state at the detectors.
///
/// Order: 50:50 splitter, per-arm loss, phase on B, 50:50 splitter. The
/// output ports are relabeled so that a single photon entering A at `φ = 0`
/// leaves through A2, giving `P(A2) = (1 + cos φ)/2`.
pub fn mach_zehnder(config: &MachZehnderConfig) -> Result<DensityOperator> {
    let n_max = config.input.n_max();
    let splitter = beam_splitter_operator(0.5, n_max)?;
    let mut rho = config.input.to_density();
    if config.injection == Injection::Front {
        rho = splitter.apply_density(&rho)?;
    }
    if let Some((eta_a, eta_b)) = config.loss {
        rho = loss::apply_loss(&rho, eta_a, eta_b)?;
    }
    rho = phase_operator(config.phi, Mode::B, n_max).apply_density(&rho)?;
    rho = splitter.apply_density(&rho)?;
    ElementOperator::swap(n_max).apply_density(&rho)
}
