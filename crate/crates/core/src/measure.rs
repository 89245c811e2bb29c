//! Detection models, shot sampling and fringe analysis.
//!
//! Two detection schemes are provided. [`number_resolved_distribution`]
//! reads photon counts at the two output detectors. [`noon_basis_probs`]
//! projects onto `(|N,0⟩ ± |0,N⟩)/√2`, which gives `P± = (1 ± cos Nφ)/2` for a
//! lossless N00N state carrying phase `φ` on path B.
//!
//! Sampling uses ChaCha8 seeded from a `u64`; every sampled scan point `i`
//! draws from its own generator seeded with `seed + i`, so parallel and
//! serial evaluation agree exactly.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::{DMatrix, DVector};
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{basis, DensityOperator, FockIndex, Mode, TwoModeState};
use crate::optics::{mach_zehnder, Injection, MachZehnderConfig};
use crate::{loss, optics, NORM_TOL};

/// Generator used for every sampled quantity.
pub type ShotRng = ChaCha8Rng;

/// Identifier recorded next to seeds in emitted metadata.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9";

pub fn seeded_rng(seed: u64) -> ShotRng {
    ShotRng::seed_from_u64(seed)
}

/// Probabilities over discrete detection outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution<K: Ord = FockIndex> {
    entries: BTreeMap<K, f64>,
}

impl<K: Ord + Clone> OutcomeDistribution<K> {
    /// Entries must be non-negative and sum to one within `1e-10`.
    pub fn new(entries: BTreeMap<K, f64>) -> Result<Self> {
        if let Some(p) = entries.values().find(|p| p.is_nan() || **p < 0.0) {
            return Err(invalid(format!("negative or undefined probability {p}")));
        }
        let total: f64 = entries.values().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &K) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.entries.iter().map(|(k, p)| (k, *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }
}

/// Photon-number-resolved detection: the Fock-basis diagonal of `rho`.
pub fn number_resolved_distribution(rho: &DensityOperator) -> OutcomeDistribution<FockIndex> {
    // roundoff can leave diagonals like -1e-17
    let entries = basis(rho.n_max()).map(|idx| (idx, rho.probability(idx).max(0.0))).collect();
    OutcomeDistribution { entries }
}

/// Result of projecting onto `|ψ±⟩ = (|N,0⟩ ± |0,N⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoonProbabilities {
    pub p_plus: f64,
    pub p_minus: f64,
    /// Weight outside the N00N pair (lost photons and anything else).
    pub remainder: f64,
}

impl NoonProbabilities {
    /// `p₊ + p₋`, the fraction of events with all N photons present.
    pub fn surviving(&self) -> f64 {
        self.p_plus + self.p_minus
    }
}

pub fn noon_basis_probs(rho: &DensityOperator, n: usize) -> Result<NoonProbabilities> {
    if n < 1 || n > rho.n_max() {
        return Err(invalid(format!("N = {n} outside 1..={}", rho.n_max())));
    }
    let hi = FockIndex::new(n, 0);
    let lo = FockIndex::new(0, n);
    let diag = rho.probability(hi) + rho.probability(lo);
    let cross = rho.element(hi, lo).re;
    let p_plus = ((diag + 2.0 * cross) / 2.0).max(0.0);
    let p_minus = ((diag - 2.0 * cross) / 2.0).max(0.0);
    Ok(NoonProbabilities { p_plus, p_minus, remainder: (rho.trace() - p_plus - p_minus).max(0.0) })
}

/// `⟨(−1)^{n_mode}⟩`.
pub fn parity_expectation(rho: &DensityOperator, mode: Mode) -> f64 {
    basis(rho.n_max())
        .map(|idx| {
            let sign = if idx.count(mode) % 2 == 0 { 1.0 } else { -1.0 };
            sign * rho.probability(idx)
        })
        .sum()
}

/// Multinomial draw of `shots` outcomes from `dist`.
pub fn sample_counts<K: Ord + Clone>(dist: &OutcomeDistribution<K>, shots: u64, seed: u64) -> Result<BTreeMap<K, u64>> {
    let mut rng = seeded_rng(seed);
    sample_counts_with(dist, shots, &mut rng)
}

/// Same draw from a caller-supplied generator; sequential conditional
/// binomials over the entries in key order.
pub fn sample_counts_with<K: Ord + Clone>(
    dist: &OutcomeDistribution<K>,
    shots: u64,
    rng: &mut ShotRng,
) -> Result<BTreeMap<K, u64>> {
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    let mut remaining = shots;
    let mut mass_left = 1.0f64;
    let mut counts = BTreeMap::new();
    let last = dist.entries.len().saturating_sub(1);
    for (i, (key, &p)) in dist.entries.iter().enumerate() {
        let n = if i == last || remaining == 0 {
            remaining
        } else {
            let q = if mass_left > 0.0 { (p / mass_left).clamp(0.0, 1.0) } else { 0.0 };
            Binomial::new(remaining, q).map_err(|e| invalid(format!("binomial draw: {e}")))?.sample(rng)
        };
        counts.insert(key.clone(), n);
        remaining -= n;
        mass_left -= p;
    }
    Ok(counts)
}

/// Shot sampling at the two detectors with optional dark counts: each shot
/// draws a photon-number outcome and then adds an independent
/// `Poisson(dark_rate)` number of spurious clicks to each detector.
pub fn sample_detector_counts(
    dist: &OutcomeDistribution<FockIndex>,
    shots: u64,
    seed: u64,
    dark_rate: f64,
) -> Result<BTreeMap<FockIndex, u64>> {
    if !(dark_rate >= 0.0 && dark_rate.is_finite()) {
        return Err(invalid(format!("dark-count rate must be finite and non-negative, got {dark_rate}")));
    }
    if dark_rate == 0.0 {
        return sample_counts(dist, shots, seed);
    }
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    let keys: Vec<FockIndex> = dist.entries.keys().copied().collect();
    let picker = WeightedIndex::new(dist.entries.values()).map_err(|e| invalid(format!("outcome weights: {e}")))?;
    let dark = Poisson::new(dark_rate).map_err(|e| invalid(format!("dark-count rate: {e}")))?;
    let mut rng = seeded_rng(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let base = keys[picker.sample(&mut rng)];
        let extra_a = dark.sample(&mut rng) as usize;
        let extra_b = dark.sample(&mut rng) as usize;
        *counts.entry(FockIndex::new(base.n_a + extra_a, base.n_b + extra_b)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Number-resolved detector statistics for `noon(n)` fed into the arms of a
/// Mach-Zehnder interferometer (equal-arm loss `eta`, phase `phi` on B).
pub fn noon_interferometer_distribution(n: usize, phi: f64, eta: Option<f64>) -> Result<OutcomeDistribution<FockIndex>> {
    let mut config = MachZehnderConfig::new(TwoModeState::noon(n, n)?, phi).injected(Injection::Interior);
    if let Some(eta) = eta {
        config = config.with_loss(eta, eta);
    }
    Ok(number_resolved_distribution(&mach_zehnder(&config)?))
}

/// Outcome of one shot under the N00N-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoonOutcome {
    Plus,
    Minus,
    /// Fewer than N photons arrived, or the state left the N00N pair.
    Other,
}

/// Inputs to [`fringe_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScanConfig {
    pub n: usize,
    pub phi_grid: Vec<f64>,
    /// Equal-arm transmissivity; `None` is lossless.
    pub eta: Option<f64>,
    /// Shots per point; `None` gives exact probabilities.
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    /// Renormalize to events where all N photons survive (coincidence mode).
    pub postselect: bool,
}

impl FringeScanConfig {
    pub fn exact(n: usize, phi_grid: Vec<f64>) -> Self {
        Self { n, phi_grid, eta: None, shots: None, seed: None, postselect: false }
    }

    pub fn with_loss(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn sampled(mut self, shots: u64, seed: u64) -> Self {
        self.shots = Some(shots);
        self.seed = Some(seed);
        self
    }

    pub fn postselected(mut self) -> Self {
        self.postselect = true;
        self
    }
}

/// `steps` points from `min` (inclusive) to `max` (exclusive).
pub fn phase_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let step = (max - min) / steps as f64;
    (0..steps).map(|i| min + i as f64 * step).collect()
}

/// N00N fringe sampled over a phase grid.
///
/// Without post-selection `p_plus + p_minus + p_other = 1` at every point and
/// `p_other` carries the lost-photon sector. With post-selection the first
/// two are renormalized over surviving events and `p_other` is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    pub n: usize,
    pub eta: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub postselected: bool,
    pub phi: Vec<f64>,
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub p_other: Vec<f64>,
    /// Fraction of events in which all N photons were detected.
    pub surviving_fraction: Vec<f64>,
}

impl FringeScan {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("phase grid is empty"));
    }
    if grid.iter().any(|p| !p.is_finite()) {
        return Err(invalid("phase grid contains non-finite values"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("phase grid must be strictly increasing"));
    }
    Ok(())
}

struct ScanPoint {
    p_plus: f64,
    p_minus: f64,
    p_other: f64,
    surviving: f64,
}

fn postselect(p_plus: f64, p_minus: f64, phi: f64) -> Result<(f64, f64)> {
    let kept = p_plus + p_minus;
    if kept <= 0.0 {
        return Err(invalid(format!("no N-photon events survive at phi = {phi}; post-selected fringe undefined")));
    }
    Ok((p_plus / kept, p_minus / kept))
}

/// For each φ: prepare `noon(N)`, apply the optional equal-arm loss, then
/// phase φ on path B, and record the N00N-basis probabilities (exact) or
/// their sampled frequencies.
pub fn fringe_scan(config: &FringeScanConfig) -> Result<FringeScan> {
    let n = config.n;
    if n < 1 {
        return Err(invalid("photon number N must be at least 1"));
    }
    check_grid(&config.phi_grid)?;
    if config.shots == Some(0) {
        return Err(invalid("shots must be at least 1"));
    }
    let prepared = TwoModeState::noon(n, n)?.to_density();
    // loss commutes with the phase, so it is applied once up front
    let lossy = match config.eta {
        Some(eta) => loss::apply_loss(&prepared, eta, eta)?,
        None => prepared,
    };
    let seed = config.seed.unwrap_or(0);

    let points: Vec<ScanPoint> = config
        .phi_grid
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| {
            let rho = optics::phase_operator(phi, Mode::B, n).apply_density(&lossy)?;
            let probs = noon_basis_probs(&rho, n)?;
            let (mut p_plus, mut p_minus, mut p_other) = match config.shots {
                None => (probs.p_plus, probs.p_minus, probs.remainder),
                Some(shots) => {
                    let dist = OutcomeDistribution::new(BTreeMap::from([
                        (NoonOutcome::Plus, probs.p_plus),
                        (NoonOutcome::Minus, probs.p_minus),
                        (NoonOutcome::Other, probs.remainder),
                    ]))?;
                    let counts = sample_counts(&dist, shots, seed.wrapping_add(i as u64))?;
                    let freq = |k| counts[&k] as f64 / shots as f64;
                    (freq(NoonOutcome::Plus), freq(NoonOutcome::Minus), freq(NoonOutcome::Other))
                }
            };
            let surviving = p_plus + p_minus;
            if config.postselect {
                (p_plus, p_minus) = postselect(p_plus, p_minus, phi)?;
                p_other = 0.0;
            }
            Ok(ScanPoint { p_plus, p_minus, p_other, surviving })
        })
        .collect::<Result<_>>()?;

    Ok(FringeScan {
        n,
        eta: config.eta,
        shots: config.shots,
        seed: config.shots.map(|_| seed),
        postselected: config.postselect,
        phi: config.phi_grid.clone(),
        p_plus: points.iter().map(|p| p.p_plus).collect(),
        p_minus: points.iter().map(|p| p.p_minus).collect(),
        p_other: points.iter().map(|p| p.p_other).collect(),
        surviving_fraction: points.iter().map(|p| p.surviving).collect(),
    })
}

/// Least-squares fit of `p₊(φ) ≈ a + b cos kφ + c sin kφ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeFit {
    /// Fitted angular frequency `k`; the period is `2π/k`.
    pub frequency: f64,
    pub period: f64,
    /// Standard error of the period from the fit covariance.
    pub period_std_err: f64,
    pub offset: f64,
    /// `√(b² + c²)`.
    pub amplitude: f64,
    /// Amplitude over half the mean total event weight, clipped to `[0, 1]`.
    pub visibility: f64,
    pub residual_rms: f64,
}

struct LinearFit {
    coeffs: DVector<f64>,
    rss: f64,
}

fn fit_at(phi: &[f64], y: &[f64], k: f64) -> Option<LinearFit> {
    let m = phi.len();
    let design = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => 1.0,
        1 => (k * phi[i]).cos(),
        _ => (k * phi[i]).sin(),
    });
    let target = DVector::from_column_slice(y);
    let coeffs = design.clone().svd(true, true).solve(&target, 1e-14).ok()?;
    let rss = (&design * &coeffs - &target).norm_squared();
    Some(LinearFit { coeffs, rss })
}

fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Fits the fringe period and visibility of `scan.p_plus`.
///
/// Candidate integer frequencies `k = 1, 2, …` (as many as the grid resolves
/// with at least eight points per period) are tried first; the best one is
/// then refined by golden-section search on the residual. Visibility uses the
/// mean total event weight as reference, so without post-selection lost
/// events pull it down to `η^N`.
pub fn estimate_period_and_visibility(scan: &FringeScan) -> Result<FringeFit> {
    let phi = &scan.phi;
    let y = &scan.p_plus;
    let m = phi.len();
    if scan.n < 1 {
        return Err(invalid("photon number N must be at least 1"));
    }
    if y.len() != m || scan.p_minus.len() != m || scan.p_other.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: y.len() });
    }
    if m < 8 {
        return Err(Error::UnderSampled(format!("{m} points; at least 8 are needed")));
    }
    check_grid(phi)?;
    let step = (phi[m - 1] - phi[0]) / (m - 1) as f64;
    let coverage = phi[m - 1] - phi[0] + step;
    let expected = TAU / scan.n as f64;
    if coverage < expected * (1.0 - 1e-9) {
        return Err(Error::UnderSampled(format!(
            "grid covers {coverage:.6} rad, less than one expected period {expected:.6}"
        )));
    }
    if expected / step < 8.0 - 1e-9 {
        return Err(Error::UnderSampled(format!(
            "{:.2} points per expected period; at least 8 are needed",
            expected / step
        )));
    }

    let k_max = ((TAU / (8.0 * step)) + 1e-9).floor().max(1.0) as usize;
    let rss = |k: f64| fit_at(phi, y, k).map_or(f64::INFINITY, |f| f.rss);
    let best_int = (1..=k_max)
        .map(|k| (k as f64, rss(k as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
        .unwrap_or(1.0);
    let refined = golden_section((best_int - 0.5).max(0.5), best_int + 0.5, rss);
    let k = if rss(refined) <= rss(best_int) { refined } else { best_int };

    let fit = fit_at(phi, y, k).ok_or_else(|| invalid("fringe fit failed to converge"))?;
    let (a, b, c) = (fit.coeffs[0], fit.coeffs[1], fit.coeffs[2]);
    let amplitude = b.hypot(c);

    let dof = m.saturating_sub(4).max(1) as f64;
    let sigma2 = fit.rss / dof;
    let jac = DMatrix::from_fn(m, 4, |i, j| {
        let (s, co) = (k * phi[i]).sin_cos();
        match j {
            0 => 1.0,
            1 => co,
            2 => s,
            _ => phi[i] * (-b * s + c * co),
        }
    });
    let k_var = (jac.transpose() * &jac).try_inverse().map_or(f64::INFINITY, |cov| cov[(3, 3)] * sigma2);
    let period_std_err = TAU / (k * k) * k_var.max(0.0).sqrt();

    let mean_total =
        (0..m).map(|i| scan.p_plus[i] + scan.p_minus[i] + scan.p_other[i]).sum::<f64>() / m as f64;
    let visibility = if mean_total > 0.0 { (amplitude / (mean_total / 2.0)).clamp(0.0, 1.0) } else { 0.0 };

    Ok(FringeFit {
        frequency: k,
        period: TAU / k,
        period_std_err,
        offset: a,
        amplitude,
        visibility,
        residual_rms: (fit.rss / m as f64).sqrt(),
    })
}

/// `|ψ₊⟩` or `|ψ₋⟩` as a state, for callers that want overlaps directly.
pub fn noon_basis_state(n: usize, n_max: usize, plus: bool) -> Result<TwoModeState> {
    let sign = if plus { 1.0 } else { -1.0 };
    TwoModeState::from_support(
        n_max,
        &[
            (FockIndex::new(n, 0), FRAC_1_SQRT_2.into()),
            (FockIndex::new(0, n), (sign * FRAC_1_SQRT_2).into()),
        ],
    )
}
