//! Brute-force reference models shared by the integration tests.
//!
//! Nothing here calls into the library's optics or loss code: beam splitters
//! are rebuilt from explicit creation-operator matrices, and loss from a
//! beam-splitter coupling to an environment mode followed by a partial trace.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use noonsim::fock::{basis, dimension, DensityOperator, FockIndex};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-mode creation operator on `0..=cutoff`.
fn creation(cutoff: usize) -> DMatrix<Complex64> {
    let d = cutoff + 1;
    let mut m = DMatrix::zeros(d, d);
    for n in 0..cutoff {
        m[(n + 1, n)] = c(((n + 1) as f64).sqrt(), 0.0);
    }
    m
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Output amplitudes of a beam splitter acting on `|m, n⟩`, computed as
/// `(√T a† + i√R b†)^m (i√R a† + √T b†)^n |0,0⟩ / √(m! n!)` with explicit
/// ladder matrices on a cutoff large enough to hold every output.
pub fn ladder_beam_splitter(transmissivity: f64, m: usize, n: usize) -> Vec<(FockIndex, Complex64)> {
    let cutoff = m + n;
    let d = cutoff + 1;
    let id = DMatrix::<Complex64>::identity(d, d);
    let a_dag = kron(&creation(cutoff), &id);
    let b_dag = kron(&id, &creation(cutoff));
    let t = c(transmissivity.sqrt(), 0.0);
    let r = c(0.0, (1.0 - transmissivity).sqrt());
    let out_a = &a_dag * t + &b_dag * r;
    let out_b = &a_dag * r + &b_dag * t;

    let mut v = DVector::<Complex64>::zeros(d * d);
    v[0] = c(1.0, 0.0);
    for _ in 0..n {
        v = &out_b * v;
    }
    for _ in 0..m {
        v = &out_a * v;
    }
    v /= c((factorial(m) * factorial(n)).sqrt(), 0.0);

    (0..d * d)
        .map(|i| (FockIndex::new(i / d, i % d), v[i]))
        .filter(|(_, amp)| amp.norm() > 0.0)
        .collect()
}

/// Full beam-splitter matrix on the truncated space assembled column by
/// column from [`ladder_beam_splitter`]; only sectors with `n_a + n_b ≤ n_max`.
pub fn ladder_beam_splitter_matrix(transmissivity: f64, n_max: usize) -> DMatrix<Complex64> {
    let dim = dimension(n_max);
    let mut u = DMatrix::zeros(dim, dim);
    for (col, idx) in basis(n_max).enumerate() {
        if idx.total() > n_max {
            continue;
        }
        for (out, amp) in ladder_beam_splitter(transmissivity, idx.n_a, idx.n_b) {
            u[(out.flat(n_max), col)] = amp;
        }
    }
    u
}

/// Loss on one mode via a dilation: couple the lossy mode to a vacuum
/// environment mode with `exp(θ (x† e − x e†))`, `cos²θ = η`, then trace the
/// environment out. `on_a` picks the lossy mode.
pub fn dilation_loss(rho: &DensityOperator, eta: f64, on_a: bool) -> DMatrix<Complex64> {
    let n_max = rho.n_max();
    let d = n_max + 1;
    let id = DMatrix::<Complex64>::identity(d, d);
    let cr = creation(n_max);
    let theta = eta.sqrt().acos();

    // ordering: lossy ⊗ spectator ⊗ environment
    let x_dag = kron(&kron(&cr, &id), &id);
    let e_dag = kron(&kron(&id, &id), &cr);
    let x = x_dag.adjoint();
    let e = e_dag.adjoint();
    let generator = (&x_dag * &e - &x * &e_dag) * c(theta, 0.0);
    let u = generator.exp();

    // embed rho (A,B order) into lossy ⊗ spectator ⊗ env(vacuum)
    let big = d * d * d;
    let pos = |lossy: usize, spect: usize, env: usize| (lossy * d + spect) * d + env;
    let mut full = DMatrix::<Complex64>::zeros(big, big);
    for (i, ri) in basis(n_max).enumerate() {
        for (j, rj) in basis(n_max).enumerate() {
            let (li, si, lj, sj) = if on_a { (ri.n_a, ri.n_b, rj.n_a, rj.n_b) } else { (ri.n_b, ri.n_a, rj.n_b, rj.n_a) };
            full[(pos(li, si, 0), pos(lj, sj, 0))] = rho.matrix()[(i, j)];
        }
    }
    let evolved = &u * full * u.adjoint();

    let mut out = DMatrix::<Complex64>::zeros(d * d, d * d);
    for (i, ri) in basis(n_max).enumerate() {
        for (j, rj) in basis(n_max).enumerate() {
            let (li, si, lj, sj) = if on_a { (ri.n_a, ri.n_b, rj.n_a, rj.n_b) } else { (ri.n_b, ri.n_a, rj.n_b, rj.n_a) };
            out[(i, j)] = (0..d).map(|k| evolved[(pos(li, si, k), pos(lj, sj, k))]).sum();
        }
    }
    out
}

/// Random full-rank density operator `G G† / tr(G G†)` with Gaussian-ish entries.
pub fn random_density(n_max: usize, seed: u64) -> DensityOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = dimension(n_max);
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let mut m = &g * g.adjoint();
    let tr: Complex64 = m.diagonal().iter().sum();
    m /= tr;
    // restore exact Hermiticity after the division
    let m = (&m + m.adjoint()) * c(0.5, 0.0);
    DensityOperator::from_matrix(n_max, m).expect("random density is valid")
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Oracle pipeline for a Mach-Zehnder run with lossless arms, built only from
/// [`ladder_beam_splitter_matrix`] and explicit diagonal phases. Returns the
/// Fock-basis output probabilities with the A2/B2 relabeling applied.
pub fn oracle_mach_zehnder_probs(input: &[(FockIndex, Complex64)], n_max: usize, phi: f64) -> Vec<(FockIndex, f64)> {
    let dim = dimension(n_max);
    let bs = ladder_beam_splitter_matrix(0.5, n_max);
    let mut v = DVector::<Complex64>::zeros(dim);
    for &(idx, amp) in input {
        v[idx.flat(n_max)] = amp;
    }
    v = &bs * v;
    for (i, idx) in basis(n_max).enumerate() {
        v[i] *= Complex64::from_polar(1.0, phi * idx.n_b as f64);
    }
    v = &bs * v;
    basis(n_max).enumerate().map(|(i, idx)| (FockIndex::new(idx.n_b, idx.n_a), v[i].norm_sqr())).collect()
}
