//! Simulation of N00N-state Mach-Zehnder interferometry in a truncated
//! two-mode Fock space.
//!
//! The crate is split along the path a photon takes through the model:
//!
//! - [`fock`]: two-mode states and density operators over `|n_a, n_b⟩`.
//! - [`optics`]: beam splitters, phase shifters and the Mach-Zehnder pipeline.
//! - [`loss`]: pure-loss (attenuation) channels and N00N coherence decay.
//! - [`measure`]: detection models, multinomial shot sampling, fringe fitting.
//! - [`sizing`]: Rayleigh/Heisenberg resolution and the aperture trade that
//!   keeps classical resolution with a `D/N` optic.
//!
//! Everything is a value type; operators and states are immutable once built
//! and can be shared freely between threads.

pub mod error;
pub mod fock;
pub mod loss;
pub mod measure;
pub mod optics;
pub mod sizing;

pub use error::{Error, Result};
pub use fock::{DensityOperator, FockIndex, Mode, TwoModeState};

/// Tolerance on normalization and trace.
pub const NORM_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted when checking positive semidefiniteness.
pub const PSD_FLOOR: f64 = -1e-8;
