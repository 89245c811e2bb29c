//! Aperture sizing under the resolution-for-size trade.
//!
//! Classical angular resolution is `λ/D`; with N-photon entangled signals it
//! is `λ/(N D)`. Holding the classical figure fixed therefore allows an
//! aperture of `D/N`, and at constant optic thickness the optic mass scales
//! with its area, i.e. by `1/N²`.
//!
//! Resolutions are angles in radians. The optional prefactor (1 by default)
//! lets callers use the Airy criterion `1.22 λ/D` instead.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Relative tolerance on the trade identity `R_H(D/N) = R_R(D)`.
pub const TRADE_TOL: f64 = 1e-12;

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(invalid(format!("{name} must be positive and finite, got {value}")));
    }
    Ok(())
}

fn check_photons(n: u32) -> Result<()> {
    if n < 1 {
        return Err(invalid("photon number N must be at least 1"));
    }
    Ok(())
}

/// Diffraction criterion `prefactor · λ / D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diffraction {
    pub prefactor: f64,
}

impl Default for Diffraction {
    fn default() -> Self {
        Self { prefactor: 1.0 }
    }
}

impl Diffraction {
    pub fn new(prefactor: f64) -> Result<Self> {
        check_positive("prefactor", prefactor)?;
        Ok(Self { prefactor })
    }

    pub fn rayleigh(&self, wavelength: f64, aperture: f64) -> Result<f64> {
        check_positive("wavelength", wavelength)?;
        check_positive("aperture", aperture)?;
        Ok(self.prefactor * wavelength / aperture)
    }

    pub fn heisenberg(&self, wavelength: f64, aperture: f64, n: u32) -> Result<f64> {
        check_photons(n)?;
        check_positive("wavelength", wavelength)?;
        check_positive("aperture", aperture)?;
        Ok(self.prefactor * wavelength / (aperture * f64::from(n)))
    }
}

/// `λ/D`.
pub fn rayleigh_resolution(wavelength: f64, aperture: f64) -> Result<f64> {
    Diffraction::default().rayleigh(wavelength, aperture)
}

/// `λ/(D N)`.
pub fn heisenberg_resolution(wavelength: f64, aperture: f64, n: u32) -> Result<f64> {
    Diffraction::default().heisenberg(wavelength, aperture, n)
}

/// `D/N`.
pub fn miniaturized_aperture(aperture: f64, n: u32) -> Result<f64> {
    check_positive("aperture", aperture)?;
    check_photons(n)?;
    Ok(aperture / f64::from(n))
}

/// Optic mass ratio `N²` for a constant-thickness optic; a lower bound,
/// since a smaller optic can also be thinner.
pub fn mass_reduction_factor(n: u32) -> Result<f64> {
    check_photons(n)?;
    Ok(f64::from(n).powi(2))
}

/// Wavelength, aperture and photon number of an imaging sensor, plus free-form
/// hardware notes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorDesign {
    pub name: String,
    /// Meters.
    pub wavelength: f64,
    /// Meters.
    pub aperture: f64,
    pub photons: u32,
    pub metadata: BTreeMap<String, String>,
}

impl SensorDesign {
    pub fn new(name: impl Into<String>, wavelength: f64, aperture: f64, photons: u32) -> Result<Self> {
        check_positive("wavelength", wavelength)?;
        check_positive("aperture", aperture)?;
        check_photons(photons)?;
        Ok(Self { name: name.into(), wavelength, aperture, photons, metadata: BTreeMap::new() })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolutions {
    /// Radians.
    pub baseline: f64,
    /// Radians.
    pub miniaturized: f64,
}

/// A classical design next to its entangled, shrunken counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignComparison {
    pub baseline: SensorDesign,
    pub miniaturized: SensorDesign,
    pub resolutions: Resolutions,
    pub aperture_ratio: f64,
    pub mass_factor: f64,
}

/// Shrinks `baseline` by `N` and evaluates both designs.
///
/// The baseline is evaluated classically (Rayleigh); the miniaturized design
/// uses `N` photons at `D/N` and is evaluated at the Heisenberg limit.
pub fn compare(baseline: &SensorDesign, n: u32) -> Result<DesignComparison> {
    compare_with(baseline, n, Diffraction::default())
}

pub fn compare_with(baseline: &SensorDesign, n: u32, criterion: Diffraction) -> Result<DesignComparison> {
    check_photons(n)?;
    let mut miniaturized = baseline.clone();
    miniaturized.aperture = miniaturized_aperture(baseline.aperture, n)?;
    miniaturized.photons = n;
    if n > 1 {
        miniaturized.name = format!("entangled-{}", baseline.name);
    }

    let resolutions = Resolutions {
        baseline: criterion.rayleigh(baseline.wavelength, baseline.aperture)?,
        miniaturized: criterion.heisenberg(miniaturized.wavelength, miniaturized.aperture, n)?,
    };
    let rel = (resolutions.miniaturized - resolutions.baseline).abs() / resolutions.baseline;
    assert!(rel <= TRADE_TOL, "resolution trade broken: relative difference {rel:e}");

    Ok(DesignComparison {
        baseline: baseline.clone(),
        miniaturized,
        resolutions,
        aperture_ratio: f64::from(n),
        mass_factor: mass_reduction_factor(n)?,
    })
}

/// Laser lines of the 1994 shuttle lidar, in meters.
pub const LITE_WAVELENGTHS: [f64; 3] = [1064e-9, 532e-9, 355e-9];

/// Rows of the LITE vs entangled-LITE hardware table, as `(row, LITE, entangled-LITE)`.
pub const LITE_TABLE: [(&str, &str, &str); 4] = [
    ("T/R Optics", "1 meter telescope", ".5 meter telescope"),
    ("Lasers", "Nd:YAG", "Nd:YAG, Ti:Sapph, etc."),
    ("Crystal", "C*DA, KD*P", "BBO, BiBO, LBO"),
    ("Imaging Hardware", "non-entangled light", "N = 2 N00N-states"),
];

/// The built-in LITE scenario: a 1 m receiver telescope traded against an
/// `N = 2` entangled design. The design wavelength is the 532 nm line; every
/// line is available through [`lite_wavelength_comparisons`].
pub fn lite_scenario() -> DesignComparison {
    lite_comparison_at(532e-9)
}

pub fn lite_wavelength_comparisons() -> Vec<DesignComparison> {
    LITE_WAVELENGTHS.iter().map(|&w| lite_comparison_at(w)).collect()
}

fn wavelength_list() -> String {
    LITE_WAVELENGTHS.iter().map(|w| format!("{} nm", (w * 1e9).round())).collect::<Vec<_>>().join(", ")
}

fn lite_comparison_at(wavelength: f64) -> DesignComparison {
    let mut baseline = SensorDesign::new("LITE", wavelength, 1.0, 1).expect("built-in design is valid");
    for (row, lite, _) in LITE_TABLE {
        baseline.metadata.insert(row.to_owned(), lite.to_owned());
    }
    baseline.metadata.insert("Wavelengths".to_owned(), wavelength_list());

    let mut cmp = compare(&baseline, 2).expect("built-in comparison is valid");
    for (row, _, entangled) in LITE_TABLE {
        cmp.miniaturized.metadata.insert(row.to_owned(), entangled.to_owned());
    }
    cmp
}
