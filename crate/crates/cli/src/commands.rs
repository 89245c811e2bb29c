use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::Serialize;

use noonsim::fock::{FockIndex, TwoModeState};
use noonsim::loss::{apply_loss, noon_coherence};
use noonsim::measure::{
    estimate_period_and_visibility, fringe_scan, noon_interferometer_distribution, phase_grid,
    sample_detector_counts, FringeScanConfig, RNG_ALGORITHM,
};
use noonsim::sizing::{compare_with, lite_scenario, lite_wavelength_comparisons, Diffraction, SensorDesign, LITE_TABLE};

use crate::args::{Command, FringeArgs, LossSweepArgs, McArgs, SizeArgs};
use crate::output::{
    ComparisonRecord, CountRow, Data, FitSummary, FringeData, FringeRow, LiteData, Metadata, Num, Report, SweepRow,
    TableRow,
};
use crate::CliError;

fn metadata(command: &Command, seed: Option<u64>, parameters: &impl Serialize) -> Metadata {
    Metadata {
        version: env!("CARGO_PKG_VERSION"),
        subcommand: command.name(),
        rng: RNG_ALGORITHM,
        seed,
        parameters: serde_json::to_value(parameters).unwrap_or_default(),
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    let (seed, params, data) = match command {
        Command::Fringe(a) => (a.seed, serde_json::to_value(a), fringe(a)?),
        Command::LossSweep(a) => (None, serde_json::to_value(a), loss_sweep(a)?),
        Command::Mc(a) => (Some(a.seed), serde_json::to_value(a), mc(a)?),
        Command::Size(a) => (None, serde_json::to_value(a), size(a)?),
        Command::Lite(a) => (None, serde_json::to_value(a), lite()),
    };
    let params = params.unwrap_or_default();
    Ok(Report { metadata: metadata(command, seed, &params), data })
}

fn fringe(a: &FringeArgs) -> Result<Data, CliError> {
    let mut cfg = FringeScanConfig::exact(a.n, phase_grid(a.phi_min, a.phi_max, a.steps));
    if let Some(eta) = a.eta {
        cfg = cfg.with_loss(eta);
    }
    if let (Some(shots), Some(seed)) = (a.shots, a.seed) {
        cfg = cfg.sampled(shots, seed);
    }
    if a.postselect {
        cfg = cfg.postselected();
    }
    let scan = fringe_scan(&cfg)?;
    let fit = estimate_period_and_visibility(&scan).ok().map(|f| FitSummary {
        period: Num(f.period),
        period_std_err: Num(f.period_std_err),
        visibility: Num(f.visibility),
    });
    let rows = (0..scan.len())
        .map(|i| FringeRow {
            phi: Num(scan.phi[i]),
            p_plus: Num(scan.p_plus[i]),
            p_minus: Num(scan.p_minus[i]),
            p_other: Num(scan.p_other[i]),
            surviving_fraction: Num(scan.surviving_fraction[i]),
        })
        .collect();
    Ok(Data::Fringe(FringeData { rows, fit }))
}

fn loss_sweep(a: &LossSweepArgs) -> Result<Data, CliError> {
    let mut rows = Vec::new();
    for &n in &a.n_list {
        let grid = phase_grid(0.0, TAU, 16 * n.max(4));
        let noon = TwoModeState::noon(n, n)?.to_density();
        for eta in a.eta_grid() {
            let scan = fringe_scan(&FringeScanConfig::exact(n, grid.clone()).with_loss(eta))?;
            let fit = estimate_period_and_visibility(&scan)?;
            let coherence = noon_coherence(&apply_loss(&noon, eta, eta)?, n)?.norm();
            rows.push(SweepRow { n, eta: Num(eta), visibility: Num(fit.visibility), coherence: Num(coherence) });
        }
    }
    Ok(Data::LossSweep(rows))
}

fn mc(a: &McArgs) -> Result<Data, CliError> {
    let dist = noon_interferometer_distribution(a.n, a.phi, a.eta)?;
    let counts = sample_detector_counts(&dist, a.shots, a.seed, a.dark_rate)?;
    let keys: BTreeSet<FockIndex> = dist.iter().map(|(k, _)| *k).chain(counts.keys().copied()).collect();
    let rows = keys
        .into_iter()
        .filter_map(|k| {
            let count = counts.get(&k).copied().unwrap_or(0);
            let p = dist.get(&k);
            (count > 0 || p > 0.0).then(|| CountRow {
                n_a2: k.n_a,
                n_b2: k.n_b,
                count,
                frequency: Num(count as f64 / a.shots as f64),
                probability: Num(p),
            })
        })
        .collect();
    Ok(Data::Mc(rows))
}

fn size(a: &SizeArgs) -> Result<Data, CliError> {
    let design = SensorDesign::new(a.name.clone(), a.wavelength, a.aperture, 1)?;
    let cmp = compare_with(&design, a.n, Diffraction::new(a.prefactor)?)?;
    Ok(Data::Size(ComparisonRecord::from(&cmp)))
}

fn lite() -> Data {
    let table = LITE_TABLE
        .iter()
        .map(|(field, base, mini)| TableRow {
            field: field.to_string(),
            baseline: base.to_string(),
            miniaturized: mini.to_string(),
        })
        .collect();
    Data::Lite(LiteData {
        comparison: ComparisonRecord::from(&lite_scenario()),
        wavelengths: lite_wavelength_comparisons().iter().map(ComparisonRecord::from).collect(),
        table,
    })
}
