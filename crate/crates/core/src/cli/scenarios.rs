//! Scenario runners. Each writes its data files into the output directory
//! and returns their paths in a fixed order.

use std::path::{Path, PathBuf};

use super::config::{Scenario, ScenarioConfig, Settings};
use super::output::{fmt_f64, provenance_line, write_csv, write_json};
use super::CliError;
use crate::dynamics::{
    basis_initial_state, evolve, evolve_2qb_dephasing, full_model_setup, DephasingConfig, Trajectory,
};
use crate::hilbert::{DensityMatrix, OccupationState, Spin, DIM};
use crate::model::{build_2qb_hamiltonian, effective_coupling};
use crate::quantifiers::{self, concurrence, covariance, embed_two_qubit, IndicatorSet};
use crate::spectral::SpectralReport;
use crate::VERSION;
use std::f64::consts::PI;

const COVARIANCE_COLUMNS: [&str; 4] = ["cov_1up_2dn", "cov_1dn_2up", "cov_1dn_2dn", "cov_1up_2up"];

/// Full-model trajectory for the configured initial state, drains and grid.
pub fn full_trajectory(settings: &Settings) -> Result<Trajectory, CliError> {
    let (h, channels, w) = full_model_setup(&settings.model, &settings.drain, settings.dynamics.time_axis)?;
    let rho0 = basis_initial_state(settings.dynamics.initial_state)?;
    let thetas = settings.grid.values()?;
    let tr = evolve(&rho0, &h, &channels, &thetas, w, settings.dynamics.propagator())?;
    tr.check_invariants()?;
    Ok(tr)
}

/// Two-qubit trajectory with dephasing `rate_ghz`; the phase axis is `|Ω|t`.
pub fn dephasing_trajectory(settings: &Settings, rate_ghz: f64) -> Result<Trajectory, CliError> {
    let h2 = build_2qb_hamiltonian(&settings.model, settings.dephasing.two_qubit_form)?;
    let omega = effective_coupling(&settings.model)?.abs();
    if omega == 0.0 {
        return Err(crate::Error::DegenerateParameters("effective coupling vanishes; no phase axis").into());
    }
    let deph = DephasingConfig::from_ghz(rate_ghz, &settings.units)?;
    let rho0 = DensityMatrix::basis_state(4, settings.dephasing.initial_state)?;
    let thetas = settings.grid.values()?;
    let tr = evolve_2qb_dephasing(&rho0, &h2, &deph, &thetas, omega, settings.dynamics.propagator())?;
    tr.check_invariants()?;
    Ok(tr)
}

/// Concurrence and the `(1↑,2↓)` covariance of one two-qubit snapshot.
pub fn two_qubit_observables(rho2: &DensityMatrix) -> Result<(f64, f64), CliError> {
    let c = concurrence(rho2)?;
    let cov = covariance(&embed_two_qubit(rho2)?, Spin::Up, Spin::Down)?;
    Ok((c, cov))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<PathBuf>, CliError> {
    let s = &config.settings;
    s.validate()?;
    let dir = &s.output.dir;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    match config.scenario {
        Scenario::Spectrum => spectrum(s, dir),
        Scenario::Evolve => populations(s, dir),
        Scenario::Indicators => indicators(s, dir),
        Scenario::Covariance => covariances(s, dir),
        Scenario::DephasingSweep => dephasing_sweep(s, dir),
    }
}

fn time_columns(s: &Settings, tr: &Trajectory, k: usize) -> Vec<String> {
    vec![
        fmt_f64(tr.thetas[k] / PI),
        fmt_f64(tr.times[k]),
        fmt_f64(s.units.time_ns(tr.times[k])),
    ]
}

fn time_header() -> Vec<String> {
    ["theta_over_pi", "t_hbar_per_jp", "t_ns"].map(String::from).to_vec()
}

fn spectrum(s: &Settings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let report = SpectralReport::new(&s.model, &s.classification)?;
    let comment = provenance_line(Scenario::Spectrum, s, "")?;
    let doc = serde_json::json!({
        "version": VERSION,
        "scenario": Scenario::Spectrum.name(),
        "settings": s,
        "report": report,
        "sets": report.sets(),
    });
    let json = write_json(&dir.join("spectrum.json"), &doc)?;

    let mut header: Vec<String> = ["eigenstate", "energy", "dominant_state"].map(String::from).to_vec();
    header.extend(COVARIANCE_COLUMNS.map(String::from));
    let rows = report.eigenstates.iter().map(|e| {
        let mut row = vec![e.index.to_string(), fmt_f64(e.energy), e.dominant_basis_state.clone()];
        row.extend(e.covariances.iter().map(|c| fmt_f64(*c)));
        row
    });
    let table = write_csv(&dir.join("eigenstates.csv"), &comment, &header, rows)?;

    let mut header: Vec<String> = ["eigenstate", "energy"].map(String::from).to_vec();
    header.extend((0..DIM).map(|i| format!("p_{}", label(i))));
    let rows = report.eigenstates.iter().map(|e| {
        let mut row = vec![e.index.to_string(), fmt_f64(e.energy)];
        row.extend(e.projections.iter().map(|p| fmt_f64(*p)));
        row
    });
    let proj = write_csv(&dir.join("projections.csv"), &comment, &header, rows)?;
    Ok(vec![json, table, proj])
}

fn label(i: usize) -> String {
    OccupationState::from_index(i)
        .map(|s| s.ket_label())
        .unwrap_or_default()
}

fn trajectory_comment(s: &Settings, scenario: Scenario, tr: &Trajectory) -> Result<String, CliError> {
    provenance_line(scenario, s, &format!("frequency={}", fmt_f64(tr.frequency)))
}

fn populations(s: &Settings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let tr = full_trajectory(s)?;
    let mut header = time_header();
    header.extend((0..DIM).map(|i| format!("p_{}", label(i))));
    let rows = (0..tr.len()).map(|k| {
        let mut row = time_columns(s, &tr, k);
        row.extend(tr.populations(k).into_iter().map(fmt_f64));
        row
    });
    let comment = trajectory_comment(s, Scenario::Evolve, &tr)?;
    Ok(vec![write_csv(&dir.join("populations.csv"), &comment, &header, rows)?])
}

fn indicators(s: &Settings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let tr = full_trajectory(s)?;
    let sets = tr.indicators()?;
    let mut header = time_header();
    header.extend(
        [
            "svne",
            "qmi",
            "qmi_scaled",
            "neg",
            "neg_scaled",
            "tei",
            "concurrence",
            "concurrence_weight",
        ]
        .map(String::from),
    );
    let rows = sets.iter().enumerate().map(|(k, ind): (usize, &IndicatorSet)| {
        let mut row = time_columns(s, &tr, k);
        row.extend(
            [
                ind.svne,
                ind.qmi,
                ind.qmi_scaled,
                ind.neg,
                ind.neg_scaled,
                ind.tei,
                ind.concurrence.concurrence,
                ind.concurrence.weight,
            ]
            .map(fmt_f64),
        );
        row
    });
    let comment = trajectory_comment(s, Scenario::Indicators, &tr)?;
    Ok(vec![write_csv(&dir.join("indicators.csv"), &comment, &header, rows)?])
}

fn covariances(s: &Settings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let tr = full_trajectory(s)?;
    let mut header = time_header();
    header.extend(COVARIANCE_COLUMNS.map(String::from));
    header.push("analytic".into());
    let mut rows = Vec::with_capacity(tr.len());
    for (k, rho) in tr.states.iter().enumerate() {
        let mut row = time_columns(s, &tr, k);
        row.extend(quantifiers::covariances(rho)?.map(fmt_f64));
        row.push(fmt_f64(quantifiers::covariance_analytic(tr.thetas[k])));
        rows.push(row);
    }
    let comment = trajectory_comment(s, Scenario::Covariance, &tr)?;
    Ok(vec![write_csv(&dir.join("covariance.csv"), &comment, &header, rows)?])
}

fn dephasing_file(rate_ghz: f64) -> String {
    format!("dephasing_{rate_ghz}GHz.csv")
}

fn dephasing_one(s: &Settings, dir: &Path, rate_ghz: f64) -> Result<PathBuf, CliError> {
    let tr = dephasing_trajectory(s, rate_ghz)?;
    let mut header = time_header();
    header.extend(["p_01", "p_10", "concurrence", "covariance"].map(String::from));
    let mut rows = Vec::with_capacity(tr.len());
    for (k, rho) in tr.states.iter().enumerate() {
        let (c, cov) = two_qubit_observables(rho)?;
        let p = tr.populations(k);
        let mut row = time_columns(s, &tr, k);
        row.extend([p[1], p[2], c, cov].map(fmt_f64));
        rows.push(row);
    }
    let extra = format!(
        "rate_ghz={rate_ghz} rate_jp={} frequency={}",
        fmt_f64(s.units.rate_from_per_ns(rate_ghz)),
        fmt_f64(tr.frequency)
    );
    let comment = provenance_line(Scenario::DephasingSweep, s, &extra)?;
    write_csv(&dir.join(dephasing_file(rate_ghz)), &comment, &header, rows)
}

fn dephasing_sweep(s: &Settings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let results: Vec<Result<PathBuf, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = s
            .dephasing
            .rates_ghz
            .iter()
            .map(|&r| scope.spawn(move || dephasing_one(s, dir, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(CliError::Internal("dephasing worker panicked".into())))
            })
            .collect()
    });
    results.into_iter().collect()
}
