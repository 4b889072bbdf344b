//! Scenario configuration: TOML sections with strict keys, plus dotted
//! `section.key=value` overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::dynamics::{DrainRates, Propagator, ThetaGrid, TimeAxis, Tolerances};
use crate::model::{ModelParams, TwoQubitForm, PAIR_STATE_B};
use crate::spectral::ClassificationConfig;
use crate::units::PhysicalUnits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Spectrum,
    Evolve,
    Indicators,
    Covariance,
    DephasingSweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Evolve => "evolve",
            Scenario::Indicators => "indicators",
            Scenario::Covariance => "covariance",
            Scenario::DephasingSweep => "dephasing-sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropagatorKind {
    #[default]
    Adaptive,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsSettings {
    pub time_axis: TimeAxis,
    pub propagator: PropagatorKind,
    pub rtol: f64,
    pub atol: f64,
    /// Basis index of the initial pure state of the full model.
    pub initial_state: usize,
}

impl Default for DynamicsSettings {
    fn default() -> Self {
        let tol = Tolerances::default();
        DynamicsSettings {
            time_axis: TimeAxis::default(),
            propagator: PropagatorKind::default(),
            rtol: tol.rtol,
            atol: tol.atol,
            initial_state: PAIR_STATE_B,
        }
    }
}

impl DynamicsSettings {
    pub fn propagator(&self) -> Propagator {
        match self.propagator {
            PropagatorKind::Adaptive => Propagator::Adaptive(Tolerances {
                rtol: self.rtol,
                atol: self.atol,
            }),
            PropagatorKind::Exponential => Propagator::Exponential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DephasingSettings {
    /// Dephasing rates in GHz (read as ns⁻¹).
    pub rates_ghz: Vec<f64>,
    pub two_qubit_form: TwoQubitForm,
    /// Two-qubit basis index of the initial pure state.
    pub initial_state: usize,
}

impl Default for DephasingSettings {
    fn default() -> Self {
        DephasingSettings {
            rates_ghz: vec![0.01, 0.1, 1.0],
            two_qubit_form: TwoQubitForm::Exchange,
            initial_state: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSettings {
    pub dir: PathBuf,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings {
            dir: PathBuf::from("out"),
        }
    }
}

/// Everything a scenario reads.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    pub model: ModelParams,
    pub drain: DrainRates,
    pub dephasing: DephasingSettings,
    pub grid: ThetaGrid,
    pub units: PhysicalUnits,
    pub dynamics: DynamicsSettings,
    pub classification: ClassificationConfig,
    #[serde(skip_serializing)]
    pub output: OutputSettings,
}

impl Settings {
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.validate()?;
        self.drain.validate()?;
        self.grid.validate()?;
        PhysicalUnits::new(self.units.jp_uev)?;
        if let Some(r) = self.dephasing.rates_ghz.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(CliError::Config(format!("dephasing.rates_ghz: invalid rate {r}")));
        }
        if self.dynamics.initial_state >= crate::hilbert::DIM {
            return Err(CliError::Config(format!(
                "dynamics.initial_state: {} is not a basis index (0..16)",
                self.dynamics.initial_state
            )));
        }
        if self.dephasing.initial_state >= 4 {
            return Err(CliError::Config(format!(
                "dephasing.initial_state: {} is not a two-qubit basis index (0..4)",
                self.dephasing.initial_state
            )));
        }
        if !(self.dynamics.rtol > 0.0 && self.dynamics.atol > 0.0) {
            return Err(CliError::Config(
                "dynamics.rtol and dynamics.atol must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Parses TOML text, applies `section.key=value` overrides, validates.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| parse_error("config", text, &e))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let settings: Settings = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
        settings.validate()?;
        Ok(settings)
    }
}

/// Scenario plus settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub settings: Settings,
}

/// Benchmark parameters, drains `Γ₁ = Γ₂ = 1e-4`, 1001 points on `[0, π]`.
pub fn default_benchmark() -> ScenarioConfig {
    ScenarioConfig {
        scenario: Scenario::Evolve,
        settings: Settings::default(),
    }
}

fn parse_error(source: &str, text: &str, e: &toml::de::Error) -> CliError {
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            CliError::Config(format!("{source}:{line}:{column}: {}", e.message()))
        }
        None => CliError::Config(format!("{source}: {}", e.message())),
    }
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set {spec}: expected section.key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("--set {spec}: empty key segment")));
    }
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("key present after successful parse"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let (last, sections) = path.split_last().expect("non-empty path");
    let mut cur = table;
    for s in sections {
        let entry = cur
            .entry(s.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set {spec}: `{s}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_benchmark() {
        let s = Settings::parse("", &[]).unwrap();
        assert_eq!(s, default_benchmark().settings);
        assert_eq!(s.model, ModelParams::benchmark());
        assert_eq!(s.drain.gamma1, 1e-4);
        assert_eq!(s.grid.count, 1001);
        let omega = crate::model::effective_coupling(&s.model).unwrap();
        assert!((omega.abs() - 2.25606e-3).abs() < 1e-8);
        let uev = s.units.energy_uev(omega.abs());
        assert!((uev - 0.2256).abs() < 1e-3);
        assert!((s.units.frequency_per_ns(omega.abs()) - 0.343).abs() < 1e-3);
    }

    #[test]
    fn sections_and_overrides() {
        let text = "[model]\ncar = 0.1\n\n[grid]\ncount = 11\n\n[dephasing]\nrates_ghz = [0.5]\n";
        let s = Settings::parse(text, &["model.car=0.2".into(), "dynamics.time_axis=effective".into()]).unwrap();
        assert_eq!(s.model.car, 0.2);
        assert_eq!(s.model.cotunneling, 0.005);
        assert_eq!(s.grid.count, 11);
        assert_eq!(s.dephasing.rates_ghz, vec![0.5]);
        assert_eq!(s.dynamics.time_axis, TimeAxis::Effective);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Settings::parse("[model]\ncarr = 0.1\n", &[]).is_err());
        assert!(Settings::parse("[nonsense]\nx = 1\n", &[]).is_err());
        assert!(Settings::parse("", &["model.bogus=1".into()]).is_err());
        assert!(Settings::parse("", &["model".into()]).is_err());
    }

    #[test]
    fn parse_error_has_location() {
        let err = Settings::parse("[model]\ncar = = 1\n", &[]).unwrap_err().to_string();
        assert!(err.contains("config:2:"), "{err}");
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(Settings::parse("[grid]\ncount = 1\n", &[]).is_err());
        assert!(Settings::parse("[grid]\nstart = 1.0\nstop = 0.5\n", &[]).is_err());
        assert!(Settings::parse("[drain]\ngamma1 = -1e-4\n", &[]).is_err());
        assert!(Settings::parse("[model]\ncoulomb_intra = 1.0\n", &[]).is_err());
        assert!(Settings::parse("[dynamics]\ninitial_state = 16\n", &[]).is_err());
        assert!(Settings::parse("[units]\njp_uev = 0\n", &[]).is_err());
    }
}
