//! Conversion between the dimensionless model units (energies in `J'`,
//! `ħ = 1`) and laboratory units.
//!
//! Rates quoted in GHz are read as inverse nanoseconds (`E/ħ`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in μeV·ns.
pub const HBAR_UEV_NS: f64 = 0.6582119569;

/// Physical scale fixed by the inter-dot Coulomb repulsion `J'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalUnits {
    /// `J'` in μeV.
    pub jp_uev: f64,
}

impl Default for PhysicalUnits {
    /// `J' = 100 μeV`.
    fn default() -> Self {
        PhysicalUnits { jp_uev: 100.0 }
    }
}

impl PhysicalUnits {
    pub fn new(jp_uev: f64) -> Result<Self> {
        if !(jp_uev.is_finite() && jp_uev > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "J' must be a positive energy in ueV, got {jp_uev}"
            )));
        }
        Ok(PhysicalUnits { jp_uev })
    }

    /// Energy in μeV of a model energy.
    pub fn energy_uev(&self, energy: f64) -> f64 {
        energy * self.jp_uev
    }

    /// Angular frequency `E/ħ` in ns⁻¹ of a model energy.
    pub fn frequency_per_ns(&self, energy: f64) -> f64 {
        self.energy_uev(energy) / HBAR_UEV_NS
    }

    /// Model rate (units of `J'`) of a rate given in ns⁻¹.
    pub fn rate_from_per_ns(&self, rate: f64) -> f64 {
        rate * HBAR_UEV_NS / self.jp_uev
    }

    /// Time in ns of a model time (units of `ħ/J'`).
    pub fn time_ns(&self, t: f64) -> f64 {
        t * HBAR_UEV_NS / self.jp_uev
    }
}
