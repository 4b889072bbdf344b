//! Simulator for a Cooper-pair beam splitter coupled to two single-level
//! quantum dots.
//!
//! The crate builds the 16-level double-dot Hamiltonian (Zeeman, Coulomb,
//! crossed Andreev reflection and cotunneling terms) in a Jordan–Wigner
//! representation, derives the perturbative two-level and two-qubit
//! effective models, propagates Lindblad master equations for the full and
//! effective models, and evaluates entanglement quantifiers (von Neumann
//! entropy, mutual information, negativity, tomographic indicator,
//! concurrence) together with the spin-resolved occupation covariance.
//!
//! All energies are dimensionless, in units of the inter-dot Coulomb
//! repulsion `J'`, with `ħ = 1`. Conversion to physical units lives in
//! [`units`] and is only applied at the CLI boundary.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub(crate) mod linalg;
pub mod model;
pub mod quantifiers;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, Dot, Mode, OccupationState, Operator, Spin, Subsystem, C64};
pub use model::{EffectiveModel, ModelParams, TwoQubitForm};

/// Crate version recorded in output file headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
