//! Open-system propagation of the double-dot model and of its two-qubit
//! reduction.
//!
//! Trajectories are sampled on a grid of dimensionless phases `θ = ω t`,
//! where `ω` is the coupling frequency picked by a [`TimeAxis`].

mod integrator;
mod liouvillian;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use integrator::{Dop853, IntegrationError, IntegrationStats, Tolerances};
pub use liouvillian::{liouvillian, Channel, Lindbladian};

use crate::error::{Error, Result};
use crate::hilbert::{annihilation_operator, basis_projector, DensityMatrix, Dot, Mode, Operator, Spin, DIM};
use crate::model::{build_hamiltonian, effective_coupling, ModelParams};
use crate::quantifiers::IndicatorSet;
use crate::spectral::{anticrossing_half_gap, eigensystem};
use crate::units::PhysicalUnits;

/// Tolerance on `|Tr ρ - 1|` along a trajectory.
pub const TRACE_TOL: f64 = 1e-8;
/// Lower bound on the smallest eigenvalue of every snapshot.
pub const POSITIVITY_TOL: f64 = -1e-7;
/// Tolerance on the anti-Hermitian part of every snapshot.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Lead tunneling rates (units of `J'`) draining `1↑` and `2↓`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DrainRates {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for DrainRates {
    fn default() -> Self {
        DrainRates {
            gamma1: 1e-4,
            gamma2: 1e-4,
        }
    }
}

impl DrainRates {
    pub fn closed() -> Self {
        DrainRates {
            gamma1: 0.0,
            gamma2: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, rate) in [self.gamma1, self.gamma2].into_iter().enumerate() {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::NegativeRate { channel: i, rate });
            }
        }
        Ok(())
    }

    /// Channels `(Γ₁, d₁↑)` and `(Γ₂, d₂↓)`.
    pub fn channels(&self) -> Result<Vec<Channel>> {
        self.validate()?;
        Ok(vec![
            Channel::new(self.gamma1, annihilation_operator(Mode::new(Dot::One, Spin::Up))),
            Channel::new(self.gamma2, annihilation_operator(Mode::new(Dot::Two, Spin::Down))),
        ])
    }
}

/// Pure dephasing of the two-qubit states `|01>` and `|10>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingConfig {
    /// Rate in units of `J'`.
    pub rate: f64,
}

impl DephasingConfig {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::NegativeRate { channel: 0, rate });
        }
        Ok(DephasingConfig { rate })
    }

    /// Rate given in GHz, read as ns⁻¹.
    pub fn from_ghz(rate_ghz: f64, units: &PhysicalUnits) -> Result<Self> {
        Self::new(units.rate_from_per_ns(rate_ghz))
    }

    /// Channels with `S₁ = |01><01|` and `S₂ = |10><10|`.
    pub fn channels(&self) -> Vec<Channel> {
        vec![
            Channel::new(self.rate, basis_projector(4, 1)),
            Channel::new(self.rate, basis_projector(4, 2)),
        ]
    }
}

/// Which frequency converts model time into the phase `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeAxis {
    /// Half the exact splitting of the `|0110>/|1001>` anticrossing.
    #[default]
    Spectral,
    /// Second-order effective coupling `|Ω|`.
    Effective,
}

impl TimeAxis {
    pub fn frequency(&self, params: &ModelParams) -> Result<f64> {
        let w = match self {
            TimeAxis::Effective => effective_coupling(params)?.abs(),
            TimeAxis::Spectral => anticrossing_half_gap(&eigensystem(&build_hamiltonian(params))?),
        };
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::DegenerateParameters(
                "coupling frequency vanishes; no phase axis",
            ));
        }
        Ok(w)
    }
}

/// Propagation method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagator {
    /// Adaptive Dormand–Prince 8(5,3) on the matrix equation.
    Adaptive(Tolerances),
    /// Dense exponential of the vectorized generator.
    Exponential,
}

impl Default for Propagator {
    fn default() -> Self {
        Propagator::Adaptive(Tolerances::default())
    }
}

/// Uniform grid in `θ/π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThetaGrid {
    /// First point, in units of π.
    pub start: f64,
    /// Last point, in units of π.
    pub stop: f64,
    pub count: usize,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid {
            start: 0.0,
            stop: 1.0,
            count: 1001,
        }
    }
}

impl ThetaGrid {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidGrid(format!(
                "count must be at least 2, got {}",
                self.count
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start < 0.0 || self.stop <= self.start {
            return Err(Error::InvalidGrid(format!(
                "need 0 <= start < stop, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) * PI / (self.count - 1) as f64
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|k| PI * (self.start + (self.stop - self.start) * k as f64 / n))
            .collect())
    }
}

/// Snapshots of `ρ` along a phase grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub thetas: Vec<f64>,
    /// Model times `θ / ω` in units of `ħ/J'`.
    pub times: Vec<f64>,
    pub frequency: f64,
    pub states: Vec<DensityMatrix>,
}

/// Worst-case invariant violations over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub max_population_sum_error: f64,
}

impl InvariantReport {
    pub fn holds(&self) -> bool {
        self.max_trace_error <= TRACE_TOL
            && self.max_hermiticity_error <= HERMITICITY_TOL
            && self.min_eigenvalue >= POSITIVITY_TOL
            && self.max_population_sum_error <= TRACE_TOL
    }
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Diagonal of snapshot `step`.
    pub fn populations(&self, step: usize) -> Vec<f64> {
        let m = self.states[step].matrix();
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    /// Occupation of basis state `index` at every step.
    pub fn population_series(&self, index: usize) -> Result<Vec<f64>> {
        self.states.iter().map(|s| occupation(s, index)).collect()
    }

    pub fn invariants(&self) -> InvariantReport {
        let mut r = InvariantReport {
            max_trace_error: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
            max_population_sum_error: 0.0,
        };
        for s in &self.states {
            let m = s.matrix();
            let tr = s.trace();
            r.max_trace_error = r.max_trace_error.max((tr - 1.0).norm());
            r.max_population_sum_error = r.max_population_sum_error.max((tr.re - 1.0).abs());
            r.max_hermiticity_error = r.max_hermiticity_error.max(crate::linalg::hermiticity_deviation(m));
            let min = s.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            r.min_eigenvalue = r.min_eigenvalue.min(min);
        }
        r
    }

    /// Fails with the first θ at which an invariant is violated.
    pub fn check_invariants(&self) -> Result<InvariantReport> {
        for (theta, s) in self.thetas.iter().zip(&self.states) {
            let tr = (s.trace() - 1.0).norm();
            let herm = crate::linalg::hermiticity_deviation(s.matrix());
            let min = s.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            if tr > TRACE_TOL || herm > HERMITICITY_TOL || min < POSITIVITY_TOL {
                return Err(Error::IntegratorFailure {
                    theta: *theta,
                    reason: format!(
                        "invariant violated: |tr - 1| = {tr:e}, hermiticity {herm:e}, min eigenvalue {min:e}"
                    ),
                });
            }
        }
        Ok(self.invariants())
    }

    /// Indicator set of every snapshot. Requires 16-level states.
    pub fn indicators(&self) -> Result<Vec<IndicatorSet>> {
        self.states.iter().map(IndicatorSet::evaluate).collect()
    }
}

/// Propagates `ρ₀` under `H` and `channels`, sampling at the phases
/// `thetas` (ascending, non-negative) with `θ = frequency · t`.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &Operator,
    channels: &[Channel],
    thetas: &[f64],
    frequency: f64,
    method: Propagator,
) -> Result<Trajectory> {
    if rho0.dim() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}-level state", h.nrows()),
            found: format!("{}-level state", rho0.dim()),
        });
    }
    if !(frequency > 0.0 && frequency.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "frequency must be positive, got {frequency}"
        )));
    }
    if thetas.is_empty() {
        return Err(Error::InvalidGrid("empty phase grid".into()));
    }
    if thetas[0] < 0.0
        || thetas
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        || thetas.iter().any(|t| !t.is_finite())
    {
        return Err(Error::InvalidGrid(
            "phases must be finite, non-negative and strictly ascending".into(),
        ));
    }
    let generator = Lindbladian::new(h, channels)?;
    let times: Vec<f64> = thetas.iter().map(|th| th / frequency).collect();
    let states = match method {
        Propagator::Adaptive(tol) => propagate_adaptive(&generator, rho0, &times, tol, frequency)?,
        Propagator::Exponential => propagate_exponential(&generator, rho0, &times),
    };
    Ok(Trajectory {
        thetas: thetas.to_vec(),
        times,
        frequency,
        states,
    })
}

fn propagate_adaptive(
    generator: &Lindbladian,
    rho0: &DensityMatrix,
    times: &[f64],
    tol: Tolerances,
    frequency: f64,
) -> Result<Vec<DensityMatrix>> {
    let d = generator.dim();
    let mut states = Vec::with_capacity(times.len());
    Dop853::new(tol)
        .integrate(
            |_, y, dy| generator.apply_slice(y, dy),
            0.0,
            rho0.matrix().as_slice(),
            times,
            |_, y| states.push(DensityMatrix::new_unchecked(Operator::from_column_slice(d, d, y))),
        )
        .map_err(|e| Error::IntegratorFailure {
            theta: e.t * frequency,
            reason: e.reason,
        })?;
    Ok(states)
}

fn propagate_exponential(generator: &Lindbladian, rho0: &DensityMatrix, times: &[f64]) -> Vec<DensityMatrix> {
    let d = generator.dim();
    let l = generator.superoperator();
    let mut v = nalgebra::DVector::from_column_slice(rho0.matrix().as_slice());
    let mut cache: Option<(f64, Operator)> = None;
    let mut t = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        let dt = target - t;
        if dt > 0.0 {
            let reuse = matches!(&cache, Some((c, _)) if (c - dt).abs() <= 1e-12 * dt);
            if !reuse {
                cache = Some((dt, (&l * crate::hilbert::C64::new(dt, 0.0)).exp()));
            }
            let (_, p) = cache.as_ref().expect("propagator cached above");
            v = p * v;
            t = target;
        }
        states.push(DensityMatrix::new_unchecked(Operator::from_column_slice(
            d,
            d,
            v.as_slice(),
        )));
    }
    states
}

/// Two-qubit evolution under `h2` with dephasing of `|01>` and `|10>`.
pub fn evolve_2qb_dephasing(
    rho0: &DensityMatrix,
    h2: &Operator,
    deph: &DephasingConfig,
    thetas: &[f64],
    frequency: f64,
    method: Propagator,
) -> Result<Trajectory> {
    if rho0.dim() != 4 || h2.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: "4-level state and 4x4 Hamiltonian".into(),
            found: format!("{}-level state, {}x{} Hamiltonian", rho0.dim(), h2.nrows(), h2.ncols()),
        });
    }
    DephasingConfig::new(deph.rate)?;
    evolve(rho0, h2, &deph.channels(), thetas, frequency, method)
}

/// Probability `<i|ρ|i>`.
pub fn occupation(rho: &DensityMatrix, index: usize) -> Result<f64> {
    let d = rho.dim();
    if index >= d {
        return Err(Error::OutOfRange { index, len: d });
    }
    Ok(rho.matrix()[(index, index)].re)
}

/// Full-model Hamiltonian, drains and phase frequency for `params`.
pub fn full_model_setup(
    params: &ModelParams,
    drains: &DrainRates,
    axis: TimeAxis,
) -> Result<(Operator, Vec<Channel>, f64)> {
    params.validate()?;
    Ok((build_hamiltonian(params), drains.channels()?, axis.frequency(params)?))
}

/// `|i><i|` in the 16-level space.
pub fn basis_initial_state(index: usize) -> Result<DensityMatrix> {
    DensityMatrix::basis_state(DIM, index)
}
