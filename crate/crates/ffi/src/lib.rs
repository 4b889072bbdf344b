//! C ABI over `cpbs-core`.
//!
//! Every fallible function returns a [`CpbsStatus`]; on failure the message
//! is available from [`cpbs_last_error`] on the calling thread. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Buffers are caller-allocated; functions that fill one
//! take its capacity and fail with `CPBS_STATUS_BUFFER_TOO_SMALL` when it is
//! short.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cpbs_core::dynamics::{
    basis_initial_state, evolve, evolve_2qb_dephasing, full_model_setup, DephasingConfig, DrainRates, Propagator,
    ThetaGrid, TimeAxis, Tolerances, Trajectory,
};
use cpbs_core::model::{build_2qb_hamiltonian, effective_coupling, effective_onsite};
use cpbs_core::quantifiers::{concurrence, IndicatorSet};
use cpbs_core::spectral::{ClassificationConfig, SpectralReport};
use cpbs_core::units::PhysicalUnits;
use cpbs_core::{DensityMatrix, Error, ModelParams, TwoQubitForm};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpbsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateParameters = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    IntegratorFailure = 6,
    Panic = 99,
}

/// Hamiltonian parameters in units of the inter-dot Coulomb repulsion.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpbsParams {
    pub zeeman1: f64,
    pub zeeman2: f64,
    pub coulomb_intra: f64,
    pub coulomb_inter: f64,
    pub car: f64,
    pub cotunneling: f64,
}

impl From<CpbsParams> for ModelParams {
    fn from(p: CpbsParams) -> Self {
        ModelParams {
            zeeman1: p.zeeman1,
            zeeman2: p.zeeman2,
            coulomb_intra: p.coulomb_intra,
            coulomb_inter: p.coulomb_inter,
            car: p.car,
            cotunneling: p.cotunneling,
        }
    }
}

impl From<ModelParams> for CpbsParams {
    fn from(p: ModelParams) -> Self {
        CpbsParams {
            zeeman1: p.zeeman1,
            zeeman2: p.zeeman2,
            coulomb_intra: p.coulomb_intra,
            coulomb_inter: p.coulomb_inter,
            car: p.car,
            cotunneling: p.cotunneling,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpbsTimeAxis {
    /// Half the exact anticrossing splitting.
    Spectral = 0,
    /// Second-order effective coupling.
    Effective = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpbsPropagator {
    Adaptive = 0,
    Exponential = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpbsTwoQubitForm {
    Shifted = 0,
    Exchange = 1,
}

/// Output grid `θ/π ∈ [start, stop]` with `count` points.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpbsGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Options for the full-model master equation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpbsEvolveOptions {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Basis index of the initial pure state.
    pub initial_state: usize,
    pub grid: CpbsGrid,
    pub time_axis: CpbsTimeAxis,
    pub propagator: CpbsPropagator,
    /// Adaptive propagator tolerances; ignored by the exponential path.
    pub rtol: f64,
    pub atol: f64,
}

/// Options for the dephasing two-qubit model.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpbsDephasingOptions {
    /// Dephasing rate in GHz (read as ns⁻¹).
    pub rate_ghz: f64,
    /// Energy scale `J'` in μeV.
    pub jp_uev: f64,
    pub form: CpbsTwoQubitForm,
    /// Index in `{|00>, |01>, |10>, |11>}`.
    pub initial_state: usize,
    pub grid: CpbsGrid,
    pub propagator: CpbsPropagator,
    pub rtol: f64,
    pub atol: f64,
}

/// Quantifiers of one full-model snapshot.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CpbsIndicators {
    pub svne: f64,
    pub qmi: f64,
    pub negativity: f64,
    pub tei: f64,
    pub concurrence: f64,
    pub concurrence_weight: f64,
    /// Order: (1↑,2↓), (1↓,2↑), (1↓,2↓), (1↑,2↑).
    pub covariances: [f64; 4],
}

/// Eigen-decomposition of the full Hamiltonian with per-state quantifiers.
pub struct CpbsSpectrum {
    report: SpectralReport,
}

/// Sampled density matrices along a trajectory.
pub struct CpbsTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

fn status_of(e: &Error) -> CpbsStatus {
    match e {
        Error::DegenerateParameters(_) => CpbsStatus::DegenerateParameters,
        Error::OutOfRange { .. } => CpbsStatus::OutOfRange,
        Error::IntegratorFailure { .. } => CpbsStatus::IntegratorFailure,
        _ => CpbsStatus::InvalidArgument,
    }
}

struct Failure(CpbsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CpbsStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CpbsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpbsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CpbsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slice<'a>(buf: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], Failure> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < needed {
        return Err(Failure(
            CpbsStatus::BufferTooSmall,
            format!("buffer holds {len} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn check_index(index: usize, len: usize) -> Result<(), Failure> {
    if index >= len {
        return Err(Error::OutOfRange { index, len }.into());
    }
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cpbs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cpbs_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Benchmark parameter set.
#[no_mangle]
pub extern "C" fn cpbs_params_benchmark() -> CpbsParams {
    ModelParams::benchmark().into()
}

/// Second-order coupling Ω of the two pair states.
///
/// # Safety
/// `params` and `out` must be valid pointers or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_effective_coupling(params: *const CpbsParams, out: *mut f64) -> CpbsStatus {
    guard(|| {
        let p: ModelParams = (*deref(params, "params")?).into();
        write(out, effective_coupling(&p)?, "out")
    })
}

/// Second-order on-site energy ε₀ of the two pair states.
///
/// # Safety
/// `params` and `out` must be valid pointers or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_effective_onsite(params: *const CpbsParams, out: *mut f64) -> CpbsStatus {
    guard(|| {
        let p: ModelParams = (*deref(params, "params")?).into();
        write(out, effective_onsite(&p)?, "out")
    })
}

/// Diagonalizes the full Hamiltonian.
///
/// # Safety
/// `params` must be valid or null; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_new(params: *const CpbsParams, out: *mut *mut CpbsSpectrum) -> CpbsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let p: ModelParams = (*deref(params, "params")?).into();
        let report = SpectralReport::new(&p, &ClassificationConfig::default())?;
        out.write(Box::into_raw(Box::new(CpbsSpectrum { report })));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must come from [`cpbs_spectrum_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_free(spectrum: *mut CpbsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of eigenstates, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_len(spectrum: *const CpbsSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.report.eigenstates.len())
}

/// Eigenvalues in ascending order.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_energies(
    spectrum: *const CpbsSpectrum,
    buf: *mut f64,
    len: usize,
) -> CpbsStatus {
    guard(|| {
        let s = deref(spectrum, "spectrum")?;
        let out = out_slice(buf, len, s.report.eigenstates.len())?;
        for (o, e) in out.iter_mut().zip(&s.report.eigenstates) {
            *o = e.energy;
        }
        Ok(())
    })
}

/// Basis-state weights `|⟨k|ψₙ⟩|²` of eigenstate `n`.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_projections(
    spectrum: *const CpbsSpectrum,
    n: usize,
    buf: *mut f64,
    len: usize,
) -> CpbsStatus {
    guard(|| {
        let s = deref(spectrum, "spectrum")?;
        check_index(n, s.report.eigenstates.len())?;
        let p = &s.report.eigenstates[n].projections;
        out_slice(buf, len, p.len())?.copy_from_slice(p);
        Ok(())
    })
}

/// Spin-resolved occupation covariances of eigenstate `n`, in the order of
/// [`CpbsIndicators::covariances`].
///
/// # Safety
/// `out` must point to four doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_covariances(
    spectrum: *const CpbsSpectrum,
    n: usize,
    out: *mut f64,
) -> CpbsStatus {
    guard(|| {
        let s = deref(spectrum, "spectrum")?;
        check_index(n, s.report.eigenstates.len())?;
        out_slice(out, 4, 4)?.copy_from_slice(&s.report.eigenstates[n].covariances);
        Ok(())
    })
}

/// Entanglement entropy of QD1 in eigenstate `n`.
///
/// # Safety
/// `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_spectrum_svne(spectrum: *const CpbsSpectrum, n: usize, out: *mut f64) -> CpbsStatus {
    guard(|| {
        let s = deref(spectrum, "spectrum")?;
        check_index(n, s.report.eigenstates.len())?;
        write(out, s.report.eigenstates[n].svne, "out")
    })
}

/// Default full-model options: benchmark drains, `ρ(0) = |1001⟩⟨1001|`,
/// 1001 points over `[0, π]`.
#[no_mangle]
pub extern "C" fn cpbs_evolve_options_default() -> CpbsEvolveOptions {
    let d = DrainRates::default();
    let t = Tolerances::default();
    CpbsEvolveOptions {
        gamma1: d.gamma1,
        gamma2: d.gamma2,
        initial_state: 9,
        grid: default_grid(),
        time_axis: CpbsTimeAxis::Spectral,
        propagator: CpbsPropagator::Adaptive,
        rtol: t.rtol,
        atol: t.atol,
    }
}

/// Default dephasing options: 0.1 GHz, `J' = 100 μeV`, exchange form,
/// `ρ(0) = |01⟩⟨01|`.
#[no_mangle]
pub extern "C" fn cpbs_dephasing_options_default() -> CpbsDephasingOptions {
    let t = Tolerances::default();
    CpbsDephasingOptions {
        rate_ghz: 0.1,
        jp_uev: PhysicalUnits::default().jp_uev,
        form: CpbsTwoQubitForm::Exchange,
        initial_state: 1,
        grid: default_grid(),
        propagator: CpbsPropagator::Adaptive,
        rtol: t.rtol,
        atol: t.atol,
    }
}

fn default_grid() -> CpbsGrid {
    let g = ThetaGrid::default();
    CpbsGrid {
        start: g.start,
        stop: g.stop,
        count: g.count,
    }
}

fn thetas(g: &CpbsGrid) -> Result<Vec<f64>, Failure> {
    Ok(ThetaGrid {
        start: g.start,
        stop: g.stop,
        count: g.count,
    }
    .values()?)
}

fn propagator(kind: CpbsPropagator, rtol: f64, atol: f64) -> Result<Propagator, Failure> {
    match kind {
        CpbsPropagator::Exponential => Ok(Propagator::Exponential),
        CpbsPropagator::Adaptive => {
            if !(rtol > 0.0 && atol > 0.0 && rtol.is_finite() && atol.is_finite()) {
                return Err(Failure(
                    CpbsStatus::InvalidArgument,
                    format!("tolerances must be positive (rtol {rtol}, atol {atol})"),
                ));
            }
            Ok(Propagator::Adaptive(Tolerances { rtol, atol }))
        }
    }
}

fn checked(tr: Trajectory) -> Result<*mut CpbsTrajectory, Failure> {
    tr.check_invariants()?;
    Ok(Box::into_raw(Box::new(CpbsTrajectory { inner: tr })))
}

/// Propagates the full 16-level master equation with spin-selective drains.
///
/// # Safety
/// Pointers must be valid or null; `out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn cpbs_evolve(
    params: *const CpbsParams,
    options: *const CpbsEvolveOptions,
    out: *mut *mut CpbsTrajectory,
) -> CpbsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let p: ModelParams = (*deref(params, "params")?).into();
        let o = deref(options, "options")?;
        let drains = DrainRates {
            gamma1: o.gamma1,
            gamma2: o.gamma2,
        };
        let axis = match o.time_axis {
            CpbsTimeAxis::Spectral => TimeAxis::Spectral,
            CpbsTimeAxis::Effective => TimeAxis::Effective,
        };
        let (h, channels, w) = full_model_setup(&p, &drains, axis)?;
        let rho0 = basis_initial_state(o.initial_state)?;
        let tr = evolve(
            &rho0,
            &h,
            &channels,
            &thetas(&o.grid)?,
            w,
            propagator(o.propagator, o.rtol, o.atol)?,
        )?;
        out.write(checked(tr)?);
        Ok(())
    })
}

/// Propagates the two-qubit model with pure dephasing; the phase axis is
/// `|Ω| t`.
///
/// # Safety
/// Pointers must be valid or null; `out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn cpbs_evolve_dephasing(
    params: *const CpbsParams,
    options: *const CpbsDephasingOptions,
    out: *mut *mut CpbsTrajectory,
) -> CpbsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let p: ModelParams = (*deref(params, "params")?).into();
        let o = deref(options, "options")?;
        let form = match o.form {
            CpbsTwoQubitForm::Shifted => TwoQubitForm::Shifted,
            CpbsTwoQubitForm::Exchange => TwoQubitForm::Exchange,
        };
        let h2 = build_2qb_hamiltonian(&p, form)?;
        let omega = effective_coupling(&p)?.abs();
        if omega == 0.0 {
            return Err(Error::DegenerateParameters("effective coupling vanishes").into());
        }
        let units = PhysicalUnits::new(o.jp_uev)?;
        let deph = DephasingConfig::from_ghz(o.rate_ghz, &units)?;
        let rho0 = DensityMatrix::basis_state(4, o.initial_state)?;
        let prop = propagator(o.propagator, o.rtol, o.atol)?;
        let tr = evolve_2qb_dephasing(&rho0, &h2, &deph, &thetas(&o.grid)?, omega, prop)?;
        out.write(checked(tr)?);
        Ok(())
    })
}

/// # Safety
/// `trajectory` must come from an evolve call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_free(trajectory: *mut CpbsTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `trajectory` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_len(trajectory: *const CpbsTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.inner.len())
}

/// Hilbert-space dimension (16 or 4), or 0 for a null handle.
///
/// # Safety
/// `trajectory` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_dim(trajectory: *const CpbsTrajectory) -> usize {
    trajectory
        .as_ref()
        .and_then(|t| t.inner.states.first())
        .map_or(0, |s| s.dim())
}

/// Phases `θ` of all samples.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_thetas(
    trajectory: *const CpbsTrajectory,
    buf: *mut f64,
    len: usize,
) -> CpbsStatus {
    guard(|| {
        let t = &deref(trajectory, "trajectory")?.inner;
        out_slice(buf, len, t.len())?.copy_from_slice(&t.thetas);
        Ok(())
    })
}

/// Basis populations at sample `step`.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_populations(
    trajectory: *const CpbsTrajectory,
    step: usize,
    buf: *mut f64,
    len: usize,
) -> CpbsStatus {
    guard(|| {
        let t = &deref(trajectory, "trajectory")?.inner;
        check_index(step, t.len())?;
        let p = t.populations(step);
        out_slice(buf, len, p.len())?.copy_from_slice(&p);
        Ok(())
    })
}

/// Density matrix at sample `step`, row-major, split into real and
/// imaginary parts of `dim²` doubles each.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_density(
    trajectory: *const CpbsTrajectory,
    step: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> CpbsStatus {
    guard(|| {
        let t = &deref(trajectory, "trajectory")?.inner;
        check_index(step, t.len())?;
        let m = t.states[step].matrix();
        let d = m.nrows();
        let re = out_slice(re, len, d * d)?;
        let im = out_slice(im, len, d * d)?;
        for i in 0..d {
            for j in 0..d {
                re[i * d + j] = m[(i, j)].re;
                im[i * d + j] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Entanglement quantifiers at sample `step` of a full-model trajectory.
///
/// # Safety
/// `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_indicators(
    trajectory: *const CpbsTrajectory,
    step: usize,
    out: *mut CpbsIndicators,
) -> CpbsStatus {
    guard(|| {
        let t = &deref(trajectory, "trajectory")?.inner;
        check_index(step, t.len())?;
        let ind = IndicatorSet::evaluate(&t.states[step])?;
        write(
            out,
            CpbsIndicators {
                svne: ind.svne,
                qmi: ind.qmi,
                negativity: ind.neg,
                tei: ind.tei,
                concurrence: ind.concurrence.concurrence,
                concurrence_weight: ind.concurrence.weight,
                covariances: ind.covariances,
            },
            "out",
        )
    })
}

/// Wootters concurrence at sample `step` of a two-qubit trajectory.
///
/// # Safety
/// `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn cpbs_trajectory_concurrence(
    trajectory: *const CpbsTrajectory,
    step: usize,
    out: *mut f64,
) -> CpbsStatus {
    guard(|| {
        let t = &deref(trajectory, "trajectory")?.inner;
        check_index(step, t.len())?;
        write(out, concurrence(&t.states[step])?, "out")
    })
}
