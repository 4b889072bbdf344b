/* Generated by cbindgen; do not edit. */

#ifndef CPBS_H
#define CPBS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CpbsStatus {
  CPBS_STATUS_OK = 0,
  CPBS_STATUS_NULL_POINTER = 1,
  CPBS_STATUS_INVALID_ARGUMENT = 2,
  CPBS_STATUS_DEGENERATE_PARAMETERS = 3,
  CPBS_STATUS_OUT_OF_RANGE = 4,
  CPBS_STATUS_BUFFER_TOO_SMALL = 5,
  CPBS_STATUS_INTEGRATOR_FAILURE = 6,
  CPBS_STATUS_PANIC = 99,
} CpbsStatus;

typedef enum CpbsTimeAxis {
  /**
   * Half the exact anticrossing splitting.
   */
  CPBS_TIME_AXIS_SPECTRAL = 0,
  /**
   * Second-order effective coupling.
   */
  CPBS_TIME_AXIS_EFFECTIVE = 1,
} CpbsTimeAxis;

typedef enum CpbsPropagator {
  CPBS_PROPAGATOR_ADAPTIVE = 0,
  CPBS_PROPAGATOR_EXPONENTIAL = 1,
} CpbsPropagator;

typedef enum CpbsTwoQubitForm {
  CPBS_TWO_QUBIT_FORM_SHIFTED = 0,
  CPBS_TWO_QUBIT_FORM_EXCHANGE = 1,
} CpbsTwoQubitForm;

/**
 * Eigen-decomposition of the full Hamiltonian with per-state quantifiers.
 */
typedef struct CpbsSpectrum CpbsSpectrum;

/**
 * Sampled density matrices along a trajectory.
 */
typedef struct CpbsTrajectory CpbsTrajectory;

/**
 * Hamiltonian parameters in units of the inter-dot Coulomb repulsion.
 */
typedef struct CpbsParams {
  double zeeman1;
  double zeeman2;
  double coulomb_intra;
  double coulomb_inter;
  double car;
  double cotunneling;
} CpbsParams;

/**
 * Output grid `θ/π ∈ [start, stop]` with `count` points.
 */
typedef struct CpbsGrid {
  double start;
  double stop;
  size_t count;
} CpbsGrid;

/**
 * Options for the full-model master equation.
 */
typedef struct CpbsEvolveOptions {
  double gamma1;
  double gamma2;
  /**
   * Basis index of the initial pure state.
   */
  size_t initial_state;
  struct CpbsGrid grid;
  enum CpbsTimeAxis time_axis;
  enum CpbsPropagator propagator;
  /**
   * Adaptive propagator tolerances; ignored by the exponential path.
   */
  double rtol;
  double atol;
} CpbsEvolveOptions;

/**
 * Options for the dephasing two-qubit model.
 */
typedef struct CpbsDephasingOptions {
  /**
   * Dephasing rate in GHz (read as ns⁻¹).
   */
  double rate_ghz;
  /**
   * Energy scale `J'` in μeV.
   */
  double jp_uev;
  enum CpbsTwoQubitForm form;
  /**
   * Index in `{|00>, |01>, |10>, |11>}`.
   */
  size_t initial_state;
  struct CpbsGrid grid;
  enum CpbsPropagator propagator;
  double rtol;
  double atol;
} CpbsDephasingOptions;

/**
 * Quantifiers of one full-model snapshot.
 */
typedef struct CpbsIndicators {
  double svne;
  double qmi;
  double negativity;
  double tei;
  double concurrence;
  double concurrence_weight;
  /**
   * Order: (1↑,2↓), (1↓,2↑), (1↓,2↓), (1↑,2↑).
   */
  double covariances[4];
} CpbsIndicators;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cpbs_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cpbs_version(void);

/**
 * Benchmark parameter set.
 */
struct CpbsParams cpbs_params_benchmark(void);

/**
 * Second-order coupling Ω of the two pair states.
 *
 * # Safety
 * `params` and `out` must be valid pointers or null.
 */
enum CpbsStatus cpbs_effective_coupling(const struct CpbsParams *params, double *out);

/**
 * Second-order on-site energy ε₀ of the two pair states.
 *
 * # Safety
 * `params` and `out` must be valid pointers or null.
 */
enum CpbsStatus cpbs_effective_onsite(const struct CpbsParams *params, double *out);

/**
 * Diagonalizes the full Hamiltonian.
 *
 * # Safety
 * `params` must be valid or null; `out` must point to writable storage.
 */
enum CpbsStatus cpbs_spectrum_new(const struct CpbsParams *params, struct CpbsSpectrum **out);

/**
 * # Safety
 * `spectrum` must come from [`cpbs_spectrum_new`] and not be freed twice.
 */
void cpbs_spectrum_free(struct CpbsSpectrum *spectrum);

/**
 * Number of eigenstates, or 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be a live handle or null.
 */
size_t cpbs_spectrum_len(const struct CpbsSpectrum *spectrum);

/**
 * Eigenvalues in ascending order.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum CpbsStatus cpbs_spectrum_energies(const struct CpbsSpectrum *spectrum,
                                       double *buf,
                                       size_t len);

/**
 * Basis-state weights `|⟨k|ψₙ⟩|²` of eigenstate `n`.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum CpbsStatus cpbs_spectrum_projections(const struct CpbsSpectrum *spectrum,
                                          size_t n,
                                          double *buf,
                                          size_t len);

/**
 * Spin-resolved occupation covariances of eigenstate `n`, in the order of
 * [`CpbsIndicators::covariances`].
 *
 * # Safety
 * `out` must point to four doubles.
 */
enum CpbsStatus cpbs_spectrum_covariances(const struct CpbsSpectrum *spectrum,
                                          size_t n,
                                          double *out);

/**
 * Entanglement entropy of QD1 in eigenstate `n`.
 *
 * # Safety
 * `out` must be valid or null.
 */
enum CpbsStatus cpbs_spectrum_svne(const struct CpbsSpectrum *spectrum, size_t n, double *out);

/**
 * Default full-model options: benchmark drains, `ρ(0) = |1001⟩⟨1001|`,
 * 1001 points over `[0, π]`.
 */
struct CpbsEvolveOptions cpbs_evolve_options_default(void);

/**
 * Default dephasing options: 0.1 GHz, `J' = 100 μeV`, exchange form,
 * `ρ(0) = |01⟩⟨01|`.
 */
struct CpbsDephasingOptions cpbs_dephasing_options_default(void);

/**
 * Propagates the full 16-level master equation with spin-selective drains.
 *
 * # Safety
 * Pointers must be valid or null; `out` receives a new handle.
 */
enum CpbsStatus cpbs_evolve(const struct CpbsParams *params,
                            const struct CpbsEvolveOptions *options,
                            struct CpbsTrajectory **out);

/**
 * Propagates the two-qubit model with pure dephasing; the phase axis is
 * `|Ω| t`.
 *
 * # Safety
 * Pointers must be valid or null; `out` receives a new handle.
 */
enum CpbsStatus cpbs_evolve_dephasing(const struct CpbsParams *params,
                                      const struct CpbsDephasingOptions *options,
                                      struct CpbsTrajectory **out);

/**
 * # Safety
 * `trajectory` must come from an evolve call and not be freed twice.
 */
void cpbs_trajectory_free(struct CpbsTrajectory *trajectory);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `trajectory` must be a live handle or null.
 */
size_t cpbs_trajectory_len(const struct CpbsTrajectory *trajectory);

/**
 * Hilbert-space dimension (16 or 4), or 0 for a null handle.
 *
 * # Safety
 * `trajectory` must be a live handle or null.
 */
size_t cpbs_trajectory_dim(const struct CpbsTrajectory *trajectory);

/**
 * Phases `θ` of all samples.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum CpbsStatus cpbs_trajectory_thetas(const struct CpbsTrajectory *trajectory,
                                       double *buf,
                                       size_t len);

/**
 * Basis populations at sample `step`.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum CpbsStatus cpbs_trajectory_populations(const struct CpbsTrajectory *trajectory,
                                            size_t step,
                                            double *buf,
                                            size_t len);

/**
 * Density matrix at sample `step`, row-major, split into real and
 * imaginary parts of `dim²` doubles each.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
enum CpbsStatus cpbs_trajectory_density(const struct CpbsTrajectory *trajectory,
                                        size_t step,
                                        double *re,
                                        double *im,
                                        size_t len);

/**
 * Entanglement quantifiers at sample `step` of a full-model trajectory.
 *
 * # Safety
 * `out` must be valid or null.
 */
enum CpbsStatus cpbs_trajectory_indicators(const struct CpbsTrajectory *trajectory,
                                           size_t step,
                                           struct CpbsIndicators *out);

/**
 * Wootters concurrence at sample `step` of a two-qubit trajectory.
 *
 * # Safety
 * `out` must be valid or null.
 */
enum CpbsStatus cpbs_trajectory_concurrence(const struct CpbsTrajectory *trajectory,
                                            size_t step,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPBS_H */
