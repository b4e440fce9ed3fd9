#ifndef LMG_KRYLOV_H
#define LMG_KRYLOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LMG_INITIAL_STATE_DOWN 0

#define LMG_INITIAL_STATE_UP 1

#define LMG_INITIAL_STATE_GROUND 2

#define LMG_CHANNEL_TIME 0

#define LMG_CHANNEL_SZ 1

#define LMG_CHANNEL_COMPLEXITY 2

#define LMG_CHANNEL_IPR_KRYLOV 3

#define LMG_CHANNEL_IPR_ENERGY 4

#define LMG_CHANNEL_ENTROPY_KRYLOV 5

#define LMG_CHANNEL_ENTROPY_ENERGY 6

#define LMG_CHANNEL_LOSCHMIDT 7

#define LMG_CHANNEL_RATE 8

#define LMG_SWEEP_HF 0

#define LMG_SWEEP_CBAR_OVER_J 1

#define LMG_SWEEP_SZBAR_OVER_J 2

#define LMG_SWEEP_DCBAR_DHF 3

/*
 Status code returned by every fallible function.
 */
typedef enum LmgStatus {
  LMG_STATUS_OK = 0,
  /*
   A parameter was rejected; nothing was computed.
   */
  LMG_STATUS_INVALID_ARGUMENT = 1,
  /*
   The numerics failed (eigensolver convergence, incomplete basis).
   */
  LMG_STATUS_NUMERICAL_FAILURE = 2,
  /*
   A required pointer argument was null.
   */
  LMG_STATUS_NULL_POINTER = 3,
  /*
   The caller's buffer is shorter than the data to copy.
   */
  LMG_STATUS_BUFFER_TOO_SMALL = 4,
  /*
   An internal panic was caught at the boundary.
   */
  LMG_STATUS_PANIC = 5,
} LmgStatus;

/*
 Lanczos coefficients of one initial state.
 */
typedef struct LmgKrylov LmgKrylov;

/*
 Time-averaged order parameters over an `hf` grid.
 */
typedef struct LmgSweep LmgSweep;

/*
 Sampled observables of one quench.
 */
typedef struct LmgTimeSeries LmgTimeSeries;

/*
 Quench parameters. `hf` is ignored by `lmg_sweep`.
 */
typedef struct LmgQuenchParams {
  /*
   Number of spin-1/2 sites N (j = N/2).
   */
  size_t sites;
  double coupling;
  double h0;
  double hf;
  /*
   One of the `LMG_INITIAL_STATE_*` constants.
   */
  uint32_t initial_state;
  double breakdown_tol;
} LmgQuenchParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *lmg_version(void);

/*
 Message describing the last failure on this thread; empty after a success.
 The pointer stays valid until the next library call on the same thread.
 */
const char *lmg_last_error_message(void);

/*
 Defaults: N = 200, J = 1, h0 = 0, hf = 0, polarized-down start,
 breakdown tolerance 1e-12.
 */
struct LmgQuenchParams lmg_quench_params_default(void);

/*
 Runs a quench and samples all channels on `t = 0, dt, …, ⌊t_max/dt⌋·dt`.

 # Safety
 `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
 one pointer write. On success `*out` owns a handle to release with
 `lmg_time_series_free`.
 */
enum LmgStatus lmg_run_quench(const struct LmgQuenchParams *params,
                              double t_max,
                              double dt,
                              struct LmgTimeSeries **out);

/*
 Number of time samples; 0 for a null handle.

 # Safety
 `series` must be null or a live handle from `lmg_run_quench`.
 */
size_t lmg_time_series_len(const struct LmgTimeSeries *series);

/*
 Krylov dimension of the run; 0 for a null handle.

 # Safety
 `series` must be null or a live handle from `lmg_run_quench`.
 */
size_t lmg_time_series_krylov_dim(const struct LmgTimeSeries *series);

/*
 Copies one channel (an `LMG_CHANNEL_*` constant) into `buf`, which must
 hold at least `lmg_time_series_len` values. Rate samples with a vanishing
 echo are `+inf`.

 # Safety
 `series` must be a live handle; `buf` must be valid for `len` writes.
 */
enum LmgStatus lmg_time_series_channel(const struct LmgTimeSeries *series,
                                       uint32_t channel,
                                       double *buf,
                                       size_t len);

/*
 Releases a time-series handle. Null is a no-op.

 # Safety
 `series` must be null or a handle not yet freed.
 */
void lmg_time_series_free(struct LmgTimeSeries *series);

/*
 Lanczos tridiagonalization of the initial state under `H(hf)`.

 # Safety
 `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
 one pointer write. Release the handle with `lmg_krylov_free`.
 */
enum LmgStatus lmg_lanczos(const struct LmgQuenchParams *params, struct LmgKrylov **out);

/*
 Krylov dimension M; 0 for a null handle.

 # Safety
 `krylov` must be null or a live handle from `lmg_lanczos`.
 */
size_t lmg_krylov_dim(const struct LmgKrylov *krylov);

/*
 Copies `a_0 … a_{M−1}` and `b_0 … b_{M−1}` (with `b_0 = 0`) into buffers
 of at least M values each.

 # Safety
 `krylov` must be a live handle; `a` and `b` must be valid for `len` writes.
 */
enum LmgStatus lmg_krylov_coefficients(const struct LmgKrylov *krylov,
                                       double *a,
                                       double *b,
                                       size_t len);

/*
 Releases a Krylov handle. Null is a no-op.

 # Safety
 `krylov` must be null or a handle not yet freed.
 */
void lmg_krylov_free(struct LmgKrylov *krylov);

/*
 Sweeps `hf` over `hf_steps` uniform points in `[hf_min, hf_max]`,
 averaging over `[0, t_max]` sampled every `dt`.

 # Safety
 `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
 one pointer write. Release the handle with `lmg_sweep_free`.
 */
enum LmgStatus lmg_sweep(const struct LmgQuenchParams *params,
                         double hf_min,
                         double hf_max,
                         size_t hf_steps,
                         double t_max,
                         double dt,
                         struct LmgSweep **out);

/*
 Number of sweep points; 0 for a null handle.

 # Safety
 `sweep` must be null or a live handle from `lmg_sweep`.
 */
size_t lmg_sweep_len(const struct LmgSweep *sweep);

/*
 `hf` at the largest `|dC̄/dhf|`; NaN for a null handle.

 # Safety
 `sweep` must be null or a live handle from `lmg_sweep`.
 */
double lmg_sweep_hc_estimate(const struct LmgSweep *sweep);

/*
 Copies one sweep column (an `LMG_SWEEP_*` constant) into `buf`.

 # Safety
 `sweep` must be a live handle; `buf` must be valid for `len` writes.
 */
enum LmgStatus lmg_sweep_column(const struct LmgSweep *sweep,
                                uint32_t column,
                                double *buf,
                                size_t len);

/*
 Releases a sweep handle. Null is a no-op.

 # Safety
 `sweep` must be null or a handle not yet freed.
 */
void lmg_sweep_free(struct LmgSweep *sweep);

/*
 Ascending eigenvalues of `H(h)` for N sites into a buffer of at least N+1 values.

 # Safety
 `buf` must be valid for `len` writes.
 */
enum LmgStatus lmg_spectrum(size_t sites, double coupling, double h, double *buf, size_t len);

/*
 Closed-form `b_n = (hf/2)·√(n(N − n + 1))` for `1 ≤ n ≤ N`.

 # Safety
 `out` must be valid for one write.
 */
enum LmgStatus lmg_analytic_lanczos_b(size_t sites, double hf, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LMG_KRYLOV_H */
