//! C ABI over `lmg-krylov`.
//!
//! Results live behind opaque handles that the caller releases with the
//! matching `*_free` function. Every fallible call returns an `LmgStatus`;
//! on failure `lmg_last_error_message` describes the error for the calling
//! thread. Enumerated inputs (initial state, channel, column) are plain
//! `uint32_t` constants so out-of-range values are rejected, not undefined.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lmg_krylov::analysis::uniform_grid;
use lmg_krylov::{
    analytic_lanczos_b, build_hamiltonian, diagonalize, initial_state, lanczos, sweep_hf, Channel,
    Error, InitialState, KrylovDecomposition, ModelParams, QuenchSetup, QuenchSpec, SpinSector,
    SweepResult, SweepSpec, TimeGrid, TimeSeries, DEFAULT_BREAKDOWN_TOL,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmgStatus {
    Ok = 0,
    /// A parameter was rejected; nothing was computed.
    InvalidArgument = 1,
    /// The numerics failed (eigensolver convergence, incomplete basis).
    NumericalFailure = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// The caller's buffer is shorter than the data to copy.
    BufferTooSmall = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

pub const LMG_INITIAL_STATE_DOWN: u32 = 0;
pub const LMG_INITIAL_STATE_UP: u32 = 1;
pub const LMG_INITIAL_STATE_GROUND: u32 = 2;

pub const LMG_CHANNEL_TIME: u32 = 0;
pub const LMG_CHANNEL_SZ: u32 = 1;
pub const LMG_CHANNEL_COMPLEXITY: u32 = 2;
pub const LMG_CHANNEL_IPR_KRYLOV: u32 = 3;
pub const LMG_CHANNEL_IPR_ENERGY: u32 = 4;
pub const LMG_CHANNEL_ENTROPY_KRYLOV: u32 = 5;
pub const LMG_CHANNEL_ENTROPY_ENERGY: u32 = 6;
pub const LMG_CHANNEL_LOSCHMIDT: u32 = 7;
pub const LMG_CHANNEL_RATE: u32 = 8;

pub const LMG_SWEEP_HF: u32 = 0;
pub const LMG_SWEEP_CBAR_OVER_J: u32 = 1;
pub const LMG_SWEEP_SZBAR_OVER_J: u32 = 2;
pub const LMG_SWEEP_DCBAR_DHF: u32 = 3;

/// Quench parameters. `hf` is ignored by `lmg_sweep`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgQuenchParams {
    /// Number of spin-1/2 sites N (j = N/2).
    pub sites: usize,
    pub coupling: f64,
    pub h0: f64,
    pub hf: f64,
    /// One of the `LMG_INITIAL_STATE_*` constants.
    pub initial_state: u32,
    pub breakdown_tol: f64,
}

/// Sampled observables of one quench.
pub struct LmgTimeSeries(TimeSeries);

/// Lanczos coefficients of one initial state.
pub struct LmgKrylov(KrylovDecomposition);

/// Time-averaged order parameters over an `hf` grid.
pub struct LmgSweep(SweepResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn fail(status: LmgStatus, msg: impl Into<String>) -> LmgStatus {
    set_last_error(msg);
    status
}

fn status_of(err: &Error) -> LmgStatus {
    if err.is_numerical() {
        LmgStatus::NumericalFailure
    } else {
        LmgStatus::InvalidArgument
    }
}

/// Runs `body` with panics converted into `LmgStatus::Panic`.
fn guarded(body: impl FnOnce() -> Result<(), (LmgStatus, String)>) -> LmgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            LmgStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(LmgStatus::Panic, "internal panic"),
    }
}

fn from_core(err: Error) -> (LmgStatus, String) {
    (status_of(&err), err.to_string())
}

fn decode_initial_state(code: u32) -> Result<InitialState, (LmgStatus, String)> {
    match code {
        LMG_INITIAL_STATE_DOWN => Ok(InitialState::Down),
        LMG_INITIAL_STATE_UP => Ok(InitialState::Up),
        LMG_INITIAL_STATE_GROUND => Ok(InitialState::Ground),
        other => Err((
            LmgStatus::InvalidArgument,
            format!("unknown initial state code {other}"),
        )),
    }
}

fn decode_quench(
    params: &LmgQuenchParams,
) -> Result<(SpinSector, QuenchSpec), (LmgStatus, String)> {
    let sector = SpinSector::new(params.sites).map_err(from_core)?;
    let quench = QuenchSpec::new(
        params.coupling,
        params.h0,
        params.hf,
        decode_initial_state(params.initial_state)?,
    )
    .map_err(from_core)?;
    Ok((sector, quench))
}

/// Copies `src` into a caller buffer of `len` doubles.
///
/// # Safety
/// `dst` must be valid for `len` writes.
unsafe fn copy_out(src: &[f64], dst: *mut f64, len: usize) -> Result<(), (LmgStatus, String)> {
    if dst.is_null() {
        return Err((LmgStatus::NullPointer, "output buffer is null".into()));
    }
    if len < src.len() {
        return Err((
            LmgStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} required", src.len()),
        ));
    }
    // SAFETY: dst is non-null and valid for len >= src.len() writes per caller contract.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len()) };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lmg_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => c"unknown",
        };
    VERSION.as_ptr()
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn lmg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Defaults: N = 200, J = 1, h0 = 0, hf = 0, polarized-down start,
/// breakdown tolerance 1e-12.
#[no_mangle]
pub extern "C" fn lmg_quench_params_default() -> LmgQuenchParams {
    LmgQuenchParams {
        sites: 200,
        coupling: 1.0,
        h0: 0.0,
        hf: 0.0,
        initial_state: LMG_INITIAL_STATE_DOWN,
        breakdown_tol: DEFAULT_BREAKDOWN_TOL,
    }
}

/// Runs a quench and samples all channels on `t = 0, dt, …, ⌊t_max/dt⌋·dt`.
///
/// # Safety
/// `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
/// one pointer write. On success `*out` owns a handle to release with
/// `lmg_time_series_free`.
#[no_mangle]
pub unsafe extern "C" fn lmg_run_quench(
    params: *const LmgQuenchParams,
    t_max: f64,
    dt: f64,
    out: *mut *mut LmgTimeSeries,
) -> LmgStatus {
    guarded(|| {
        if params.is_null() || out.is_null() {
            return Err((
                LmgStatus::NullPointer,
                "params and out must be non-null".into(),
            ));
        }
        // SAFETY: checked non-null; caller guarantees validity.
        let params = unsafe { &*params };
        let (sector, quench) = decode_quench(params)?;
        let grid = TimeGrid::new(t_max, dt).map_err(from_core)?;
        let series = QuenchSetup::new(sector, quench, params.breakdown_tol)
            .and_then(|setup| setup.run(grid))
            .map_err(from_core)?;
        // SAFETY: out checked non-null.
        unsafe { *out = Box::into_raw(Box::new(LmgTimeSeries(series))) };
        Ok(())
    })
}

/// Number of time samples; 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle from `lmg_run_quench`.
#[no_mangle]
pub unsafe extern "C" fn lmg_time_series_len(series: *const LmgTimeSeries) -> usize {
    // SAFETY: caller contract.
    unsafe { series.as_ref() }.map_or(0, |s| s.0.len())
}

/// Krylov dimension of the run; 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle from `lmg_run_quench`.
#[no_mangle]
pub unsafe extern "C" fn lmg_time_series_krylov_dim(series: *const LmgTimeSeries) -> usize {
    // SAFETY: caller contract.
    unsafe { series.as_ref() }.map_or(0, |s| s.0.krylov_dim)
}

/// Copies one channel (an `LMG_CHANNEL_*` constant) into `buf`, which must
/// hold at least `lmg_time_series_len` values. Rate samples with a vanishing
/// echo are `+inf`.
///
/// # Safety
/// `series` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lmg_time_series_channel(
    series: *const LmgTimeSeries,
    channel: u32,
    buf: *mut f64,
    len: usize,
) -> LmgStatus {
    guarded(|| {
        // SAFETY: caller contract.
        let series = unsafe { series.as_ref() }
            .ok_or((LmgStatus::NullPointer, "series handle is null".to_string()))?;
        let ts = &series.0;
        let data = match channel {
            LMG_CHANNEL_TIME => &ts.times[..],
            LMG_CHANNEL_SZ => ts.channel(Channel::Sz),
            LMG_CHANNEL_COMPLEXITY => ts.channel(Channel::Complexity),
            LMG_CHANNEL_IPR_KRYLOV => ts.channel(Channel::IprKrylov),
            LMG_CHANNEL_IPR_ENERGY => ts.channel(Channel::IprEnergy),
            LMG_CHANNEL_ENTROPY_KRYLOV => ts.channel(Channel::EntropyKrylov),
            LMG_CHANNEL_ENTROPY_ENERGY => ts.channel(Channel::EntropyEnergy),
            LMG_CHANNEL_LOSCHMIDT => ts.channel(Channel::Loschmidt),
            LMG_CHANNEL_RATE => ts.channel(Channel::Rate),
            other => {
                return Err((
                    LmgStatus::InvalidArgument,
                    format!("unknown channel code {other}"),
                ))
            }
        };
        // SAFETY: caller contract on buf.
        unsafe { copy_out(data, buf, len) }
    })
}

/// Releases a time-series handle. Null is a no-op.
///
/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lmg_time_series_free(series: *mut LmgTimeSeries) {
    if !series.is_null() {
        // SAFETY: handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Lanczos tridiagonalization of the initial state under `H(hf)`.
///
/// # Safety
/// `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
/// one pointer write. Release the handle with `lmg_krylov_free`.
#[no_mangle]
pub unsafe extern "C" fn lmg_lanczos(
    params: *const LmgQuenchParams,
    out: *mut *mut LmgKrylov,
) -> LmgStatus {
    guarded(|| {
        if params.is_null() || out.is_null() {
            return Err((
                LmgStatus::NullPointer,
                "params and out must be non-null".into(),
            ));
        }
        // SAFETY: checked non-null.
        let params = unsafe { &*params };
        let (sector, quench) = decode_quench(params)?;
        let psi0 = initial_state(sector, &quench, None).map_err(from_core)?;
        let h = build_hamiltonian(sector, quench.fin);
        let krylov = lanczos(&h, &psi0, params.breakdown_tol).map_err(from_core)?;
        // SAFETY: out checked non-null.
        unsafe { *out = Box::into_raw(Box::new(LmgKrylov(krylov))) };
        Ok(())
    })
}

/// Krylov dimension M; 0 for a null handle.
///
/// # Safety
/// `krylov` must be null or a live handle from `lmg_lanczos`.
#[no_mangle]
pub unsafe extern "C" fn lmg_krylov_dim(krylov: *const LmgKrylov) -> usize {
    // SAFETY: caller contract.
    unsafe { krylov.as_ref() }.map_or(0, |k| k.0.dim())
}

/// Copies `a_0 … a_{M−1}` and `b_0 … b_{M−1}` (with `b_0 = 0`) into buffers
/// of at least M values each.
///
/// # Safety
/// `krylov` must be a live handle; `a` and `b` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lmg_krylov_coefficients(
    krylov: *const LmgKrylov,
    a: *mut f64,
    b: *mut f64,
    len: usize,
) -> LmgStatus {
    guarded(|| {
        // SAFETY: caller contract.
        let k = unsafe { krylov.as_ref() }
            .ok_or((LmgStatus::NullPointer, "krylov handle is null".to_string()))?;
        // SAFETY: caller contract on a and b.
        unsafe {
            copy_out(k.0.a(), a, len)?;
            copy_out(k.0.b(), b, len)
        }
    })
}

/// Releases a Krylov handle. Null is a no-op.
///
/// # Safety
/// `krylov` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lmg_krylov_free(krylov: *mut LmgKrylov) {
    if !krylov.is_null() {
        // SAFETY: handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(krylov) });
    }
}

/// Sweeps `hf` over `hf_steps` uniform points in `[hf_min, hf_max]`,
/// averaging over `[0, t_max]` sampled every `dt`.
///
/// # Safety
/// `params` must point to a valid `LmgQuenchParams`; `out` must be valid for
/// one pointer write. Release the handle with `lmg_sweep_free`.
#[no_mangle]
pub unsafe extern "C" fn lmg_sweep(
    params: *const LmgQuenchParams,
    hf_min: f64,
    hf_max: f64,
    hf_steps: usize,
    t_max: f64,
    dt: f64,
    out: *mut *mut LmgSweep,
) -> LmgStatus {
    guarded(|| {
        if params.is_null() || out.is_null() {
            return Err((
                LmgStatus::NullPointer,
                "params and out must be non-null".into(),
            ));
        }
        // SAFETY: checked non-null.
        let params = unsafe { &*params };
        let sector = SpinSector::new(params.sites).map_err(from_core)?;
        let grid = TimeGrid::new(t_max, dt).map_err(from_core)?;
        let spec = SweepSpec {
            coupling: params.coupling,
            h0: params.h0,
            initial_state: decode_initial_state(params.initial_state)?,
            grid,
            window: t_max,
            breakdown_tol: params.breakdown_tol,
        };
        let hf_grid = uniform_grid(hf_min, hf_max, hf_steps).map_err(from_core)?;
        let result = sweep_hf(sector, &spec, &hf_grid).map_err(from_core)?;
        // SAFETY: out checked non-null.
        unsafe { *out = Box::into_raw(Box::new(LmgSweep(result))) };
        Ok(())
    })
}

/// Number of sweep points; 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle from `lmg_sweep`.
#[no_mangle]
pub unsafe extern "C" fn lmg_sweep_len(sweep: *const LmgSweep) -> usize {
    // SAFETY: caller contract.
    unsafe { sweep.as_ref() }.map_or(0, |s| s.0.hf_grid.len())
}

/// `hf` at the largest `|dC̄/dhf|`; NaN for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle from `lmg_sweep`.
#[no_mangle]
pub unsafe extern "C" fn lmg_sweep_hc_estimate(sweep: *const LmgSweep) -> f64 {
    // SAFETY: caller contract.
    unsafe { sweep.as_ref() }.map_or(f64::NAN, |s| s.0.hc_estimate)
}

/// Copies one sweep column (an `LMG_SWEEP_*` constant) into `buf`.
///
/// # Safety
/// `sweep` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lmg_sweep_column(
    sweep: *const LmgSweep,
    column: u32,
    buf: *mut f64,
    len: usize,
) -> LmgStatus {
    guarded(|| {
        // SAFETY: caller contract.
        let s = unsafe { sweep.as_ref() }
            .ok_or((LmgStatus::NullPointer, "sweep handle is null".to_string()))?;
        let owned;
        let data: &[f64] = match column {
            LMG_SWEEP_HF => &s.0.hf_grid,
            LMG_SWEEP_CBAR_OVER_J => &s.0.cbar_over_j,
            LMG_SWEEP_SZBAR_OVER_J => {
                owned = s.0.szbar_over_j();
                &owned
            }
            LMG_SWEEP_DCBAR_DHF => &s.0.dcbar_dhf,
            other => {
                return Err((
                    LmgStatus::InvalidArgument,
                    format!("unknown sweep column {other}"),
                ))
            }
        };
        // SAFETY: caller contract on buf.
        unsafe { copy_out(data, buf, len) }
    })
}

/// Releases a sweep handle. Null is a no-op.
///
/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lmg_sweep_free(sweep: *mut LmgSweep) {
    if !sweep.is_null() {
        // SAFETY: handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(sweep) });
    }
}

/// Ascending eigenvalues of `H(h)` for N sites into a buffer of at least N+1 values.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lmg_spectrum(
    sites: usize,
    coupling: f64,
    h: f64,
    buf: *mut f64,
    len: usize,
) -> LmgStatus {
    guarded(|| {
        let sector = SpinSector::new(sites).map_err(from_core)?;
        let params = ModelParams::new(coupling, h).map_err(from_core)?;
        let spec = diagonalize(&build_hamiltonian(sector, params)).map_err(from_core)?;
        // SAFETY: caller contract on buf.
        unsafe { copy_out(&spec.eigenvalues, buf, len) }
    })
}

/// Closed-form `b_n = (hf/2)·√(n(N − n + 1))` for `1 ≤ n ≤ N`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lmg_analytic_lanczos_b(
    sites: usize,
    hf: f64,
    n: usize,
    out: *mut f64,
) -> LmgStatus {
    guarded(|| {
        if out.is_null() {
            return Err((LmgStatus::NullPointer, "out is null".into()));
        }
        let sector = SpinSector::new(sites).map_err(from_core)?;
        let b = analytic_lanczos_b(sector, hf, n).map_err(from_core)?;
        // SAFETY: checked non-null.
        unsafe { *out = b };
        Ok(())
    })
}
