//! C ABI over `dqsense`.
//!
//! Every function returns a [`DqStatus`]; results come back through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`dq_last_error`]. States are opaque heap handles owned by the caller and
//! released with [`dq_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dqsense::montecarlo::{self, McConfig};
use dqsense::schemes::{self, Network, SolverConfig};
use dqsense::{Error, GaussianState, InterferometerParams, Scheme};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Panic = 4,
}

/// Scheme selector, same order as the CLI tags.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqScheme {
    TsuDistributed = 0,
    TsuSeparable = 1,
    ClassicalDistributed = 2,
    ClassicalSeparable = 3,
    MultiClassical = 4,
    MultiSeparable = 5,
    MultiEntangled = 6,
}

impl From<DqScheme> for Scheme {
    fn from(s: DqScheme) -> Self {
        match s {
            DqScheme::TsuDistributed => Scheme::TsuDistributed,
            DqScheme::TsuSeparable => Scheme::TsuSeparable,
            DqScheme::ClassicalDistributed => Scheme::ClassicalDistributed,
            DqScheme::ClassicalSeparable => Scheme::ClassicalSeparable,
            DqScheme::MultiClassical => Scheme::MultiClassical,
            DqScheme::MultiSeparable => Scheme::MultiSeparable,
            DqScheme::MultiEntangled => Scheme::MultiEntangled,
        }
    }
}

/// Configuration of any scheme. Two-phase schemes read `gain`, `alpha_sq`,
/// `eta`, `g`; multi-phase schemes read `m` and `n`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DqParams {
    pub gain: f64,
    pub alpha_sq: f64,
    pub eta: f64,
    pub g: f64,
    pub m: usize,
    pub n: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DqOptimum {
    pub gain: f64,
    pub alpha_sq: f64,
    pub lod: f64,
    pub iterations: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DqMcResult {
    pub empirical_lod: f64,
    pub standard_error: f64,
    pub analytic_lod: f64,
    pub z_score: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Opaque Gaussian state handle.
pub struct DqState {
    inner: GaussianState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> DqStatus {
    let status = if e.is_numerical() {
        DqStatus::Numerical
    } else {
        DqStatus::InvalidArgument
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> DqStatus {
    set_error(format!("{what} is null"));
    DqStatus::NullPointer
}

fn guard(f: impl FnOnce() -> DqStatus) -> DqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            DqStatus::Panic
        }
    }
}

fn wrap<T>(r: Result<T, Error>, f: impl FnOnce(T)) -> DqStatus {
    match r {
        Ok(v) => {
            f(v);
            DqStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Allocates the `n_modes`-mode vacuum.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_vacuum(n_modes: usize, out: *mut *mut DqState) -> DqStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        wrap(GaussianState::vacuum(n_modes), |s| {
            *out = Box::into_raw(Box::new(DqState { inner: s }));
        })
    })
}

/// Copies a state into a new handle.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_state_clone(state: *const DqState, out: *mut *mut DqState) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        if out.is_null() {
            return null("out");
        }
        *out = Box::into_raw(Box::new(DqState {
            inner: (*state).inner.clone(),
        }));
        DqStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dq_state_free(state: *mut DqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn update(
    state: *mut DqState,
    op: impl FnOnce(&GaussianState) -> Result<GaussianState, Error>,
) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        let s = &mut *state;
        wrap(op(&s.inner), |next| s.inner = next)
    })
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_state_n_modes(state: *const DqState, out: *mut usize) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        if out.is_null() {
            return null("out");
        }
        *out = (*state).inner.n_modes();
        DqStatus::Ok
    })
}

/// Adds a coherent amplitude `re + i im` to one mode.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_displace(
    state: *mut DqState,
    mode: usize,
    re: f64,
    im: f64,
) -> DqStatus {
    update(state, |s| s.displace(mode, dqsense::Complex64::new(re, im)))
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_two_mode_squeeze(
    state: *mut DqState,
    mode_a: usize,
    mode_b: usize,
    gain: f64,
) -> DqStatus {
    update(state, |s| s.two_mode_squeeze(mode_a, mode_b, gain))
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_single_mode_squeeze(
    state: *mut DqState,
    mode: usize,
    r: f64,
) -> DqStatus {
    update(state, |s| s.single_mode_squeeze(mode, r))
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_phase_shift(
    state: *mut DqState,
    mode: usize,
    phi: f64,
) -> DqStatus {
    update(state, |s| s.phase_shift(mode, phi))
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_beam_splitter(
    state: *mut DqState,
    mode_a: usize,
    mode_b: usize,
    transmissivity: f64,
    psi: f64,
) -> DqStatus {
    update(state, |s| {
        s.beam_splitter(mode_a, mode_b, transmissivity, psi)
    })
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dq_state_loss(state: *mut DqState, mode: usize, eta: f64) -> DqStatus {
    update(state, |s| s.loss(mode, eta))
}

/// Splits `mode` into `ways` equal outputs. The output mode indices are
/// written to `out_modes`, which must hold at least `ways` entries.
///
/// # Safety
/// `state` must be a live handle and `out_modes` must point to `capacity`
/// writable entries.
#[no_mangle]
pub unsafe extern "C" fn dq_state_balanced_split(
    state: *mut DqState,
    mode: usize,
    ways: usize,
    out_modes: *mut usize,
    capacity: usize,
) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        if out_modes.is_null() {
            return null("out_modes");
        }
        if capacity < ways {
            return fail(Error::DimensionMismatch {
                expected: ways,
                got: capacity,
            });
        }
        let s = &mut *state;
        wrap(s.inner.balanced_split(mode, ways), |(next, modes)| {
            ptr::copy_nonoverlapping(modes.as_ptr(), out_modes, modes.len());
            s.inner = next;
        })
    })
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_state_mean_photons(
    state: *const DqState,
    mode: usize,
    out: *mut f64,
) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        if out.is_null() {
            return null("out");
        }
        wrap((*state).inner.mean_photons(mode), |v| *out = v)
    })
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_state_total_photons(state: *const DqState, out: *mut f64) -> DqStatus {
    guard(|| {
        if state.is_null() {
            return null("state");
        }
        if out.is_null() {
            return null("out");
        }
        *out = (*state).inner.total_photons();
        DqStatus::Ok
    })
}

fn network(scheme: DqScheme, p: &DqParams) -> Result<Network, Error> {
    match Scheme::from(scheme) {
        Scheme::MultiClassical => Network::multi_classical(p.m, p.n),
        Scheme::MultiSeparable => Network::multi_separable(p.m, p.n),
        Scheme::MultiEntangled => {
            Network::multi_entangled_optimal(p.m, p.n, &SolverConfig::default())
        }
        two => Network::two_phase(
            two,
            InterferometerParams::new(p.gain, p.alpha_sq, p.eta, p.g),
        ),
    }
}

/// Closed-form LOD of any scheme.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_lod(
    scheme: DqScheme,
    params: *const DqParams,
    out: *mut f64,
) -> DqStatus {
    guard(|| {
        if params.is_null() {
            return null("params");
        }
        if out.is_null() {
            return null("out");
        }
        let p = &*params;
        let s = Scheme::from(scheme);
        let r = if s.is_multi_phase() {
            schemes::multi_phase_lod(s, p.m, p.n)
        } else {
            schemes::two_phase_lod(
                s,
                &InterferometerParams::new(p.gain, p.alpha_sq, p.eta, p.g),
            )
        };
        wrap(r, |l| *out = l.delta_phi_sq)
    })
}

/// Numerically optimised entangled M-phase network under the budget `m * n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dq_optimize_entangled(m: usize, n: f64, out: *mut DqOptimum) -> DqStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        wrap(
            schemes::optimize_entangled(m, n, &SolverConfig::default()),
            |o| {
                *out = DqOptimum {
                    gain: o.gain,
                    alpha_sq: o.alpha_sq,
                    lod: o.lod,
                    iterations: o.iterations,
                }
            },
        )
    })
}

/// Range of g where the tSU distributed scheme beats its classical
/// counterpart. `*has_window` is 0 when there is none (G = 1).
///
/// # Safety
/// All out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn dq_advantage_window(
    gain: f64,
    eta: f64,
    g_lo: *mut f64,
    g_hi: *mut f64,
    has_window: *mut i32,
) -> DqStatus {
    guard(|| {
        if g_lo.is_null() || g_hi.is_null() || has_window.is_null() {
            return null("out");
        }
        wrap(schemes::advantage_g_window(gain, eta), |w| match w {
            Some((lo, hi)) => {
                *g_lo = lo;
                *g_hi = hi;
                *has_window = 1;
            }
            None => *has_window = 0,
        })
    })
}

/// Actual SNR in dB from measured signal and noise-floor powers in dBm.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dq_snr_correct(
    measured_dbm: f64,
    noise_dbm: f64,
    out: *mut f64,
) -> DqStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        wrap(
            dqsense::metrology::snr_correct(measured_dbm, noise_dbm),
            |v| *out = v,
        )
    })
}

/// Monte Carlo LOD estimate of a scheme at its operating point.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dq_mc_lod(
    scheme: DqScheme,
    params: *const DqParams,
    samples: usize,
    seed: u64,
    out: *mut DqMcResult,
) -> DqStatus {
    guard(|| {
        if params.is_null() {
            return null("params");
        }
        if out.is_null() {
            return null("out");
        }
        let r = network(scheme, &*params).and_then(|net| {
            McConfig::new(samples, seed).and_then(|c| montecarlo::mc_lod(&net, &c))
        });
        wrap(r, |r| {
            *out = DqMcResult {
                empirical_lod: r.empirical_lod,
                standard_error: r.standard_error,
                analytic_lod: r.analytic_lod,
                z_score: r.z_score,
                samples: r.samples,
                seed: r.seed,
            }
        })
    })
}
