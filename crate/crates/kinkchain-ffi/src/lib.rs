//! C ABI for the kinkchain engines: opaque handles, integer error codes,
//! out-parameters. The header is generated into include/kinkchain.h at
//! build time.
//!
//! Every function returns a `KcStatus`; handles created by `*_new` calls
//! must be released with the matching `*_free`. Passing NULL where a
//! handle is expected returns `KC_NULL_POINTER` instead of crashing.

use std::panic::{catch_unwind, AssertUnwindSafe};

use kinkchain::exact::DEFAULT_DENSE_LIMIT;
use kinkchain::model::ModelParams;
use kinkchain::twokink::{renyi2_at_cut, TwoKinkAmplitudes, TwoKinkPropagator};
use kinkchain::Error;

/// Status codes mirrored from the library's error enum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    KcOk = 0,
    KcOutOfRange = 1,
    KcCapacity = 2,
    KcRegime = 3,
    KcNumerical = 4,
    KcInvariant = 5,
    KcResource = 6,
    KcConfig = 7,
    KcIo = 8,
    KcNullPointer = 100,
    KcPanic = 101,
}

fn status_of(err: &Error) -> KcStatus {
    match err {
        Error::OutOfRange(_) => KcStatus::KcOutOfRange,
        Error::Capacity(_) => KcStatus::KcCapacity,
        Error::Regime(_) => KcStatus::KcRegime,
        Error::Numerical(_) => KcStatus::KcNumerical,
        Error::Invariant(_) => KcStatus::KcInvariant,
        Error::Resource(_) => KcStatus::KcResource,
        Error::Config(_) => KcStatus::KcConfig,
        Error::Io(_) => KcStatus::KcIo,
    }
}

/// Opaque model-parameter handle.
pub struct KcParams {
    inner: ModelParams,
}

/// Opaque two-kink propagator handle (owns the eigendecomposition).
pub struct KcTwokinkPropagator {
    inner: TwoKinkPropagator,
}

/// Opaque evolved two-kink state handle.
pub struct KcTwokinkState {
    inner: TwoKinkAmplitudes,
}

fn guarded<F: FnOnce() -> KcStatus>(f: F) -> KcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(KcStatus::KcPanic)
}

/// Create model parameters; writes the handle into `out`.
///
/// # Safety
/// `out` must be a valid pointer to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn kc_params_new(
    j0: f64,
    g: f64,
    h: f64,
    j3: f64,
    length: usize,
    out: *mut *mut KcParams,
) -> KcStatus {
    if out.is_null() {
        return KcStatus::KcNullPointer;
    }
    guarded(|| match ModelParams::new(j0, g, h, j3, length) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(KcParams { inner }));
            KcStatus::KcOk
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `params` must come from `kc_params_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kc_params_free(params: *mut KcParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Largest chain length accepted by the dense reference engine.
#[no_mangle]
pub extern "C" fn kc_dense_limit() -> usize {
    DEFAULT_DENSE_LIMIT
}

/// True iff the parameters conserve kink number (j3 == -g).
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kc_params_kink_conserving(params: *const KcParams) -> bool {
    !params.is_null() && (*params).inner.kink_conserving()
}

/// Build the two-kink propagator (diagonalizes the subspace Hamiltonian).
///
/// # Safety
/// `params` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_propagator_new(
    params: *const KcParams,
    out: *mut *mut KcTwokinkPropagator,
) -> KcStatus {
    if params.is_null() || out.is_null() {
        return KcStatus::KcNullPointer;
    }
    guarded(|| match TwoKinkPropagator::new(&(*params).inner) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(KcTwokinkPropagator { inner }));
            KcStatus::KcOk
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `prop` must come from `kc_twokink_propagator_new`; free once.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_propagator_free(prop: *mut KcTwokinkPropagator) {
    if !prop.is_null() {
        drop(Box::from_raw(prop));
    }
}

/// Evolve the domain-wall state |j, n> to time t.
///
/// # Safety
/// `prop` must be a live handle; `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_evolve(
    prop: *const KcTwokinkPropagator,
    j: usize,
    n: usize,
    t: f64,
    out: *mut *mut KcTwokinkState,
) -> KcStatus {
    if prop.is_null() || out.is_null() {
        return KcStatus::KcNullPointer;
    }
    guarded(|| {
        let p = &(*prop).inner;
        match TwoKinkAmplitudes::from_domain_wall(p.basis().length(), j, n) {
            Ok(psi0) => {
                let state = p.evolve(&psi0, t);
                *out = Box::into_raw(Box::new(KcTwokinkState { inner: state }));
                KcStatus::KcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `state` must come from `kc_twokink_evolve`; free once.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_state_free(state: *mut KcTwokinkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn read_scalar<F>(out: *mut f64, f: F) -> KcStatus
where
    F: FnOnce() -> kinkchain::Result<f64>,
{
    if out.is_null() {
        return KcStatus::KcNullPointer;
    }
    guarded(|| match f() {
        Ok(v) => {
            *out = v;
            KcStatus::KcOk
        }
        Err(e) => status_of(&e),
    })
}

/// Renyi-2 entropy of sites 1..=cut; writes into `out`.
///
/// # Safety
/// `state` must be a live handle; `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_renyi2(
    state: *const KcTwokinkState,
    cut: usize,
    out: *mut f64,
) -> KcStatus {
    if state.is_null() {
        return KcStatus::KcNullPointer;
    }
    read_scalar(out, || renyi2_at_cut(&(*state).inner, cut))
}

/// Kink density on link (i, i+1); writes into `out`.
///
/// # Safety
/// `state` must be a live handle; `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_kink_density(
    state: *const KcTwokinkState,
    link: usize,
    out: *mut f64,
) -> KcStatus {
    if state.is_null() {
        return KcStatus::KcNullPointer;
    }
    read_scalar(out, || (*state).inner.kink_density(link))
}

/// <sigma^z_site>; writes into `out`.
///
/// # Safety
/// `state` must be a live handle; `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn kc_twokink_sigma_z(
    state: *const KcTwokinkState,
    site: usize,
    out: *mut f64,
) -> KcStatus {
    if state.is_null() {
        return KcStatus::KcNullPointer;
    }
    read_scalar(out, || (*state).inner.sigma_z(site))
}
