use crate::error::{guard, invalid, slice, slice_mut, write_out, MjStatus};
use metocean_joint::form::{environmental_contour, failure_probability, form_search, LimitState};
use metocean_joint::models::{hn_rosenblatt_chain, HaverNutzenModel, MuCoeffs, VarCoeffs, WeibullParams};
use std::ffi::c_void;

/// Limit-state callback in standard normal space: `g(u[0..dim], user_data)`.
/// Failure is `g ≤ 0`.
pub type MjLimitStateFn = Option<unsafe extern "C" fn(u: *const f64, dim: usize, user_data: *mut c_void) -> f64>;

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MjFormResult {
    pub beta: f64,
    pub p_f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Coefficients of the Weibull Hs / lognormal Tp model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MjHaverNutzen {
    pub weibull_alpha: f64,
    pub weibull_beta: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl From<MjHaverNutzen> for HaverNutzenModel {
    fn from(m: MjHaverNutzen) -> Self {
        HaverNutzenModel {
            weibull: WeibullParams { alpha: m.weibull_alpha, beta: m.weibull_beta },
            mu: MuCoeffs { a1: m.a1, a2: m.a2, a3: m.a3 },
            var: VarCoeffs { b1: m.b1, b2: m.b2, b3: m.b3 },
        }
    }
}

struct Callback {
    f: unsafe extern "C" fn(*const f64, usize, *mut c_void) -> f64,
    user: *mut c_void,
}

impl Callback {
    fn call(&self, u: &[f64]) -> f64 {
        // SAFETY: the callback reads exactly `u.len()` values.
        unsafe { (self.f)(u.as_ptr(), u.len(), self.user) }
    }
}

// SAFETY: the search calls the callback from the calling thread only; the
// caller owns the thread-safety of `user_data`.
unsafe impl Send for Callback {}
// SAFETY: as above.
unsafe impl Sync for Callback {}

/// `p_F = 1 − Φ(β)` for `β ≥ 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_failure_probability(beta: f64, out: *mut f64) -> MjStatus {
    guard(|| {
        let p = failure_probability(beta)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, p, "out") }
    })
}

/// FORM search in standard normal space from `start` (NULL means the origin).
/// The design point is written to `out_u` (`dim` values).
///
/// # Safety
/// `g` must be callable with `dim` readable doubles; `start` must be null or
/// valid for `dim` reads; `out_u` valid for `dim` writes; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mj_form_search(
    g: MjLimitStateFn,
    user_data: *mut c_void,
    dim: usize,
    start: *const f64,
    out_u: *mut f64,
    out: *mut MjFormResult,
) -> MjStatus {
    guard(|| {
        let f = g.ok_or_else(|| invalid("limit-state callback is NULL"))?;
        let cb = Callback { f, user: user_data };
        let start = if start.is_null() {
            vec![0.0; dim]
        } else {
            // SAFETY: forwarded caller contract.
            unsafe { slice(start, dim, "start") }?.to_vec()
        };
        // SAFETY: forwarded caller contract.
        let ou = unsafe { slice_mut(out_u, dim, "out_u") }?;
        let ls = LimitState::standard(dim, move |u| cb.call(u));
        let r = form_search(&ls, None, &start)?;
        ou.copy_from_slice(&r.u_star);
        let res = MjFormResult { beta: r.beta, p_f: r.p_f, iterations: r.iterations, converged: r.converged };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, res, "out") }
    })
}

/// Inverse-FORM contour of the Hs/Tp model: `n_points` points at angles
/// `360·i/n_points` degrees written to `out_hs`/`out_tp`, and `β` to `out_beta`.
///
/// # Safety
/// `model` readable; `out_hs`, `out_tp` valid for `n_points` writes;
/// `out_beta` null or writable.
#[no_mangle]
pub unsafe extern "C" fn mj_hn_contour(
    model: *const MjHaverNutzen,
    return_period_years: f64,
    states_per_year: f64,
    n_points: usize,
    out_hs: *mut f64,
    out_tp: *mut f64,
    out_beta: *mut f64,
) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = *unsafe { crate::error::handle(model, "model") }?;
        // SAFETY: forwarded caller contract.
        let (hs, tp) = unsafe { (slice_mut(out_hs, n_points, "out_hs")?, slice_mut(out_tp, n_points, "out_tp")?) };
        let chain = hn_rosenblatt_chain(&m.into())?;
        let c = environmental_contour(&chain, return_period_years, states_per_year, n_points)?;
        for (i, p) in c.points.iter().enumerate() {
            hs[i] = p[0];
            tp[i] = p[1];
        }
        if !out_beta.is_null() {
            // SAFETY: non-null and writable per the caller contract.
            unsafe { out_beta.write(c.beta) };
        }
        Ok(())
    })
}
