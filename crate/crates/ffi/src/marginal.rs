use crate::error::{guard, handle, slice, write_out, MjStatus};
use metocean_joint::marginals::{SemiParametricMarginal, UnivariateSample};

/// Fitted semi-parametric marginal (opaque).
pub struct MjMarginal {
    inner: SemiParametricMarginal,
}

impl MjMarginal {
    pub fn inner(&self) -> &SemiParametricMarginal {
        &self.inner
    }
}

/// Summary of a fitted marginal.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MjMarginalParams {
    pub threshold: f64,
    pub sigma: f64,
    pub xi: f64,
    pub tail_fraction: f64,
    pub events_per_year: f64,
    pub n: usize,
}

/// Fit an empirical body with a GPD tail above the `threshold_quantile`
/// sample quantile. `events_per_year` is the observation rate.
///
/// # Safety
/// `values` must be valid for `n` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_fit(
    values: *const f64,
    n: usize,
    threshold_quantile: f64,
    events_per_year: f64,
    out: *mut *mut MjMarginal,
) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let v = unsafe { slice(values, n, "values") }?;
        let s = UnivariateSample::new(v.to_vec(), "ffi")?;
        let m = SemiParametricMarginal::fit_quantile(s, threshold_quantile, events_per_year)?;
        let h = Box::into_raw(Box::new(MjMarginal { inner: m }));
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, h, "out") }.inspect_err(|_| {
            // SAFETY: h was just created by Box::into_raw and never shared.
            drop(unsafe { Box::from_raw(h) });
        })
    })
}

/// Release a marginal handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`mj_marginal_fit`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_free(h: *mut MjMarginal) {
    if !h.is_null() {
        // SAFETY: caller passes a live handle created by Box::into_raw.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_params(h: *const MjMarginal, out: *mut MjMarginalParams) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { handle(h, "marginal") }?;
        let g = m.inner.gpd();
        let p = MjMarginalParams {
            threshold: g.threshold,
            sigma: g.sigma,
            xi: g.xi,
            tail_fraction: m.inner.tail_fraction(),
            events_per_year: m.inner.events_per_year(),
            n: m.inner.sample().len(),
        };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, p, "out") }
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_to_gumbel(h: *const MjMarginal, x: f64, out: *mut f64) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { handle(h, "marginal") }?;
        let y = m.inner.to_gumbel(x)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, y, "out") }
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_from_gumbel(h: *const MjMarginal, y: f64, out: *mut f64) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { handle(h, "marginal") }?;
        let x = m.inner.from_gumbel(y)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, x, "out") }
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_marginal_return_value(h: *const MjMarginal, return_period_years: f64, out: *mut f64) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let m = unsafe { handle(h, "marginal") }?;
        let x = m.inner.return_value(return_period_years)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, x, "out") }
    })
}
