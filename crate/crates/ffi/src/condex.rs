use crate::error::{guard, handle, invalid, slice, slice_mut, write_out, MjStatus};
use metocean_joint::condex::{fit_ht, simulate_conditional_gumbel, GumbelPairSet, HtFit};

/// Fitted conditional extremes model (opaque).
pub struct MjHtFit {
    inner: HtFit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MjHtParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub threshold_u: f64,
    pub n_residuals: usize,
}

/// Fit `Y | X = x ~ αx + x^β Z` to Gumbel-scale pairs with `x > threshold_u`.
///
/// # Safety
/// `x` and `y` must be valid for `n` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_ht_fit(
    x_gumbel: *const f64,
    y_gumbel: *const f64,
    n: usize,
    threshold_u: f64,
    out: *mut *mut MjHtFit,
) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (x, y) = unsafe { (slice(x_gumbel, n, "x_gumbel")?, slice(y_gumbel, n, "y_gumbel")?) };
        let pairs = GumbelPairSet::new(x.to_vec(), y.to_vec())?;
        let fit = fit_ht(&pairs, threshold_u)?;
        let h = Box::into_raw(Box::new(MjHtFit { inner: fit }));
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, h, "out") }.inspect_err(|_| {
            // SAFETY: h was just created by Box::into_raw and never shared.
            drop(unsafe { Box::from_raw(h) });
        })
    })
}

/// Release a fit handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`mj_ht_fit`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mj_ht_free(h: *mut MjHtFit) {
    if !h.is_null() {
        // SAFETY: caller passes a live handle created by Box::into_raw.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mj_ht_params(h: *const MjHtFit, out: *mut MjHtParams) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let f = &unsafe { handle(h, "fit") }?.inner;
        let p = MjHtParams {
            alpha: f.alpha,
            beta: f.beta,
            mu: f.mu,
            sigma: f.sigma,
            threshold_u: f.threshold_u,
            n_residuals: f.residuals.len(),
        };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, p, "out") }
    })
}

/// Simulate `n` Gumbel-scale pairs with `x > x_min_gumbel` into `out_x`/`out_y`.
///
/// # Safety
/// `h` must be a live handle; `out_x` and `out_y` must be valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn mj_ht_simulate(
    h: *const MjHtFit,
    n: usize,
    x_min_gumbel: f64,
    seed: u64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> MjStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let f = &unsafe { handle(h, "fit") }?.inner;
        // SAFETY: forwarded caller contract.
        let (ox, oy) = unsafe { (slice_mut(out_x, n, "out_x")?, slice_mut(out_y, n, "out_y")?) };
        if std::ptr::eq(ox.as_ptr(), oy.as_ptr()) && n > 0 {
            return Err(invalid("out_x and out_y must not alias"));
        }
        let sims = simulate_conditional_gumbel(f, n, x_min_gumbel, seed)?;
        for (i, (x, y)) in sims.into_iter().enumerate() {
            ox[i] = x;
            oy[i] = y;
        }
        Ok(())
    })
}
