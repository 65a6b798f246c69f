use std::cell::RefCell;
use std::sync::{Arc, LazyLock, Mutex};

use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

// Plans are immutable and `Send + Sync`; only planning itself is serialized.
static PLANNER: LazyLock<Mutex<FftPlanner<f64>>> = LazyLock::new(|| Mutex::new(FftPlanner::new()));

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = PLANNER.lock().unwrap_or_else(|e| e.into_inner());
    if forward {
        planner.plan_fft_forward(len)
    } else {
        planner.plan_fft_inverse(len)
    }
}

/// Unnormalized forward transform in place.
pub(crate) fn forward_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

/// Unnormalized inverse transform in place (no `1/n`).
pub(crate) fn inverse_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

type RealPlans = (Arc<dyn RealToComplex<f64>>, Arc<dyn ComplexToReal<f64>>);

struct RealCache {
    planner: RealFftPlanner<f64>,
    len: usize,
    plans: Option<RealPlans>,
    scratch: Vec<Complex64>,
}

thread_local! {
    static REAL: RefCell<RealCache> = RefCell::new(RealCache {
        planner: RealFftPlanner::new(),
        len: 0,
        plans: None,
        scratch: Vec::new(),
    });
}

/// Runs `f` with cached real transforms of length `len` and a scratch buffer
/// large enough for either direction.
pub(crate) fn with_real_plans<R>(
    len: usize,
    f: impl FnOnce(&dyn RealToComplex<f64>, &dyn ComplexToReal<f64>, &mut [Complex64]) -> R,
) -> R {
    REAL.with(|cell| {
        let cache = &mut *cell.borrow_mut();
        if cache.len != len || cache.plans.is_none() {
            let r2c = cache.planner.plan_fft_forward(len);
            let c2r = cache.planner.plan_fft_inverse(len);
            let need = r2c.get_scratch_len().max(c2r.get_scratch_len());
            cache.scratch.resize(need, Complex64::new(0.0, 0.0));
            cache.plans = Some((r2c, c2r));
            cache.len = len;
        }
        let (r2c, c2r) = cache.plans.as_ref().expect("plans just built");
        f(r2c.as_ref(), c2r.as_ref(), &mut cache.scratch)
    })
}
