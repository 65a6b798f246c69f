use std::rc::Rc;

use super::linear::{dispersion, nonlinear_spectrum, phases};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{Complex64, Field, Grid};

/// Integrating-factor (Lawson) RK4 in the interaction picture
/// `v = U(-t) u`, which removes the dispersive term exactly.
///
/// Phase tables are cached for the last few step sizes, which covers the
/// `h`, `h/2` pattern of step doubling.
pub(crate) struct IfRk4 {
    grid: Grid,
    params: ModelParams,
    coeff: f64,
    omega: Vec<f64>,
    cache: Vec<(f64, Rc<[Complex64]>)>,
}

const PHASE_CACHE: usize = 4;

impl IfRk4 {
    pub(crate) fn new(grid: &Grid, params: &ModelParams, coeff: f64) -> Self {
        Self {
            grid: grid.clone(),
            params: *params,
            coeff,
            omega: dispersion(grid, params.beta()),
            cache: Vec::with_capacity(PHASE_CACHE),
        }
    }

    fn table(&mut self, t: f64) -> Rc<[Complex64]> {
        if let Some((_, e)) = self.cache.iter().find(|(tc, _)| *tc == t) {
            return Rc::clone(e);
        }
        let e: Rc<[Complex64]> = phases(&self.omega, t).into();
        if self.cache.len() == PHASE_CACHE {
            self.cache.remove(0);
        }
        self.cache.push((t, Rc::clone(&e)));
        e
    }

    fn rhs(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        nonlinear_spectrum(&self.grid, u, &self.params, self.coeff)
    }

    /// Advances a spectrum by `h`.
    pub(crate) fn step(&mut self, u: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
        let e2 = self.table(0.5 * h);
        let e = self.table(h);
        let hh = 0.5 * h;
        let k1 = self.rhs(u)?;
        let a: Vec<Complex64> = (0..u.len()).map(|j| e2[j] * (u[j] + k1[j] * hh)).collect();
        let k2 = self.rhs(&a)?;
        let b: Vec<Complex64> = (0..u.len()).map(|j| e2[j] * u[j] + k2[j] * hh).collect();
        let k3 = self.rhs(&b)?;
        let c: Vec<Complex64> = (0..u.len())
            .map(|j| e[j] * u[j] + e2[j] * k3[j] * h)
            .collect();
        let k4 = self.rhs(&c)?;
        let sixth = h / 6.0;
        Ok((0..u.len())
            .map(|j| e[j] * u[j] + (e[j] * k1[j] + e2[j] * (k2[j] + k3[j]) * 2.0 + k4[j]) * sixth)
            .collect())
    }
}

pub(crate) fn all_finite(spec: &[Complex64]) -> bool {
    spec.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// One IF-RK4 step of `u_t = D^beta u_x - (u^{k+1})_x`.
pub fn step_if_rk4(u: &Field, dt: f64, params: &ModelParams) -> Result<Field> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInput(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let mut stepper = IfRk4::new(u.grid(), params, 1.0);
    let out = stepper.step(u.spectrum(), dt)?;
    if !all_finite(&out) {
        return Err(Error::Instability {
            t_last_good: 0.0,
            reason: "non-finite state after one step".into(),
        });
    }
    Field::from_spectrum(u.grid(), &out).map_err(|e| Error::Instability {
        t_last_good: 0.0,
        reason: e.to_string(),
    })
}
