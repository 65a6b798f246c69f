use crate::error::Result;
use crate::params::ModelParams;
use crate::spectral::{power_spectrum, Complex64, Field, Grid, MAX_PADDED_POINTS};

/// Dispersion relation `omega(xi) = |xi|^beta xi` of `u_t = D^beta u_x`, so
/// that `U(t)` multiplies mode `xi` by `exp(i t omega)`. The Nyquist mode is
/// given `omega = 0`, matching the odd-multiplier convention for `d/dx`.
pub(crate) fn dispersion(grid: &Grid, beta: f64) -> Vec<f64> {
    let nyq = grid.nyquist_index();
    grid.wavenumbers()
        .iter()
        .enumerate()
        .map(|(j, &xi)| {
            if j == nyq {
                0.0
            } else {
                xi.abs().powf(beta) * xi
            }
        })
        .collect()
}

pub(crate) fn phases(omega: &[f64], t: f64) -> Vec<Complex64> {
    omega
        .iter()
        .map(|w| Complex64::from_polar(1.0, w * t))
        .collect()
}

pub(crate) fn rotate(spectrum: &[Complex64], phase: &[Complex64]) -> Vec<Complex64> {
    spectrum.iter().zip(phase).map(|(a, b)| a * b).collect()
}

/// Free evolution `U_beta(t) u`; an exact isometry of `L^2` with
/// `U(t) U(s) = U(t + s)`.
pub fn linear_group(u: &Field, t: f64, beta: f64) -> Field {
    let grid = u.grid();
    let out = rotate(u.spectrum(), &phases(&dispersion(grid, beta), t));
    Field::from_spectrum(grid, &out).expect("unimodular multiplier keeps samples finite")
}

/// Spectrum of `-coeff * d/dx (u^{k+1})` (Nyquist zeroed).
pub(crate) fn nonlinear_spectrum(
    grid: &Grid,
    spectrum: &[Complex64],
    params: &ModelParams,
    coeff: f64,
) -> Result<Vec<Complex64>> {
    let mut out = power_spectrum(grid, spectrum, params.k() + 1, MAX_PADDED_POINTS)?;
    let nyq = grid.nyquist_index();
    for (j, (c, xi)) in out.iter_mut().zip(grid.wavenumbers()).enumerate() {
        *c = if j == nyq {
            Complex64::new(0.0, 0.0)
        } else {
            *c * Complex64::new(0.0, -coeff * xi)
        };
    }
    Ok(out)
}

/// The nonlinear part of the right-hand side, `-(u^{k+1})_x`.
pub fn rhs_nonlinear(u: &Field, params: &ModelParams) -> Result<Field> {
    let spec = nonlinear_spectrum(u.grid(), u.spectrum(), params, 1.0)?;
    Field::from_spectrum(u.grid(), &spec)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::l2_norm;

    #[test]
    fn identity_at_time_zero() {
        let g = Grid::new(64, 20.0).unwrap();
        let u = Field::from_fn(&g, |x| (-x * x).exp() * (1.0 + 0.3 * x)).unwrap();
        assert!(linear_group(&u, 0.0, 1.3).max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn single_mode_phase_shift() {
        // cos(m x) -> cos(m x + |m|^beta m t) for u_t = D^beta u_x
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let (m, beta, t) = (3.0f64, 2.0, 1.0);
        let u = Field::from_fn(&g, |x| (m * x).cos()).unwrap();
        let shift = m.abs().powf(beta) * m * t;
        let want = Field::from_fn(&g, |x| (m * x + shift).cos()).unwrap();
        assert!(linear_group(&u, t, beta).max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn nonlinear_rhs_examples() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let p1 = ModelParams::new(1.0, 1).unwrap();
        assert!(rhs_nonlinear(&Field::zeros(&g), &p1).unwrap().max_abs() == 0.0);
        let c = Field::from_fn(&g, |_| 0.7).unwrap();
        assert!(rhs_nonlinear(&c, &p1).unwrap().max_abs() < 1e-14);
        let cos = Field::from_fn(&g, f64::cos).unwrap();
        let want = Field::from_fn(&g, |x| (2.0 * x).sin()).unwrap();
        assert!(rhs_nonlinear(&cos, &p1).unwrap().max_abs_diff(&want) < 1e-13);
        let p4 = ModelParams::new(1.5, 4).unwrap();
        let bump = Field::from_fn(&g, |x| 0.2 + x.sin().powi(3)).unwrap();
        let r = rhs_nonlinear(&bump, &p4).unwrap();
        assert!(r.spectrum()[0].norm() < 1e-12, "mean-zero output");
    }

    #[test]
    fn isometry_under_large_times() {
        let g = Grid::new(128, 30.0).unwrap();
        let u = Field::from_fn(&g, |x| (-(x - 2.0).powi(2)).exp()).unwrap();
        let v = linear_group(&u, 123.4, 1.7);
        assert!((l2_norm(&v) - l2_norm(&u)).abs() < 1e-13);
    }
}
