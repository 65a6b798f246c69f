use super::{fft, Complex64, Field, Grid};
use crate::error::{Error, Result};

/// Default cap on the zero-padded transform length used by [`dealiased_power`].
pub const MAX_PADDED_POINTS: usize = 1 << 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn map_spectrum(f: &Field, mut multiplier: impl FnMut(usize, f64) -> Complex64) -> Field {
    let grid = f.grid();
    let out: Vec<Complex64> = f
        .spectrum()
        .iter()
        .zip(grid.wavenumbers())
        .enumerate()
        .map(|(j, (c, &xi))| c * multiplier(j, xi))
        .collect();
    // Multipliers here are Hermitian, so the result is real up to round-off.
    Field::from_spectrum(grid, &out).expect("multiplier of a finite field stays finite")
}

/// `D^s f`, the Fourier multiplier `|xi|^s`. The Nyquist mode is kept.
pub fn fractional_derivative(f: &Field, s: f64) -> Result<Field> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidExponent(s));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(map_spectrum(f, |_, xi| {
        Complex64::new(xi.abs().powf(s), 0.0)
    }))
}

/// Hilbert transform, multiplier `-i sgn(xi)`; zero and Nyquist modes vanish.
pub fn hilbert_transform(f: &Field) -> Field {
    let nyq = f.grid().nyquist_index();
    map_spectrum(f, |j, xi| {
        if j == nyq || xi == 0.0 {
            ZERO
        } else {
            Complex64::new(0.0, -xi.signum())
        }
    })
}

/// `d/dx`, multiplier `i xi` with the Nyquist mode zeroed.
pub fn spatial_derivative(f: &Field) -> Field {
    let nyq = f.grid().nyquist_index();
    map_spectrum(f, |j, xi| {
        if j == nyq {
            ZERO
        } else {
            Complex64::new(0.0, xi)
        }
    })
}

/// Transform length used to evaluate a `p`-th power of an `n`-point field
/// without aliasing: `(p + 2) n / 2`.
///
/// Products of `p` fields with modes `|m| <= n/2` reach `|m| <= p n / 2`;
/// folding onto the kept band `|m| <= n/2` is alias-free once the padded
/// length strictly exceeds `(p + 1) n / 2`.
pub fn padded_len(n_points: usize, p: u32) -> usize {
    (p as usize + 2) * n_points / 2
}

/// Spectrum of the Galerkin projection of `u^p`, given the spectrum of `u`.
///
/// The incoming Nyquist coefficient is split evenly between `+-n/2`; the
/// outgoing one folds both back together, which is what sampling the
/// projected power on the grid produces.
pub(crate) fn power_spectrum(
    grid: &Grid,
    spectrum: &[Complex64],
    p: u32,
    cap: usize,
) -> Result<Vec<Complex64>> {
    if p == 0 {
        return Err(Error::InvalidInput("power must be at least 1".into()));
    }
    if p == 1 {
        return Ok(spectrum.to_vec());
    }
    let n = grid.n_points();
    let half = n / 2;
    let m = padded_len(n, p);
    if m > cap {
        return Err(Error::Resource { requested: m, cap });
    }
    // Half-spectrum of the padded field; length m/2 + 1 covers the kept band.
    let inv_n = 1.0 / n as f64;
    let mut half_spec = vec![ZERO; m / 2 + 1];
    for (dst, src) in half_spec[..half].iter_mut().zip(&spectrum[..half]) {
        *dst = src * inv_n;
    }
    half_spec[0].im = 0.0;
    half_spec[half] = spectrum[half] * (0.5 * inv_n);
    let mut real = vec![0.0; m];
    let scale = n as f64 / m as f64;
    let mut out = vec![ZERO; n];
    fft::with_real_plans(m, |r2c, c2r, scratch| -> Result<()> {
        c2r.process_with_scratch(&mut half_spec, &mut real, scratch)
            .map_err(|e| Error::InvalidInput(format!("inverse real transform: {e}")))?;
        for v in real.iter_mut() {
            *v = v.powi(p as i32);
        }
        r2c.process_with_scratch(&mut real, &mut half_spec, scratch)
            .map_err(|e| Error::InvalidInput(format!("forward real transform: {e}")))?;
        Ok(())
    })?;
    out[..half].copy_from_slice(&half_spec[..half]);
    for j in 1..half {
        out[n - j] = half_spec[j].conj();
    }
    // both +-n/2 fold onto the Nyquist slot
    out[half] = Complex64::new(2.0 * half_spec[half].re, 0.0);
    out.iter_mut().for_each(|c| *c *= scale);
    Ok(out)
}

/// Pointwise `f^p`, alias-free (see [`padded_len`]).
pub fn dealiased_power(f: &Field, p: u32) -> Result<Field> {
    dealiased_power_capped(f, p, MAX_PADDED_POINTS)
}

/// [`dealiased_power`] with an explicit cap on the padded transform length.
pub fn dealiased_power_capped(f: &Field, p: u32, cap: usize) -> Result<Field> {
    if p == 1 {
        return Ok(f.clone());
    }
    let spec = power_spectrum(f.grid(), f.spectrum(), p, cap)?;
    Field::from_spectrum(f.grid(), &spec)
}

/// Real inner product `<a, b> = int a b dx` computed from two spectra.
pub fn spectral_inner(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let w = grid.spacing() / grid.n_points() as f64;
    w * a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum::<f64>()
}

/// `||D^s u||^2` from a spectrum.
pub(crate) fn sobolev_energy(grid: &Grid, spectrum: &[Complex64], s: f64) -> f64 {
    let w = grid.spacing() / grid.n_points() as f64;
    let sum: f64 = if s == 0.0 {
        spectrum.iter().map(|c| c.norm_sqr()).sum()
    } else {
        spectrum
            .iter()
            .zip(grid.wavenumbers())
            .map(|(c, xi)| xi.abs().powf(2.0 * s) * c.norm_sqr())
            .sum()
    };
    w * sum
}

/// `sqrt(sum u_j^2 dx)`.
pub fn l2_norm(f: &Field) -> f64 {
    let dx = f.grid().spacing();
    (f.samples().iter().map(|v| v * v).sum::<f64>() * dx).sqrt()
}

/// `||D^s f||_{L^2}` via Parseval; equals [`l2_norm`] at `s = 0`.
pub fn sobolev_seminorm(f: &Field, s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidExponent(s));
    }
    Ok(sobolev_energy(f.grid(), f.spectrum(), s).sqrt())
}

/// Signed `sum u_j^p dx`, i.e. `int u^p`, not `int |u|^p`, for odd `p`.
pub fn lp_norm_pow(f: &Field, p: u32) -> f64 {
    let dx = f.grid().spacing();
    f.samples().iter().map(|v| v.powi(p as i32)).sum::<f64>() * dx
}

/// `sum |u_j|^p dx`, the `p`-th power of the `L^p` norm.
pub fn abs_lp_norm_pow(f: &Field, p: u32) -> f64 {
    let dx = f.grid().spacing();
    f.samples()
        .iter()
        .map(|v| v.abs().powi(p as i32))
        .sum::<f64>()
        * dx
}
