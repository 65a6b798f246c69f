//! Periodic Fourier discretization of the real line.
//!
//! The line is replaced by the box `[-L/2, L/2)` sampled at `n` equispaced
//! points `x_j = -L/2 + j L/n`. Spectra are the *unnormalized* DFT of the
//! sample array, `u_hat[j] = sum_m u_m exp(-2 pi i j m / n)`, stored in FFT
//! order, so the mode at storage index `j` has wavenumber `2 pi j / L` for
//! `j < n/2` and `2 pi (j - n) / L` otherwise. Index `n/2` is the unpaired
//! Nyquist mode `-pi n / L`.
//!
//! With this layout the quadrature norm and the Parseval norm coincide:
//! `sum |u_j|^2 dx = (dx / n) sum |u_hat_j|^2`.

mod fft;
mod field;
mod grid;
mod ops;

pub use field::Field;
pub use grid::Grid;
pub use ops::{
    abs_lp_norm_pow, dealiased_power, dealiased_power_capped, fractional_derivative,
    hilbert_transform, l2_norm, lp_norm_pow, padded_len, sobolev_seminorm, spatial_derivative,
    spectral_inner, MAX_PADDED_POINTS,
};

pub(crate) use ops::{power_spectrum, sobolev_energy};

pub use rustfft::num_complex::Complex64;
