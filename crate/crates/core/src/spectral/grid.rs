use std::f64::consts::PI;
use std::sync::Arc;

use super::fft;
use super::Complex64;
use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)`.
///
/// Cheap to clone; the wavenumber table is shared.
#[derive(Clone, Debug)]
pub struct Grid {
    inner: Arc<GridData>,
}

#[derive(Debug)]
struct GridData {
    n_points: usize,
    length: f64,
    spacing: f64,
    wavenumbers: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n_points() == other.n_points() && self.length() == other.length()
    }
}

impl Grid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < Self::MIN_POINTS || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even and at least {}, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let half = n_points / 2;
        let wavenumbers = (0..n_points)
            .map(|j| {
                let m = if j < half {
                    j as f64
                } else {
                    j as f64 - n_points as f64
                };
                2.0 * PI * m / length
            })
            .collect();
        Ok(Self {
            inner: Arc::new(GridData {
                n_points,
                length,
                spacing: length / n_points as f64,
                wavenumbers,
            }),
        })
    }

    pub fn n_points(&self) -> usize {
        self.inner.n_points
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn spacing(&self) -> f64 {
        self.inner.spacing
    }

    /// Wavenumbers in FFT storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    /// Wavenumbers in increasing order, `-n/2 .. n/2 - 1` in units of `2 pi / L`.
    pub fn sorted_wavenumbers(&self) -> Vec<f64> {
        let mut w = self.inner.wavenumbers.clone();
        w.sort_by(f64::total_cmp);
        w
    }

    pub fn nyquist_index(&self) -> usize {
        self.n_points() / 2
    }

    /// Sample index of `x = 0`.
    pub fn center_index(&self) -> usize {
        self.n_points() / 2
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.length() + j as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points()).map(|j| self.coordinate(j)).collect()
    }

    /// Index of the sample at `-x_j` (periodically, `-L/2` maps to itself).
    pub fn mirror_index(&self, j: usize) -> usize {
        (self.n_points() - j) % self.n_points()
    }

    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(samples.len(), self.n_points());
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft::forward_in_place(&mut buf);
        buf
    }

    /// Normalized inverse transform, keeping the imaginary parts.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(spectrum.len(), self.n_points());
        let mut buf = spectrum.to_vec();
        fft::inverse_in_place(&mut buf);
        let scale = 1.0 / self.n_points() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Normalized inverse transform, returning the real parts.
    pub fn inverse_real(&self, spectrum: &[Complex64]) -> Vec<f64> {
        self.inverse(spectrum).into_iter().map(|c| c.re).collect()
    }
}
