use std::sync::OnceLock;

use super::{Complex64, Grid};
use crate::error::{Error, Result};

/// Real function sampled on a [`Grid`], with its spectrum computed on demand.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Field {
    pub fn new(grid: &Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::InvalidField(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!(
                "sample {j} is not finite ({})",
                samples[j]
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            samples,
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..grid.n_points())
            .map(|j| f(grid.coordinate(j)))
            .collect();
        Self::new(grid, samples)
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            samples: vec![0.0; grid.n_points()],
            spectrum: OnceLock::new(),
        }
    }

    /// Field whose DFT is `spectrum`; imaginary round-off of the inverse
    /// transform is discarded.
    pub fn from_spectrum(grid: &Grid, spectrum: &[Complex64]) -> Result<Self> {
        if spectrum.len() != grid.n_points() {
            return Err(Error::InvalidField(format!(
                "expected {} modes, got {}",
                grid.n_points(),
                spectrum.len()
            )));
        }
        Self::new(grid, grid.inverse_real(spectrum))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| self.grid.forward(&self.samples))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|v| v * factor).collect(),
            spectrum: OnceLock::new(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&v| v == 0.0)
    }

    /// Largest `|u_j - v_j|`. Panics if the grids differ.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Reflection `x -> -x`.
    pub fn mirrored(&self) -> Self {
        let samples = (0..self.samples.len())
            .map(|j| self.samples[self.grid.mirror_index(j)])
            .collect();
        Self {
            grid: self.grid.clone(),
            samples,
            spectrum: OnceLock::new(),
        }
    }

    /// Even part, `(u(x) + u(-x)) / 2`.
    pub fn symmetrized(&self) -> Self {
        let samples = (0..self.samples.len())
            .map(|j| 0.5 * (self.samples[j] + self.samples[self.grid.mirror_index(j)]))
            .collect();
        Self {
            grid: self.grid.clone(),
            samples,
            spectrum: OnceLock::new(),
        }
    }

    /// Circular shift moving sample `j` to `j + shift`.
    pub fn rotated(&self, shift: isize) -> Self {
        let n = self.samples.len() as isize;
        let mut samples = vec![0.0; self.samples.len()];
        for (j, v) in self.samples.iter().enumerate() {
            samples[(j as isize + shift).rem_euclid(n) as usize] = *v;
        }
        Self {
            grid: self.grid.clone(),
            samples,
            spectrum: OnceLock::new(),
        }
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, v) in self.samples.iter().enumerate() {
            if *v > self.samples[best] {
                best = j;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let g = Grid::new(8, 1.0).unwrap();
        assert!(Field::new(&g, vec![0.0; 7]).is_err());
        let mut s = vec![0.0; 8];
        s[3] = f64::NAN;
        assert!(matches!(Field::new(&g, s), Err(Error::InvalidField(_))));
    }

    #[test]
    fn round_trip_reproduces_samples() {
        let g = Grid::new(64, 10.0).unwrap();
        let f = Field::from_fn(&g, |x| (-(x - 0.3) * (x - 0.3)).exp() + 0.1 * x.sin()).unwrap();
        let back = Field::from_spectrum(&g, f.spectrum()).unwrap();
        let num: f64 = f
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        let den: f64 = f.samples().iter().map(|a| a * a).sum();
        assert!((num / den).sqrt() < 1e-12);
    }

    #[test]
    fn real_signal_spectrum_is_conjugate_symmetric() {
        let g = Grid::new(32, 7.0).unwrap();
        let f = Field::from_fn(&g, |x| (1.3 * x).cos() + x * (-x * x).exp()).unwrap();
        let s = f.spectrum();
        for j in 1..32 {
            assert!((s[j] - s[32 - j].conj()).norm() < 1e-12);
        }
        assert!(s[0].im.abs() < 1e-12 && s[16].im.abs() < 1e-12);
    }

    #[test]
    fn mirror_and_rotation() {
        let g = Grid::new(16, 16.0).unwrap();
        let f = Field::from_fn(&g, |x| x).unwrap();
        let m = f.mirrored();
        assert_eq!(m.samples()[g.center_index() + 2], -2.0);
        assert!(f.symmetrized().samples()[5].abs() < 1e-15);
        let r = f.rotated(3);
        assert_eq!(r.samples()[3], f.samples()[0]);
        assert_eq!(f.rotated(-1).samples()[15], f.samples()[0]);
    }
}
