use serde::{Deserialize, Serialize};

use super::linear::{dispersion, nonlinear_spectrum, phases, rotate};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{Complex64, Grid};

/// Upper bound on Gauss-Lobatto nodes per sub-step.
pub const MAX_QUADRATURE_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardConfig {
    /// Gauss-Lobatto nodes per sub-step, endpoints included.
    pub quadrature_nodes: usize,
    pub max_sweeps: usize,
    /// Stop once successive iterates differ by less than this in the
    /// max-over-nodes `L^2` norm (relative to `max(1, |u0|)`).
    pub tolerance: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            quadrature_nodes: 3,
            max_sweeps: 60,
            tolerance: 1e-13,
        }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_QUADRATURE_NODES).contains(&self.quadrature_nodes) {
            return Err(Error::InvalidInput(format!(
                "quadrature_nodes must lie in 2..={MAX_QUADRATURE_NODES}, got {}",
                self.quadrature_nodes
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidInput("max_sweeps must be at least 1".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidInput(
                "Picard tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64, f64) {
    // returns (P_m, P_m', P_m'')
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0, 0.0);
    }
    for j in 2..=m {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let mf = m as f64;
    let d1 = mf * (x * p1 - p0) / (x * x - 1.0);
    let d2 = (2.0 * x * d1 - mf * (mf + 1.0) * p1) / (1.0 - x * x);
    (p1, d1, d2)
}

/// Gauss-Lobatto nodes on `[0, 1]`, ascending.
pub(crate) fn lobatto_nodes(q: usize) -> Vec<f64> {
    let m = q - 1;
    let mut nodes = vec![-1.0];
    for i in 1..m {
        let mut x = -(std::f64::consts::PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let (_, d1, d2) = legendre_with_derivative(m, x);
            let dx = d1 / d2;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
    }
    nodes.push(1.0);
    nodes.into_iter().map(|x| 0.5 * (x + 1.0)).collect()
}

fn poly_mul_linear(p: &[f64], root: f64, scale: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c * scale;
        out[i] -= c * root * scale;
    }
    out
}

/// `a[i][r] = integral_0^{tau_i} l_r(s) ds` for the Lagrange basis on `nodes`.
pub(crate) fn partial_integration_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let q = nodes.len();
    let basis: Vec<Vec<f64>> = (0..q)
        .map(|r| {
            let mut p = vec![1.0];
            for s in (0..q).filter(|&s| s != r) {
                p = poly_mul_linear(&p, nodes[s], 1.0 / (nodes[r] - nodes[s]));
            }
            p
        })
        .collect();
    nodes
        .iter()
        .map(|&t| {
            basis
                .iter()
                .map(|p| {
                    p.iter()
                        .enumerate()
                        .map(|(m, c)| c * t.powi(m as i32 + 1) / (m as f64 + 1.0))
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn spectral_l2(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = grid.n_points() as f64;
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    (grid.spacing() / n * s).sqrt()
}

/// Fixed-point iteration of the Duhamel map on `[0, t_end]`, discretized on a
/// composite Gauss-Lobatto mesh with `n_panels` panels. Returns the final
/// spectrum.
pub(crate) fn picard_spectrum(
    grid: &Grid,
    u0: &[Complex64],
    t_end: f64,
    n_panels: usize,
    params: &ModelParams,
    coeff: f64,
    cfg: &PicardConfig,
) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let q = cfg.quadrature_nodes;
    let tau = lobatto_nodes(q);
    let a = partial_integration_matrix(&tau);
    let h = t_end / n_panels as f64;
    let times: Vec<f64> = std::iter::once(0.0)
        .chain((0..n_panels).flat_map(|p| tau[1..].iter().map(move |s| (p as f64 + s) * h)))
        .collect();
    let omega = dispersion(grid, params.beta());
    let fwd: Vec<Vec<Complex64>> = times.iter().map(|&s| phases(&omega, s)).collect();
    let back: Vec<Vec<Complex64>> = times.iter().map(|&s| phases(&omega, -s)).collect();

    let scale = spectral_l2(grid, u0, &vec![Complex64::new(0.0, 0.0); u0.len()]).max(1.0);
    let mut u: Vec<Vec<Complex64>> = fwd.iter().map(|e| rotate(u0, e)).collect();
    let mut last_update = f64::INFINITY;
    for _sweep in 0..cfg.max_sweeps {
        let g = u
            .iter()
            .zip(&back)
            .map(|(ui, b)| Ok(rotate(&nonlinear_spectrum(grid, ui, params, coeff)?, b)))
            .collect::<Result<Vec<_>>>()?;
        let mut integral = vec![vec![Complex64::new(0.0, 0.0); u0.len()]; times.len()];
        for p in 0..n_panels {
            let start = p * (q - 1);
            for i in 1..q {
                let mut acc = integral[start].clone();
                for r in 0..q {
                    let w = h * a[i][r];
                    for (x, y) in acc.iter_mut().zip(&g[start + r]) {
                        *x += y * w;
                    }
                }
                integral[start + i] = acc;
            }
        }
        let mut update = 0.0f64;
        for (i, int) in integral.iter().enumerate() {
            let v: Vec<Complex64> = u0.iter().zip(int).map(|(x, y)| x + y).collect();
            let next = rotate(&v, &fwd[i]);
            let d = spectral_l2(grid, &next, &u[i]);
            // f64::max would silently drop a NaN
            update = if d.is_nan() {
                f64::INFINITY
            } else {
                update.max(d)
            };
            u[i] = next;
        }
        last_update = update;
        if !update.is_finite() {
            break;
        }
        if update < cfg.tolerance * scale {
            return Ok(u.pop().expect("mesh has at least two nodes"));
        }
    }
    Err(Error::NoContraction {
        sweeps: cfg.max_sweeps,
        last_update,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::linear_group;
    use crate::spectral::Field;

    #[test]
    fn lobatto_nodes_known_values() {
        let n3 = lobatto_nodes(3);
        assert!((n3[1] - 0.5).abs() < 1e-15);
        let n4 = lobatto_nodes(4);
        let inner = 0.5 * (1.0 - 1.0 / 5f64.sqrt());
        assert!((n4[1] - inner).abs() < 1e-14 && (n4[2] - (1.0 - inner)).abs() < 1e-14);
    }

    #[test]
    fn integration_matrix_reproduces_polynomials() {
        for q in 2..=MAX_QUADRATURE_NODES {
            let tau = lobatto_nodes(q);
            let a = partial_integration_matrix(&tau);
            for deg in 0..q {
                for (i, &t) in tau.iter().enumerate() {
                    let got: f64 = (0..q).map(|r| a[i][r] * tau[r].powi(deg as i32)).sum();
                    let want = t.powi(deg as i32 + 1) / (deg as f64 + 1.0);
                    assert!((got - want).abs() < 1e-12, "q={q} deg={deg}");
                }
            }
        }
    }

    #[test]
    fn linear_limit_matches_group() {
        let g = Grid::new(64, 20.0).unwrap();
        let p = ModelParams::new(1.5, 4).unwrap();
        let u = Field::from_fn(&g, |x| (-x * x).exp()).unwrap();
        let out =
            picard_spectrum(&g, u.spectrum(), 0.5, 3, &p, 0.0, &PicardConfig::default()).unwrap();
        let out = Field::from_spectrum(&g, &out).unwrap();
        assert!(out.max_abs_diff(&linear_group(&u, 0.5, 1.5)) < 1e-13);
    }

    #[test]
    fn node_count_validated() {
        let bad = PicardConfig {
            quadrature_nodes: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PicardConfig {
            quadrature_nodes: 9,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn large_data_fails_to_contract() {
        let g = Grid::new(128, 20.0).unwrap();
        let p = ModelParams::new(1.5, 4).unwrap();
        let u = Field::from_fn(&g, |x| 20.0 * (-x * x).exp()).unwrap();
        let cfg = PicardConfig {
            max_sweeps: 20,
            ..Default::default()
        };
        match picard_spectrum(&g, u.spectrum(), 1.0, 2, &p, 1.0, &cfg) {
            Err(Error::NoContraction { sweeps, .. }) => assert_eq!(sweeps, 20),
            other => panic!("expected NoContraction, got {other:?}"),
        }
    }
}
