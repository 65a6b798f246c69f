//! Time integration of `u_t = D^beta u_x - (u^{k+1})_x`.
//!
//! Both integrators work on the spectrum and remove the dispersive term
//! exactly through the linear group: [`step_if_rk4`] is a Lawson RK4 in the
//! interaction picture, [`duhamel_picard_solve`] iterates the Duhamel map to a
//! fixed point on a Gauss-Lobatto mesh. They share nothing beyond the
//! nonlinearity and so serve as each other's oracle.

mod if_rk4;
mod linear;
mod picard;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::ConservedPair;
use crate::io::fmt_f64;
use crate::params::ModelParams;
use crate::spectral::{sobolev_energy, Complex64, Field, Grid};

pub use if_rk4::step_if_rk4;
pub use linear::{linear_group, rhs_nonlinear};
pub use picard::{PicardConfig, MAX_QUADRATURE_NODES};

use if_rk4::{all_finite, IfRk4};

/// Quantities below this are compared in absolute rather than relative terms.
pub const DRIFT_ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    IfRk4,
    DuhamelPicard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionConfig {
    /// Step size; `None` picks [`EvolutionConfig::heuristic_dt`]. With
    /// `adaptive` this is only the first trial step.
    pub dt: Option<f64>,
    pub adaptive: bool,
    /// Step-doubling target for the relative `L^2` local error.
    pub target_local_error: f64,
    pub t_end: f64,
    pub output_stride: usize,
    pub integrator: Integrator,
    pub picard: PicardConfig,
    /// Multiplies the nonlinearity; 0 reduces the flow to the linear group.
    pub nonlinear_coefficient: f64,
    /// Flag suspected blowup once `||u||_inf` exceeds this multiple of its
    /// initial value.
    pub amplitude_ceiling: f64,
    /// Same for `X(t) = ||D^{beta/2} u||^2`.
    pub gradient_ceiling: f64,
    /// Relative mass drift treated as a loss of integrity.
    pub mass_drift_limit: f64,
    pub store_snapshots: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: None,
            adaptive: false,
            target_local_error: 1e-10,
            t_end: 1.0,
            output_stride: 1,
            integrator: Integrator::IfRk4,
            picard: PicardConfig::default(),
            nonlinear_coefficient: 1.0,
            amplitude_ceiling: 50.0,
            gradient_ceiling: 1e3,
            mass_drift_limit: 1e-6,
            store_snapshots: false,
        }
    }
}

impl EvolutionConfig {
    pub fn heuristic_dt(grid: &Grid) -> f64 {
        1e-3 * grid.spacing().sqrt()
    }

    pub fn step_size(&self, grid: &Grid) -> f64 {
        self.dt
            .unwrap_or_else(|| Self::heuristic_dt(grid).min(self.t_end))
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        let dt = self.step_size(grid);
        if !(dt.is_finite() && dt > 0.0) {
            return bad(format!("dt must be positive, got {dt}"));
        }
        if dt > self.t_end {
            return bad(format!("dt = {dt} exceeds t_end = {}", self.t_end));
        }
        if self.output_stride == 0 {
            return bad("output_stride must be at least 1".into());
        }
        if self.adaptive && !(self.target_local_error > 0.0 && self.target_local_error.is_finite())
        {
            return bad("target_local_error must be positive".into());
        }
        if self.adaptive && self.integrator == Integrator::DuhamelPicard {
            return bad("adaptive stepping is only available for if_rk4".into());
        }
        if !self.nonlinear_coefficient.is_finite() {
            return bad("nonlinear_coefficient must be finite".into());
        }
        for (name, v) in [
            ("amplitude_ceiling", self.amplitude_ceiling),
            ("gradient_ceiling", self.gradient_ceiling),
            ("mass_drift_limit", self.mass_drift_limit),
        ] {
            if v.is_nan() || v <= 0.0 {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        self.picard.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Mass drift exceeded the configured limit.
    IntegrityBreach,
    /// A blowup proxy crossed its ceiling. Diagnostic only.
    SuspectedBlowup,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Drift {
    pub mass_drift: f64,
    pub energy_drift: f64,
}

fn relative_deviation(value: f64, reference: f64) -> f64 {
    if reference.abs() < DRIFT_ABSOLUTE_FLOOR {
        (value - reference).abs()
    } else {
        (value / reference - 1.0).abs()
    }
}

impl Drift {
    pub fn of(series: &[ConservedPair]) -> Self {
        let Some(first) = series.first() else {
            return Self::default();
        };
        series.iter().fold(Self::default(), |d, c| Self {
            mass_drift: d.mass_drift.max(relative_deviation(c.mass, first.mass)),
            energy_drift: d
                .energy_drift
                .max(relative_deviation(c.energy, first.energy)),
        })
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub conserved: Vec<ConservedPair>,
    pub linf: Vec<f64>,
    pub snapshots: Option<Vec<Field>>,
    pub drift: Drift,
    pub status: RunStatus,
    /// Human-readable reason when `status` is not `Completed`.
    pub note: Option<String>,
    pub steps: usize,
    pub final_state: Field,
}

impl TrajectoryRecord {
    pub fn gradient_series(&self) -> Vec<f64> {
        self.conserved
            .iter()
            .map(ConservedPair::gradient_energy)
            .collect()
    }

    /// CSV with columns `t,mass,energy,h_half_beta,linf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "mass", "energy", "h_half_beta", "linf"])?;
        for ((t, c), l) in self.times.iter().zip(&self.conserved).zip(&self.linf) {
            w.write_record([t, &c.mass, &c.energy, &c.h_half_beta, l].map(|v| fmt_f64(*v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evolves `u0` over `[0, t_end]` with Duhamel-Picard panels no wider than
/// the configured step. Returns `u(t_end)`.
pub fn duhamel_picard_solve(
    u0: &Field,
    t_end: f64,
    params: &ModelParams,
    cfg: &EvolutionConfig,
) -> Result<Field> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidInput(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let cfg = EvolutionConfig {
        t_end,
        ..cfg.clone()
    };
    cfg.validate(u0.grid())?;
    let dt = cfg.step_size(u0.grid());
    let panels = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let spec = picard::picard_spectrum(
        u0.grid(),
        u0.spectrum(),
        t_end,
        panels,
        params,
        cfg.nonlinear_coefficient,
        &cfg.picard,
    )?;
    Field::from_spectrum(u0.grid(), &spec)
}

struct Monitor {
    mass0: f64,
    grad0: f64,
    linf0: f64,
}

fn spectral_mass(grid: &Grid, spec: &[Complex64]) -> f64 {
    sobolev_energy(grid, spec, 0.0)
}

enum Stepper {
    Rk4(IfRk4),
    Picard,
}

impl Stepper {
    fn advance(
        &mut self,
        grid: &Grid,
        u: &[Complex64],
        h: f64,
        params: &ModelParams,
        cfg: &EvolutionConfig,
    ) -> Result<Vec<Complex64>> {
        match self {
            Stepper::Rk4(s) => s.step(u, h),
            Stepper::Picard => picard::picard_spectrum(
                grid,
                u,
                h,
                1,
                params,
                cfg.nonlinear_coefficient,
                &cfg.picard,
            ),
        }
    }
}

fn l2_diff(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    (grid.spacing() / grid.n_points() as f64 * s).sqrt()
}

/// Advances `u0` to `t_end`, recording conserved quantities every
/// `output_stride` steps (and at the final time).
///
/// Stops early, with a flagged record rather than an error, on an integrity
/// breach or when a blowup proxy fires. Non-finite states are errors.
pub fn evolve(u0: &Field, params: &ModelParams, cfg: &EvolutionConfig) -> Result<TrajectoryRecord> {
    let grid = u0.grid().clone();
    cfg.validate(&grid)?;
    let dt0 = cfg.step_size(&grid);
    let beta = params.beta();
    let mut stepper = match cfg.integrator {
        Integrator::IfRk4 => Stepper::Rk4(IfRk4::new(&grid, params, cfg.nonlinear_coefficient)),
        Integrator::DuhamelPicard => Stepper::Picard,
    };

    let mut rec = TrajectoryRecord {
        params: *params,
        times: Vec::new(),
        conserved: Vec::new(),
        linf: Vec::new(),
        snapshots: cfg.store_snapshots.then(Vec::new),
        drift: Drift::default(),
        status: RunStatus::Completed,
        note: None,
        steps: 0,
        final_state: u0.clone(),
    };
    let record = |rec: &mut TrajectoryRecord, t: f64, f: &Field| {
        rec.times.push(t);
        rec.conserved.push(ConservedPair::of(f, params));
        rec.linf.push(f.max_abs());
        if let Some(s) = rec.snapshots.as_mut() {
            s.push(f.clone());
        }
    };
    record(&mut rec, 0.0, u0);
    let mon = Monitor {
        mass0: rec.conserved[0].mass,
        grad0: rec.conserved[0].gradient_energy(),
        linf0: rec.linf[0],
    };

    let mut spec = u0.spectrum().to_vec();
    let mut t = 0.0;
    let mut h = dt0;
    let fixed_steps = ((cfg.t_end / dt0) - 1e-9).ceil().max(1.0) as usize;
    let fixed_h = cfg.t_end / fixed_steps as f64;
    let instability = |t: f64, reason: String| Error::Instability {
        t_last_good: t,
        reason,
    };

    loop {
        let done = if cfg.adaptive {
            t >= cfg.t_end
        } else {
            rec.steps >= fixed_steps
        };
        if done {
            break;
        }
        let next = if cfg.adaptive {
            h = h.min(cfg.t_end - t);
            let full = stepper.advance(&grid, &spec, h, params, cfg)?;
            let mid = stepper.advance(&grid, &spec, 0.5 * h, params, cfg)?;
            let fine = stepper.advance(&grid, &mid, 0.5 * h, params, cfg)?;
            let scale = l2_diff(&grid, &fine, &vec![Complex64::new(0.0, 0.0); fine.len()])
                .max(DRIFT_ABSOLUTE_FLOOR);
            let err = l2_diff(&grid, &full, &fine) / scale;
            if !err.is_finite() {
                return Err(instability(t, "non-finite local error estimate".into()));
            }
            let factor = 0.9 * (cfg.target_local_error / err.max(1e-300)).powf(0.2);
            if err > cfg.target_local_error {
                h *= factor.clamp(0.1, 0.9);
                if h < 1e-14 * cfg.t_end.max(1.0) {
                    return Err(instability(t, format!("step size underflow (h = {h:e})")));
                }
                continue;
            }
            let taken = h;
            h *= factor.clamp(0.2, 2.0);
            t = if cfg.t_end - (t + taken) < 1e-12 * cfg.t_end {
                cfg.t_end
            } else {
                t + taken
            };
            fine
        } else {
            let out = stepper.advance(&grid, &spec, fixed_h, params, cfg)?;
            t = if rec.steps + 1 == fixed_steps {
                cfg.t_end
            } else {
                (rec.steps + 1) as f64 * fixed_h
            };
            out
        };
        if !all_finite(&next) {
            return Err(instability(
                rec.times.last().copied().unwrap_or(0.0),
                format!("non-finite state at t = {t}"),
            ));
        }
        spec = next;
        rec.steps += 1;

        let m = spectral_mass(&grid, &spec);
        let x = sobolev_energy(&grid, &spec, 0.5 * beta);
        let breach = relative_deviation(m, mon.mass0) > cfg.mass_drift_limit;
        let grad_blowup = mon.grad0 > 0.0 && x > cfg.gradient_ceiling * mon.grad0;
        let at_output = rec.steps.is_multiple_of(cfg.output_stride) || t >= cfg.t_end;
        if breach || grad_blowup || at_output {
            let f =
                Field::from_spectrum(&grid, &spec).map_err(|e| instability(t, e.to_string()))?;
            let amp_blowup = mon.linf0 > 0.0 && f.max_abs() > cfg.amplitude_ceiling * mon.linf0;
            record(&mut rec, t, &f);
            rec.final_state = f;
            if breach {
                rec.status = RunStatus::IntegrityBreach;
                rec.note = Some(format!(
                    "mass drift {:.3e} exceeds {:.1e} at t = {t}",
                    relative_deviation(m, mon.mass0),
                    cfg.mass_drift_limit
                ));
                log::warn!(
                    "integrity breach: {}",
                    rec.note.as_deref().unwrap_or_default()
                );
                break;
            }
            if grad_blowup || amp_blowup {
                rec.status = RunStatus::SuspectedBlowup;
                rec.note = Some(format!(
                    "blowup proxy fired at t = {t}: X(t)/X(0) = {:.3e}, linf/linf0 = {:.3e}",
                    x / mon.grad0,
                    rec.linf.last().copied().unwrap_or(0.0) / mon.linf0
                ));
                log::warn!("{}", rec.note.as_deref().unwrap_or_default());
                break;
            }
        }
    }
    rec.drift = Drift::of(&rec.conserved);
    Ok(rec)
}
