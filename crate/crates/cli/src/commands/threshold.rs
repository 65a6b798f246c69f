use std::fs::File;
use std::io::{BufWriter, Write};

use dgbo_core::evolution::evolve;
use dgbo_core::ground_state::GroundState;
use dgbo_core::io::fmt_f64;
use dgbo_core::threshold::{check_conditions, verify_apriori_bound, ThresholdReport};
use dgbo_core::{Error, ModelParams};
use serde::{Deserialize, Serialize};

use super::{obtain_ground_state, write_json, Context};
use crate::config::{Format, RunConfig};
use crate::exit::CliError;
use crate::provenance::Provenance;

/// One `(beta, k, lambda)` evaluation: a report, or the reason there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub beta: f64,
    pub k: u32,
    pub lambda: f64,
    pub report: Option<ThresholdReport>,
    pub error: Option<String>,
}

impl Cell {
    pub fn error_tag(e: &Error) -> String {
        match e {
            Error::Inapplicable(m) => format!("inapplicable: {m}"),
            other => other.to_string(),
        }
    }
}

pub const CELL_CSV_HEADER: [&str; 19] = [
    "beta",
    "k",
    "lambda",
    "admissible",
    "energy_nonneg",
    "energy_condition",
    "gradient_condition",
    "trajectory_ok",
    "s_k",
    "lhs_energy_mass",
    "rhs_energy_mass",
    "lhs_gradient_mass",
    "rhs_gradient_mass",
    "A",
    "B",
    "x0",
    "f_x0",
    "ground_state_energy_gap",
    "error",
];

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_cells_csv<W: Write>(out: W, cells: &[Cell]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CELL_CSV_HEADER).map_err(csv_err)?;
    for c in cells {
        let mut row = vec![fmt_f64(c.beta), c.k.to_string(), fmt_f64(c.lambda)];
        match &c.report {
            Some(r) => row.extend([
                r.admissible.to_string(),
                r.energy_nonneg.to_string(),
                r.energy_condition.to_string(),
                r.gradient_condition.to_string(),
                r.trajectory_ok.map(|b| b.to_string()).unwrap_or_default(),
                fmt_f64(r.s_k),
                fmt_f64(r.lhs_energy_mass),
                fmt_f64(r.rhs_energy_mass),
                fmt_f64(r.lhs_gradient_mass),
                fmt_f64(r.rhs_gradient_mass),
                fmt_f64(r.a),
                fmt_f64(r.b),
                opt(r.x0),
                opt(r.f_x0),
                opt(r.ground_state_energy_gap),
                String::new(),
            ]),
            None => {
                row.extend(std::iter::repeat_n(String::new(), 15));
                row.push(c.error.clone().unwrap_or_default());
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Core(Error::Csv(e))
}

/// Report for `lambda Q`, with the a-priori bound checked along a trajectory
/// when configured and the data are admissible.
pub(crate) fn evaluate(
    cfg: &RunConfig,
    params: &ModelParams,
    gs: &GroundState,
    lambda: f64,
) -> Result<ThresholdReport, Error> {
    let u0 = gs.profile.scaled(lambda);
    let mut report = check_conditions(&u0, gs, params)?;
    if cfg.threshold.evolve && report.admissible {
        let rec = evolve(&u0, params, &cfg.evolution)?;
        report.trajectory_ok = Some(verify_apriori_bound(&rec, &report, gs)?);
    }
    Ok(report)
}

#[derive(Serialize)]
struct GroundStateSummary {
    n_points: usize,
    length: f64,
    mass: f64,
    energy: f64,
    residual: f64,
    sharpness_gap: f64,
}

#[derive(Serialize)]
struct ThresholdArtifact<'a> {
    provenance: &'a Provenance,
    params: ModelParams,
    ground_state: GroundStateSummary,
    cells: Vec<Cell>,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let params = ctx.cfg.model()?;
    if !params.is_supercritical() {
        return Err(Error::Inapplicable(format!(
            "k = {} <= 2 beta = {}: the threshold theorem needs k > 2 beta",
            params.k(),
            2.0 * params.beta()
        ))
        .into());
    }
    if ctx.cfg.threshold.amplitude_list.is_empty() {
        return Err(CliError::Usage("threshold.amplitude_list is empty".into()));
    }
    let gs = obtain_ground_state(&ctx.cfg, &params)?;
    let mut cells = Vec::new();
    for &lambda in &ctx.cfg.threshold.amplitude_list {
        let report = evaluate(&ctx.cfg, &params, &gs, lambda)?;
        println!(
            "lambda = {lambda}: admissible = {} (energy {}, gradient {}, E >= 0 {}){}",
            report.admissible,
            report.energy_condition,
            report.gradient_condition,
            report.energy_nonneg,
            match report.trajectory_ok {
                Some(ok) => format!(", a-priori bound along trajectory: {ok}"),
                None => String::new(),
            }
        );
        cells.push(Cell {
            beta: params.beta(),
            k: params.k(),
            lambda,
            report: Some(report),
            error: None,
        });
    }
    if ctx.cfg.output.wants(Format::Csv) {
        write_cells_csv(
            BufWriter::new(File::create(ctx.out_path("threshold.csv"))?),
            &cells,
        )?;
    }
    if ctx.cfg.output.wants(Format::Json) {
        let artifact = ThresholdArtifact {
            provenance: &ctx.provenance,
            params,
            ground_state: GroundStateSummary {
                n_points: gs.grid().n_points(),
                length: gs.grid().length(),
                mass: gs.mass,
                energy: gs.energy,
                residual: gs.residual,
                sharpness_gap: gs.sharpness_gap,
            },
            cells,
        };
        write_json(&ctx.out_path("threshold.json"), &artifact)?;
    }
    Ok(())
}
