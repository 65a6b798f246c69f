use std::fs::File;
use std::io::BufReader;
use std::io::BufWriter;

use dgbo_core::evolution::{evolve, Drift, RunStatus};
use dgbo_core::functionals::ConservedPair;
use dgbo_core::io::{read_field_csv, write_field_csv};
use dgbo_core::{Field, ModelParams};
use serde::Serialize;

use super::{obtain_ground_state, write_json, Context};
use crate::config::{Format, InitialData};
use crate::exit::CliError;
use crate::provenance::Provenance;

#[derive(Serialize)]
struct EvolveSummary<'a> {
    provenance: &'a Provenance,
    params: ModelParams,
    status: RunStatus,
    note: Option<String>,
    steps: usize,
    t_final: f64,
    drift: Drift,
    initial: ConservedPair,
    last: ConservedPair,
    max_gradient_ratio: f64,
    /// Energy-space well-posedness is not established for this `(beta, k)`.
    exploratory: bool,
}

fn exploratory(params: &ModelParams) -> bool {
    params.beta() == 1.0 && matches!(params.k(), 3 | 4)
}

pub(crate) fn initial_field(ctx: &Context, params: &ModelParams) -> Result<Field, CliError> {
    let data = ctx
        .cfg
        .initial_data
        .as_ref()
        .ok_or_else(|| CliError::Usage("evolve needs an [initial_data] block".into()))?;
    let field = match data {
        InitialData::Zero {} => Field::zeros(&ctx.cfg.grid()?),
        InitialData::Gaussian {
            amplitude,
            width,
            center,
        } => Field::from_fn(&ctx.cfg.grid()?, |x| {
            amplitude * (-((x - center) / width).powi(2)).exp()
        })?,
        InitialData::Sech {
            amplitude,
            width,
            center,
        } => Field::from_fn(&ctx.cfg.grid()?, |x| {
            amplitude / ((x - center) / width).cosh()
        })?,
        InitialData::Soliton { lambda } => obtain_ground_state(&ctx.cfg, params)?
            .profile
            .scaled(*lambda),
        InitialData::File { path } => read_field_csv(BufReader::new(File::open(path)?))?,
    };
    Ok(field)
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let params = ctx.cfg.model()?;
    let u0 = initial_field(ctx, &params)?;
    let rec = evolve(&u0, &params, &ctx.cfg.evolution)?;
    let out = &ctx.cfg.output;

    if out.wants(Format::Csv) {
        rec.write_csv(BufWriter::new(File::create(
            ctx.out_path("trajectory.csv"),
        )?))?;
        write_field_csv(
            BufWriter::new(File::create(ctx.out_path("final_state.csv"))?),
            &rec.final_state,
            "u",
        )?;
        if let Some(snaps) = &rec.snapshots {
            for (i, s) in snaps.iter().enumerate() {
                let f = File::create(ctx.out_path(&format!("snapshot_{i:05}.csv")))?;
                write_field_csv(BufWriter::new(f), s, "u")?;
            }
        }
    }
    let grads = rec.gradient_series();
    let g0 = grads.first().copied().unwrap_or(0.0);
    let summary = EvolveSummary {
        provenance: &ctx.provenance,
        params,
        status: rec.status,
        note: rec.note.clone(),
        steps: rec.steps,
        t_final: rec.times.last().copied().unwrap_or(0.0),
        drift: rec.drift,
        initial: rec.conserved[0],
        last: *rec.conserved.last().expect("initial state is recorded"),
        max_gradient_ratio: if g0 > 0.0 {
            grads.iter().fold(0.0, |a: f64, &g| a.max(g / g0))
        } else {
            0.0
        },
        exploratory: exploratory(&params),
    };
    if summary.exploratory {
        println!("note: no energy-space local theory is known for beta = 1, k = {}; results are exploratory", params.k());
    }
    if out.wants(Format::Json) {
        write_json(&ctx.out_path("evolve.json"), &summary)?;
    }
    println!(
        "evolve: {:?} at t = {} after {} steps; mass drift {:.3e}, energy drift {:.3e}",
        rec.status, summary.t_final, rec.steps, rec.drift.mass_drift, rec.drift.energy_drift
    );
    match rec.status {
        RunStatus::Completed => Ok(()),
        RunStatus::SuspectedBlowup => {
            println!(
                "note: {}",
                rec.note.as_deref().unwrap_or("blowup proxy fired")
            );
            Ok(())
        }
        RunStatus::IntegrityBreach => Err(CliError::IntegrityBreach(rec.note.unwrap_or_default())),
    }
}
