use std::fs::File;
use std::io::BufWriter;

use dgbo_core::{Error, ModelParams};
use rayon::prelude::*;
use serde::Serialize;

use super::threshold::{evaluate, write_cells_csv, Cell};
use super::{obtain_ground_state, write_json, Context};
use crate::config::{Format, SweepSection};
use crate::exit::CliError;
use crate::provenance::Provenance;

#[derive(Serialize)]
struct SweepArtifact<'a> {
    provenance: &'a Provenance,
    axes: &'a SweepSection,
    cells: &'a [Cell],
}

fn group(ctx: &Context, beta: f64, k: u32, lambdas: &[f64]) -> Vec<Cell> {
    let fail = |e: &Error| -> Vec<Cell> {
        let msg = Cell::error_tag(e);
        lambdas
            .iter()
            .map(|&lambda| Cell {
                beta,
                k,
                lambda,
                report: None,
                error: Some(msg.clone()),
            })
            .collect()
    };
    let params = match ModelParams::new(beta, k) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    if !params.is_supercritical() {
        return fail(&Error::Inapplicable(format!(
            "k = {k} <= 2 beta = {}",
            2.0 * beta
        )));
    }
    let gs = match obtain_ground_state(&ctx.cfg, &params) {
        Ok(gs) => gs,
        Err(CliError::Core(e)) => return fail(&e),
        Err(other) => return fail(&Error::InvalidInput(other.to_string())),
    };
    lambdas
        .iter()
        .map(|&lambda| match evaluate(&ctx.cfg, &params, &gs, lambda) {
            Ok(report) => Cell {
                beta,
                k,
                lambda,
                report: Some(report),
                error: None,
            },
            Err(e) => Cell {
                beta,
                k,
                lambda,
                report: None,
                error: Some(Cell::error_tag(&e)),
            },
        })
        .collect()
}

/// Threshold reports over the `beta x k x lambda` grid. One ground state is
/// solved per `(beta, k)`; cells come out in axis order whatever the thread
/// count.
pub fn run(ctx: &Context) -> Result<(), CliError> {
    let axes = ctx
        .cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("the sweep command needs a [sweep] section".into()))?;
    for (name, len) in [
        ("beta", axes.beta.len()),
        ("k", axes.k.len()),
        ("lambda", axes.lambda.len()),
    ] {
        if len == 0 {
            return Err(CliError::Usage(format!("sweep axis `{name}` is empty")));
        }
    }
    let pairs: Vec<(f64, u32)> = axes
        .beta
        .iter()
        .flat_map(|&b| axes.k.iter().map(move |&k| (b, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let cells: Vec<Cell> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(b, k)| group(ctx, b, k, &axes.lambda))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });

    let ok = cells.iter().filter(|c| c.report.is_some()).count();
    println!("sweep: {ok} of {} cells evaluated", cells.len());
    for c in cells.iter().filter(|c| c.report.is_none()) {
        println!(
            "  beta = {}, k = {}, lambda = {}: {}",
            c.beta,
            c.k,
            c.lambda,
            c.error.as_deref().unwrap_or("")
        );
    }
    if ctx.cfg.output.wants(Format::Csv) {
        write_cells_csv(
            BufWriter::new(File::create(ctx.out_path("sweep.csv"))?),
            &cells,
        )?;
    }
    if ctx.cfg.output.wants(Format::Json) {
        let artifact = SweepArtifact {
            provenance: &ctx.provenance,
            axes,
            cells: &cells,
        };
        write_json(&ctx.out_path("sweep.json"), &artifact)?;
    }
    if ok > 0 {
        return Ok(());
    }
    let all_inapplicable = cells.iter().all(|c| {
        c.error
            .as_deref()
            .is_some_and(|e| e.starts_with("inapplicable"))
    });
    if all_inapplicable {
        Err(Error::Inapplicable("no supercritical cell in the sweep".into()).into())
    } else {
        Err(CliError::Failed("no sweep cell could be evaluated".into()))
    }
}
