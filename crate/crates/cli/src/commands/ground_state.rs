use dgbo_core::ground_state::{closed_form_oracle, petviashvili_solve, save_ground_state};

use super::Context;
use crate::exit::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let params = ctx.cfg.model()?;
    let grid = ctx.cfg.grid()?;
    let gs = petviashvili_solve(&params, &grid, &ctx.cfg.ground_state.solver_config())?;
    let oracle = closed_form_oracle(&params, &grid).map(|q| gs.profile.max_abs_diff(&q));
    let hash = ctx.provenance.config_hash.clone();
    let path = save_ground_state(ctx.out_dir(), "ground_state", &gs, |m| {
        m.oracle_linf_error = oracle;
        m.config_hash = Some(hash);
    })?;
    println!(
        "ground state beta={} k={}: {} iterations, residual {:.3e}, mass {:.12}, sharpness gap {:.3e}",
        params.beta(),
        params.k(),
        gs.iterations,
        gs.residual,
        gs.mass,
        gs.sharpness_gap
    );
    if let Some(e) = oracle {
        println!("linf error vs closed form: {e:.3e}");
    }
    if !gs.identity_report.trusted {
        println!(
            "note: profile has not decayed at the box edge; identity residuals are box-limited"
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
