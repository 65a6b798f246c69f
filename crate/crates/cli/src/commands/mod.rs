mod evolve;
mod ground_state;
mod sweep;
mod threshold;
mod verify;

pub use evolve::run as evolve;
pub use ground_state::run as ground_state;
pub use sweep::run as sweep;
pub use threshold::run as threshold;
pub use verify::{run as verify, VerifyArgs, VerifyArtifact};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dgbo_core::ground_state::{load_ground_state, petviashvili_solve, GroundState};
use dgbo_core::ModelParams;
use serde::Serialize;

use crate::config::RunConfig;
use crate::exit::CliError;
use crate::provenance::Provenance;

/// Everything a command needs: the resolved config and where to write.
pub struct Context {
    pub cfg: RunConfig,
    pub provenance: Provenance,
    pub threads: Option<usize>,
}

impl Context {
    pub fn new(cfg: RunConfig, threads: Option<usize>) -> Self {
        let provenance = Provenance::for_config(&cfg);
        Self {
            cfg,
            provenance,
            threads,
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.cfg.output.directory
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir().join(name)
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Loads the configured ground state or solves for it on the configured grid.
pub(crate) fn obtain_ground_state(
    cfg: &RunConfig,
    params: &ModelParams,
) -> Result<GroundState, CliError> {
    if let Some(path) = &cfg.ground_state.load {
        let (gs, _) = load_ground_state(path)?;
        if gs.params != *params {
            return Err(CliError::Usage(format!(
                "{} holds a ground state for {:?}, config asks for {:?}",
                path.display(),
                gs.params,
                params
            )));
        }
        return Ok(gs);
    }
    let grid = cfg.grid()?;
    Ok(petviashvili_solve(
        params,
        &grid,
        &cfg.ground_state.solver_config(),
    )?)
}
