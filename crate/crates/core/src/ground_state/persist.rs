use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GroundState, ShapeReport};
use crate::error::{Error, Result};
use crate::functionals::IdentityReport;
use crate::io::{read_field_csv, write_field_csv, FIELD_DUMP_VERSION};
use crate::params::ModelParams;

pub const GROUND_STATE_FORMAT: &str = "dgbo-ground-state";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridMeta {
    pub n_points: usize,
    pub length: f64,
}

/// JSON sidecar describing a profile dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStateMeta {
    pub format: String,
    pub version: u32,
    pub params: ModelParams,
    pub grid: GridMeta,
    pub residual: f64,
    pub iterations: usize,
    pub mass: f64,
    pub energy: f64,
    pub h_half_beta: f64,
    pub sharpness_gap: f64,
    pub identity_report: IdentityReport,
    pub shape: ShapeReport,
    pub residual_history: Vec<f64>,
    /// File name of the `x,q` dump, relative to the sidecar.
    pub profile_file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_linf_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl GroundStateMeta {
    pub fn new(gs: &GroundState, profile_file: String) -> Self {
        Self {
            format: GROUND_STATE_FORMAT.into(),
            version: FIELD_DUMP_VERSION,
            params: gs.params,
            grid: GridMeta {
                n_points: gs.grid().n_points(),
                length: gs.grid().length(),
            },
            residual: gs.residual,
            iterations: gs.iterations,
            mass: gs.mass,
            energy: gs.energy,
            h_half_beta: gs.h_half_beta,
            sharpness_gap: gs.sharpness_gap,
            identity_report: gs.identity_report,
            shape: gs.shape,
            residual_history: gs.residual_history.clone(),
            profile_file,
            oracle_linf_error: None,
            config_hash: None,
        }
    }
}

/// Writes `<dir>/<stem>.json` and `<dir>/<stem>.csv`; returns the JSON path.
pub fn save_ground_state(
    dir: &Path,
    stem: &str,
    gs: &GroundState,
    decorate: impl FnOnce(&mut GroundStateMeta),
) -> Result<PathBuf> {
    let csv_name = format!("{stem}.csv");
    write_field_csv(
        BufWriter::new(File::create(dir.join(&csv_name))?),
        &gs.profile,
        "q",
    )?;
    let mut meta = GroundStateMeta::new(gs, csv_name);
    decorate(&mut meta);
    let json_path = dir.join(format!("{stem}.json"));
    serde_json::to_writer_pretty(BufWriter::new(File::create(&json_path)?), &meta)?;
    Ok(json_path)
}

/// Reads a sidecar and its dump, re-deriving all diagnostics from the samples.
pub fn load_ground_state(json_path: &Path) -> Result<(GroundState, GroundStateMeta)> {
    let meta: GroundStateMeta = serde_json::from_reader(BufReader::new(File::open(json_path)?))?;
    if meta.format != GROUND_STATE_FORMAT || meta.version != FIELD_DUMP_VERSION {
        return Err(Error::Format(format!(
            "unsupported ground-state file {} v{}",
            meta.format, meta.version
        )));
    }
    let dir = json_path.parent().unwrap_or_else(|| Path::new("."));
    let profile = read_field_csv(BufReader::new(File::open(dir.join(&meta.profile_file))?))?;
    if profile.grid().n_points() != meta.grid.n_points
        || (profile.grid().length() - meta.grid.length).abs() > 1e-9 * meta.grid.length
    {
        return Err(Error::Format(
            "profile dump does not match sidecar grid".into(),
        ));
    }
    let gs = GroundState::assess(
        profile,
        meta.params,
        meta.iterations,
        meta.residual_history.clone(),
    )?;
    Ok((gs, meta))
}
