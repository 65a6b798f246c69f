//! Run configuration: one TOML document, versioned, unknown keys rejected.
//!
//! ```toml
//! schema_version = 1
//!
//! [model]
//! beta = 1.0
//! k = 5
//!
//! [grid]
//! n_points = 32768
//! length = 200.0
//!
//! [ground_state]            # all keys optional
//! tolerance = 1e-12
//! initial_guess = "gaussian"  # or "closed_form"
//! load = "out/ground_state.json"
//!
//! [initial_data]            # evolve only
//! kind = "soliton"          # zero | gaussian | sech | soliton | file
//! lambda = 0.5
//!
//! [evolution]               # see EvolutionConfig
//! t_end = 1.0
//! adaptive = true
//!
//! [threshold]
//! amplitude_list = [0.25, 0.5, 0.75]
//! evolve = false
//!
//! [sweep]
//! beta = [1.25, 1.5]
//! k = [4, 5]
//! lambda = [0.5, 1.0]
//!
//! [verify]
//! resolution = "quick"
//! checks = ["barrier"]
//!
//! [output]
//! directory = "out"
//! formats = ["json", "csv"]
//! ```

use std::path::{Path, PathBuf};

use dgbo_core::checks::{Resolution, SuiteConfig};
use dgbo_core::evolution::EvolutionConfig;
use dgbo_core::ground_state::{InitialGuess, PetviashviliConfig};
use dgbo_core::{Grid, ModelParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exit::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: Option<ModelParams>,
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub ground_state: GroundStateSection,
    pub initial_data: Option<InitialData>,
    #[serde(default)]
    pub evolution: EvolutionConfig,
    #[serde(default)]
    pub threshold: ThresholdSection,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: None,
            grid: None,
            ground_state: GroundStateSection::default(),
            initial_data: None,
            evolution: EvolutionConfig::default(),
            threshold: ThresholdSection::default(),
            sweep: None,
            verify: VerifySection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_points: usize,
    pub length: f64,
}

impl GridSection {
    pub fn build(&self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.n_points, self.length)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GuessKind {
    #[default]
    Gaussian,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundStateSection {
    pub tolerance: f64,
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    pub stabilization_exponent: Option<f64>,
    pub initial_guess: GuessKind,
    /// Reuse a saved ground state instead of solving.
    pub load: Option<PathBuf>,
}

impl Default for GroundStateSection {
    fn default() -> Self {
        let d = PetviashviliConfig::default();
        Self {
            tolerance: d.tolerance,
            residual_tolerance: d.residual_tolerance,
            max_iterations: d.max_iterations,
            stabilization_exponent: None,
            initial_guess: GuessKind::Gaussian,
            load: None,
        }
    }
}

impl GroundStateSection {
    pub fn solver_config(&self) -> PetviashviliConfig {
        PetviashviliConfig {
            tolerance: self.tolerance,
            residual_tolerance: self.residual_tolerance,
            max_iterations: self.max_iterations,
            stabilization_exponent: self.stabilization_exponent,
            initial_guess: match self.initial_guess {
                GuessKind::Gaussian => InitialGuess::GaussianBump,
                GuessKind::ClosedForm => InitialGuess::ClosedFormSeed,
            },
        }
    }
}

fn zero() -> f64 {
    0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Zero {},
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default = "zero")]
        center: f64,
    },
    Sech {
        amplitude: f64,
        width: f64,
        #[serde(default = "zero")]
        center: f64,
    },
    /// `lambda * Q` for the ground state of the configured model.
    Soliton {
        lambda: f64,
    },
    /// A field dump as written by the ground-state or evolve commands.
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSection {
    pub amplitude_list: Vec<f64>,
    /// Also evolve each admissible `lambda Q` and check the a-priori bound.
    pub evolve: bool,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self {
            amplitude_list: vec![0.5],
            evolve: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub beta: Vec<f64>,
    pub k: Vec<u32>,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub resolution: Resolution,
    pub seed: u64,
    pub random_fields: usize,
    pub linear_group_cases: usize,
    pub barrier_cases: usize,
    /// Subset of checks to run; all when absent.
    pub checks: Option<Vec<String>>,
}

impl Default for VerifySection {
    fn default() -> Self {
        let d = SuiteConfig::default();
        Self {
            resolution: d.resolution,
            seed: d.seed,
            random_fields: d.random_fields,
            linear_group_cases: d.linear_group_cases,
            barrier_cases: d.barrier_cases,
            checks: None,
        }
    }
}

impl VerifySection {
    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            resolution: self.resolution,
            seed: self.seed,
            random_fields: self.random_fields,
            linear_group_cases: self.linear_group_cases,
            barrier_cases: self.barrier_cases,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("dgbo-out"),
            formats: vec![Format::Json, Format::Csv],
        }
    }
}

impl OutputSection {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Relative file references are taken relative to the config file.
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.ground_state.load.as_mut() {
            fix(p);
        }
        if let Some(InitialData::File { path }) = self.initial_data.as_mut() {
            fix(path);
        }
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        self.model
            .ok_or_else(|| CliError::Usage("config needs a [model] block".into()))
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        self.grid
            .ok_or_else(|| CliError::Usage("config needs a [grid] block".into()))?
            .build()
    }

    /// Checks that referenced files exist and the output directory is
    /// writable, creating it if needed.
    pub fn validate_environment(&self) -> Result<(), CliError> {
        let mut files: Vec<&Path> = Vec::new();
        if let Some(p) = &self.ground_state.load {
            files.push(p);
        }
        if let Some(InitialData::File { path }) = &self.initial_data {
            files.push(path);
        }
        for f in files {
            if !f.is_file() {
                return Err(CliError::Usage(format!(
                    "referenced file {} does not exist",
                    f.display()
                )));
            }
        }
        let dir = &self.output.directory;
        std::fs::create_dir_all(dir).map_err(|e| {
            CliError::Usage(format!(
                "cannot create output directory {}: {e}",
                dir.display()
            ))
        })?;
        let probe = dir.join(".dgbo-write-probe");
        std::fs::write(&probe, b"")
            .and_then(|_| std::fs::remove_file(&probe))
            .map_err(|e| {
                CliError::Usage(format!(
                    "output directory {} is not writable: {e}",
                    dir.display()
                ))
            })?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, with the output location blanked
    /// so that the same run written to two places hashes the same.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output.directory = PathBuf::new();
        let canonical = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let c = RunConfig::parse("schema_version = 1\n[model]\nbeta = 1.5\nk = 4\n").unwrap();
        assert_eq!(c.model().unwrap(), ModelParams::new(1.5, 4).unwrap());
        assert_eq!(c.threshold.amplitude_list, vec![0.5]);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = RunConfig::parse("schema_version = 1\n[model]\nbeta = 1.5\nk = 4\nkk = 1\n");
        assert!(matches!(err, Err(CliError::Usage(_))));
        let err = RunConfig::parse("schema_version = 1\n[evolution]\ndtt = 0.1\n");
        assert!(err.is_err());
        let err = RunConfig::parse("schema_version = 1\n[initial_data]\nkind = \"zero\"\nx = 1\n");
        assert!(err.is_err());
    }

    #[test]
    fn schema_version_is_checked() {
        assert!(RunConfig::parse("schema_version = 2\n").is_err());
        assert!(RunConfig::parse("[model]\nbeta = 1.0\nk = 1\n").is_err());
    }

    #[test]
    fn invalid_model_is_rejected() {
        assert!(RunConfig::parse("schema_version = 1\n[model]\nbeta = 1.0\nk = 0\n").is_err());
        assert!(RunConfig::parse("schema_version = 1\n[model]\nbeta = 2.5\nk = 3\n").is_err());
    }

    #[test]
    fn initial_data_variants() {
        let c = RunConfig::parse(
            "schema_version = 1\n[initial_data]\nkind = \"gaussian\"\namplitude = 0.3\nwidth = 2.0\n",
        )
        .unwrap();
        assert_eq!(
            c.initial_data,
            Some(InitialData::Gaussian {
                amplitude: 0.3,
                width: 2.0,
                center: 0.0
            })
        );
    }

    #[test]
    fn hash_ignores_output_directory() {
        let mut a = RunConfig::default();
        let mut b = RunConfig::default();
        a.output.directory = "x".into();
        b.output.directory = "y".into();
        assert_eq!(a.hash(), b.hash());
        b.verify.seed += 1;
        assert_ne!(a.hash(), b.hash());
    }
}
