use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use dgbo_core::checks::{check_names, CheckOutcome, Resolution, Suite, SuiteConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{write_json, Context};
use crate::config::RunConfig;
use crate::exit::CliError;
use crate::provenance::Provenance;

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs {
    pub quick: bool,
    /// Overrides `verify.checks` when non-empty.
    pub checks: Vec<String>,
    /// A previous `verify.json` whose digest must be reproduced.
    pub compare: Option<PathBuf>,
}

impl VerifyArgs {
    /// Folds the command-line selection into the config, so that the config
    /// hash describes the suite that actually runs.
    pub fn apply(&self, cfg: &mut RunConfig) {
        if self.quick {
            cfg.verify.resolution = Resolution::Quick;
        }
        if !self.checks.is_empty() {
            cfg.verify.checks = Some(self.checks.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArtifact {
    pub provenance: Provenance,
    pub suite: SuiteConfig,
    pub outcomes: Vec<CheckOutcome>,
    /// sha256 of the canonical JSON of `suite` and `outcomes`.
    pub digest: String,
}

pub fn digest(suite: &SuiteConfig, outcomes: &[CheckOutcome]) -> String {
    #[derive(Serialize)]
    struct Canonical<'a> {
        suite: &'a SuiteConfig,
        outcomes: &'a [CheckOutcome],
    }
    let bytes = serde_json::to_vec(&Canonical { suite, outcomes }).expect("outcomes serialize");
    hex::encode(Sha256::digest(&bytes))
}

fn selected(cfg: &RunConfig) -> Result<Vec<&'static str>, CliError> {
    let all = check_names();
    let Some(wanted) = &cfg.verify.checks else {
        return Ok(all);
    };
    if let Some(bad) = wanted.iter().find(|w| !all.contains(&w.as_str())) {
        return Err(CliError::Usage(format!(
            "unknown check `{bad}`; known checks: {}",
            all.join(", ")
        )));
    }
    Ok(all
        .into_iter()
        .filter(|n| wanted.iter().any(|w| w == n))
        .collect())
}

pub fn run(ctx: &Context, args: &VerifyArgs) -> Result<(), CliError> {
    let names = selected(&ctx.cfg)?;
    let previous: Option<VerifyArtifact> = match &args.compare {
        Some(path) => {
            let prev: VerifyArtifact =
                serde_json::from_reader(BufReader::new(File::open(path)?))
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if prev.provenance.config_hash != ctx.provenance.config_hash {
                return Err(CliError::Usage(format!(
                    "{} was produced from a different configuration ({} vs {})",
                    path.display(),
                    prev.provenance.config_hash,
                    ctx.provenance.config_hash
                )));
            }
            Some(prev)
        }
        None => None,
    };

    let suite_cfg = ctx.cfg.verify.suite_config();
    let mut suite = Suite::new(suite_cfg.clone());
    let mut outcomes = Vec::with_capacity(names.len());
    for name in names {
        let start = Instant::now();
        let outcome = suite.run(name)?;
        println!(
            "{} criterion {:>2} {name} ({:.1} s)",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.criterion,
            start.elapsed().as_secs_f64()
        );
        for m in outcome.failed_measurements() {
            let value = m.value.map_or("n/a".to_string(), |v| format!("{v:e}"));
            println!("     {}: {value} (limit {:e})", m.label, m.limit);
        }
        if let Some(e) = &outcome.error {
            println!("     error: {e}");
        }
        outcomes.push(outcome);
    }

    let artifact = VerifyArtifact {
        provenance: ctx.provenance.clone(),
        digest: digest(&suite_cfg, &outcomes),
        suite: suite_cfg,
        outcomes,
    };
    write_json(&ctx.out_path("verify.json"), &artifact)?;
    println!("digest {}", artifact.digest);

    if let Some(prev) = previous {
        if prev.digest != artifact.digest {
            return Err(CliError::Failed(format!(
                "digest {} does not reproduce {}",
                artifact.digest, prev.digest
            )));
        }
        println!("digest reproduced");
    }
    let failed = artifact.outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} check(s) failed")));
    }
    Ok(())
}
