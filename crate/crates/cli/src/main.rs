use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgbo_cli::commands::{self, Context, VerifyArgs};
use dgbo_cli::config::RunConfig;
use dgbo_cli::exit::CliError;

#[derive(Parser)]
#[command(
    name = "dgbo",
    version,
    about = "Generalized Benjamin-Ono toolkit: ground states, evolution, threshold checks"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "DGBO_CONFIG")]
    config: Option<PathBuf>,
    /// Overrides `output.directory`.
    #[arg(long, global = true, env = "DGBO_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "DGBO_THREADS")]
    threads: Option<usize>,
    /// Overrides `verify.seed`.
    #[arg(long, global = true, env = "DGBO_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the ground state Q and report its diagnostics.
    GroundState,
    /// Evolve the configured initial data.
    Evolve,
    /// Check the sub-threshold conditions for lambda Q.
    Threshold,
    /// Threshold reports over a beta x k x lambda grid.
    Sweep,
    /// Run the built-in verification suite.
    Verify {
        /// Smaller boxes and shorter runs; limits scale accordingly.
        #[arg(long)]
        quick: bool,
        /// Run only the named check (repeatable).
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        /// Previous verify.json whose digest must be reproduced.
        #[arg(long, value_name = "PATH")]
        compare: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = cli.output_dir {
        cfg.output.directory = dir;
    }
    if let Some(seed) = cli.seed {
        cfg.verify.seed = seed;
    }
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let verify_args = match &cli.command {
        Command::Verify {
            quick,
            checks,
            compare,
        } => {
            let args = VerifyArgs {
                quick: *quick,
                checks: checks.clone(),
                compare: compare.clone(),
            };
            args.apply(&mut cfg);
            Some(args)
        }
        _ => None,
    };
    cfg.validate_environment()?;
    let ctx = Context::new(cfg, cli.threads);
    match cli.command {
        Command::GroundState => commands::ground_state(&ctx),
        Command::Evolve => commands::evolve(&ctx),
        Command::Threshold => commands::threshold(&ctx),
        Command::Sweep => commands::sweep(&ctx),
        Command::Verify { .. } => commands::verify(&ctx, &verify_args.unwrap_or_default()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dgbo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
