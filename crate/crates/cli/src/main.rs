use std::path::PathBuf;
use std::process::ExitCode;

use atomcav_cli::commands::{cmd_evolve, cmd_steady, cmd_sweep, write_artifact};
use atomcav_cli::{CliError, ConfigError, Format, Preset, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Two atoms in a thermally driven leaky cavity.
#[derive(Parser)]
#[command(name = "atomcav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve |g, g, 0⟩ and write one row per recorded time.
    Evolve(Common),
    /// Solve for the steady state.
    Steady(Common),
    /// Evaluate the concurrence over a parameter grid.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Figure preset for sweeps: fig2, fig3 or fig4.
    #[arg(long)]
    preset: Option<String>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Photon-number cutoff.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Override a configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

/// Defaults, then preset, then config file, then `--cutoff`, then `--set`.
fn load(common: &Common, is_sweep: bool) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.preset {
        Some(name) if is_sweep => RunConfig::from_preset(name.parse::<Preset>()?),
        Some(_) => return Err(ConfigError::Usage("--preset applies to `sweep` only".into()).into()),
        None => RunConfig::default(),
    };
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        cfg.apply_document(&text)?;
    }
    if let Some(cutoff) = common.cutoff {
        cfg.system.cutoff = cutoff;
    }
    for assignment in &common.set {
        cfg.apply_override(assignment)?;
    }
    if let Some(format) = &common.format {
        cfg.format = format.parse::<Format>()?;
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    if common.workers == Some(0) {
        return Err(ConfigError::Usage("--workers must be at least 1".into()).into());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, is_sweep) = match &cli.command {
        Command::Evolve(c) | Command::Steady(c) => (c, false),
        Command::Sweep(c) => (c, true),
    };
    let cfg = load(common, is_sweep)?;
    let artifact = match cli.command {
        Command::Evolve(_) => cmd_evolve(&cfg)?,
        Command::Steady(_) => cmd_steady(&cfg)?,
        Command::Sweep(_) => cmd_sweep(&cfg, common.workers)?,
    };
    for note in &artifact.notes {
        eprintln!("note: {note}");
    }
    write_artifact(&artifact, cfg.out.as_deref(), cfg.format)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
