use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use tether_guide_cli::commands;
use tether_guide_cli::config::LoadedConfig;
use tether_guide_cli::error::{CliError, EXIT_CONFIG};
use tether_guide_cli::presets;

#[derive(Parser)]
#[command(
    name = "tether-guide",
    version,
    about = "Simulation and stability analysis for cable-tethered human guidance",
    after_help = "CONFIG is a TOML file path or a bundled preset name (see `presets list`).\n\
                  Output directory: --out, else $TETHER_GUIDE_OUT, else the current directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write CSV, JSON summary and SVG plots.
    Run {
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write aggregate CSV and a scatter plot.
    Sweep {
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker pool size; defaults to the number of logical cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate the stability conditions of a scenario without running it.
    Check { config: String },
    /// Bundled presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    /// List all bundled presets.
    List,
}

fn out_dir(flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = flag
        .or_else(|| std::env::var_os("TETHER_GUIDE_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    Ok(dir)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { config, out } => match presets::resolve_config(&config)? {
            LoadedConfig::Scenario(s) => commands::cmd_run(&s, &out_dir(out)?),
            LoadedConfig::Sweep(_) => Err(CliError::Validation(format!(
                "'{config}' is a sweep configuration; use the sweep command"
            ))),
        },
        Command::Sweep { config, out, jobs } => match presets::resolve_config(&config)? {
            LoadedConfig::Sweep(spec) => commands::cmd_sweep(&spec, &out_dir(out)?, jobs),
            LoadedConfig::Scenario(_) => Err(CliError::Validation(format!(
                "'{config}' is a single scenario; use the run command"
            ))),
        },
        Command::Check { config } => match presets::resolve_config(&config)? {
            LoadedConfig::Scenario(s) => commands::cmd_check(&s),
            LoadedConfig::Sweep(spec) => {
                // Check every grid point; worst verdict wins.
                let mut code = 0;
                for law in &spec.sweep.laws {
                    for &v in &spec.sweep.values {
                        let scenario = spec.grid_scenario(law, v);
                        code = code.max(commands::cmd_check(&scenario)?);
                    }
                }
                Ok(code)
            }
        },
        Command::Presets { action: PresetsAction::List } => {
            print!("{}", presets::list());
            Ok(0)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(EXIT_CONFIG);
        }
    }
}
