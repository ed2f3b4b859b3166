use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use classent_cli::commands::{chsh_text, correlate_csv, correlate_text, report_text, sweep_csv, sweep_rows};
use classent_cli::exit;
use classent_cli::scenario::{load_scenario, ConfigError, Scenario};
use classent_cli::verify;

#[derive(Parser)]
#[command(name = "classent", version, about = "Two-source classical entanglement bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override a scenario key, e.g. `--set phases.theta1=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario, ConfigError> {
        load_scenario(self.config.as_deref(), &self.overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalized correlation by operator expectation and closed form.
    Correlate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Also write a one-row CSV here (defaults to the scenario's `output`).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a parameter sweep and write CSV.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// CSV destination; `-` or absent with no scenario `output` means stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// CHSH-type functionals at the fixed angle sets and their scanned maxima.
    Chsh,
    /// Run every cross-check; exit status 1 if any fails.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Seed for randomized checks (defaults to the scenario's `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Correlation, transfer-chain brackets and the signed-sum identity.
    Report {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

fn usage(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit::USAGE)
}

fn write_output(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text),
        _ => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Correlate { scenario, output } => {
            let sc = match scenario.load() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print!("{}", correlate_text(&sc).1);
            if let Some(path) = output.or_else(|| sc.output.clone()) {
                if let Err(e) = std::fs::write(&path, correlate_csv(&sc)) {
                    return usage(format!("cannot write {}: {e}", path.display()));
                }
            }
        }
        Command::Sweep { scenario, output } => {
            let sc = match scenario.load() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let Some(rows) = sweep_rows(&sc) else {
                return usage("sweep requires a [sweep] block");
            };
            let path = output.or_else(|| sc.output.clone());
            if let Err(e) = write_output(path.as_deref(), &sweep_csv(&rows)) {
                let shown = path.map(|p| p.display().to_string()).unwrap_or_else(|| "stdout".into());
                return usage(format!("cannot write {shown}: {e}"));
            }
        }
        Command::Chsh => print!("{}", chsh_text()),
        Command::Verify { scenario, seed } => {
            let sc = match scenario.load() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let report = verify::run(seed.unwrap_or(sc.seed));
            print!("{}", report.render());
            if !report.passed() {
                return ExitCode::from(exit::CHECK_FAILURE);
            }
        }
        Command::Report { scenario } => {
            let sc = match scenario.load() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print!("{}", report_text(&sc));
        }
    }
    ExitCode::from(exit::PASS)
}
