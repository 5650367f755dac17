//! Batch front-end: parses a JSON config, dispatches one command, and emits
//! deterministic JSON/CSV reports.
//!
//! Exit codes: 0 success, 1 a claim check produced a `fails` verdict,
//! 2 usage or configuration error, 3 a budget was exceeded.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ockham_core::experiments::Verdict;
use ockham_core::proxies::Population;
use ockham_core::SubsetMode;

use commands::{CliError, CommandOutput};
use config::{load_config, resolve, Overrides};
use output::{tool_info, Labels, OutDirLock, Report, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "ockham", version, about = "Finite-model workbench for abstraction layers, tasks, and policy-selection proxies")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Run seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Subset mode (overrides the config file).
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Task population (overrides the config file).
    #[arg(long, global = true, value_enum)]
    population: Option<PopulationArg>,

    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [FormatArg::Json, FormatArg::Csv])]
    format: Vec<FormatArg>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Enumerate the language of a vocabulary.
    Lang,
    /// Enumerate the task universe.
    Tasks,
    /// Compute the correct-policy set of a task literal.
    Policies,
    /// Check extension collapse under the full vocabulary.
    Prop1,
    /// Check the weakness/simplicity confounding fixture.
    Prop2,
    /// Score the proxy battery against the generalisation order.
    Proxies,
    /// Run the child-to-parent generalisation experiment.
    Genexp,
    /// Search for fully confounded vocabularies.
    Vocabsearch,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Lang => "lang",
            Command::Tasks => "tasks",
            Command::Policies => "policies",
            Command::Prop1 => "prop1",
            Command::Prop2 => "prop2",
            Command::Proxies => "proxies",
            Command::Genexp => "genexp",
            Command::Vocabsearch => "vocabsearch",
        }
    }

    fn default_population(self) -> Population {
        match self {
            Command::Genexp => Population::Solvable,
            _ => Population::All,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Strict,
    Lax,
}

#[derive(ValueEnum, Clone, Copy)]
enum PopulationArg {
    All,
    Solvable,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
}

impl std::fmt::Display for FormatArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let raw = load_config(cli.config.as_deref()).map_err(CliError::Config)?;
    let overrides = Overrides {
        seed: cli.seed,
        mode: cli.mode.map(|m| match m {
            ModeArg::Strict => SubsetMode::Strict,
            ModeArg::Lax => SubsetMode::Lax,
        }),
        population: cli.population.map(|p| match p {
            PopulationArg::All => Population::All,
            PopulationArg::Solvable => Population::Solvable,
        }),
    };
    let formats: Vec<String> = {
        let mut seen = Vec::new();
        for f in &cli.format {
            let name = f.to_string();
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
        seen
    };
    let cfg = resolve(
        raw,
        &overrides,
        &cli.out.display().to_string(),
        &formats,
        cli.command.default_population(),
    );

    let output: CommandOutput = match cli.command {
        Command::Lang => commands::run_lang(&cfg)?,
        Command::Tasks => commands::run_tasks(&cfg)?,
        Command::Policies => commands::run_policies(&cfg)?,
        Command::Prop1 => commands::run_prop1(&cfg)?,
        Command::Prop2 => commands::run_prop2()?,
        Command::Proxies => commands::run_proxies(&cfg)?,
        Command::Genexp => commands::run_genexp(&cfg)?,
        Command::Vocabsearch => commands::run_vocabsearch(&cfg)?,
    };

    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool: tool_info(),
        command: cli.command.name().to_string(),
        labels: Labels {
            subset_mode: cfg.subset_mode,
            population: cfg.population,
            distribution: output.distribution,
        },
        config: cfg,
        results: output.results,
        counterexamples: output.counterexamples,
    };

    let _lock = OutDirLock::acquire(&cli.out).map_err(CliError::Config)?;
    let written = output::write_artifacts(
        &cli.out,
        cli.command.name(),
        &report,
        Some(&output.csv),
        &report.config.formats,
    )
    .map_err(CliError::Config)?;
    for path in &written {
        eprintln!("wrote {}", path.display());
    }

    if output.budget_exhausted {
        eprintln!("note: search budget exhausted; results carry the incomplete flag");
        return Ok(ExitCode::from(3));
    }
    match output.claim {
        Some(Verdict::Fails) => Ok(ExitCode::from(1)),
        _ => Ok(ExitCode::SUCCESS),
    }
}
