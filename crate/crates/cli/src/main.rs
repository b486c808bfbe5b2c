//! `coherlab` command-line experiments.

mod config;
mod experiments;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{ConfigError, Experiment, Overrides};
use plot::PlotOutcome;

#[derive(Parser)]
#[command(name = "coherlab", version, about = "Boson and fermion coherence experiments on small Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    /// Also write a gnuplot script next to each CSV artifact
    #[arg(long)]
    plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// |γ(x,y)|² grid of a permutation-ordered fermion state
    Fig1(RunArgs),
    /// |Γ⁽²⁾(x,y,y,x)|² grid of a permutation-ordered fermion state
    Fig2(RunArgs),
    /// Normalized g⁽²⁾ grids of boson and fermion chaotic states
    ChaoticG2(RunArgs),
    /// Structural checks on a fixture set
    Props(RunArgs),
    /// Annihilation residual of the displaced fermion mode against |α|
    EpsScan(RunArgs),
    /// Write a gnuplot script for an existing artifact
    Plot {
        artifact: PathBuf,
    },
}

const EXIT_ERROR: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;

fn report_error(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(EXIT_ERROR)
}

fn print_plot(outcome: PlotOutcome) {
    match outcome {
        PlotOutcome::Script(path) => println!("wrote {}", path.display()),
        PlotOutcome::Skipped(why) => println!("no plot script: {why}"),
    }
}

fn run_experiment(experiment: Experiment, args: RunArgs) -> ExitCode {
    let config = match config::load(experiment, args.config.as_deref(), args.overrides) {
        Ok(c) => c,
        Err(ConfigError(msg)) => return report_error("config", msg),
    };
    let run = match experiments::run(&config) {
        Ok(r) => r,
        Err(e) => return report_error("run", format!("{e:#}")),
    };
    for artifact in &run.artifacts {
        if let Err(e) = output::write_artifact(artifact, &config) {
            return report_error("io", format!("{e:#}"));
        }
        println!("wrote {}", artifact.path.display());
    }
    match output::write_meta(&config, &run.artifacts, &run.tolerances, &run.summary) {
        Ok(path) => println!("wrote {}", path.display()),
        Err(e) => return report_error("io", format!("{e:#}")),
    }
    if args.plot {
        for artifact in &run.artifacts {
            match plot::emit_plot_script(&artifact.path) {
                Ok(outcome) => print_plot(outcome),
                Err(e) => return report_error("plot", format!("{e:#}")),
            }
        }
    }
    if run.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", json!({ "error": "check", "unexpected": run.summary.get("unexpected") }));
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error("usage", e.to_string()),
    };
    match cli.command {
        Command::Fig1(a) => run_experiment(Experiment::Fig1, a),
        Command::Fig2(a) => run_experiment(Experiment::Fig2, a),
        Command::ChaoticG2(a) => run_experiment(Experiment::ChaoticG2, a),
        Command::Props(a) => run_experiment(Experiment::Props, a),
        Command::EpsScan(a) => run_experiment(Experiment::EpsScan, a),
        Command::Plot { artifact } => match plot::emit_plot_script(&artifact) {
            Ok(outcome) => {
                print_plot(outcome);
                ExitCode::SUCCESS
            }
            Err(e) => report_error("plot", format!("{e:#}")),
        },
    }
}
