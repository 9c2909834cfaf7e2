use clap::{Parser, Subcommand};
use statedist_harness::config::{ScenarioConfig, ScenarioKind};
use statedist_harness::scenario::{emit_plots, run_scenario, RunOptions};
use statedist_harness::{reproduce, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "statedist",
    about = "Distances on classical and matrix state spaces: scenario runner and reproduction suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    /// Scenario file (TOML or JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; artifacts land under <out>/<scenario id>/.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the splitting-solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a classical (commutative) scenario.
    Classical(ScenarioArgs),
    /// Run a quantum (matrix-state) scenario.
    Quantum(ScenarioArgs),
    /// Run a topology-probe scenario.
    Topology(ScenarioArgs),
    /// Run a canned reproduction target and print its pass/fail table.
    Reproduce {
        /// One of: example1, example2, metricseq, midpoint, two-point-triple,
        /// shift, compact-family, ps-units.
        name: String,
        /// Optional directory for the target's report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the tables of a report.json as plot-ready CSV files.
    EmitPlots {
        /// Path to a report.json produced by a scenario run.
        report: PathBuf,
        #[arg(long, default_value = "plots")]
        out: PathBuf,
    },
}

fn run_kind(args: &ScenarioArgs, expected: ScenarioKind) -> Result<bool, HarnessError> {
    let config = ScenarioConfig::from_path(&args.config)?;
    if config.kind != expected {
        return Err(HarnessError::Config(format!(
            "config kind is '{}' but the subcommand expects '{expected}'",
            config.kind
        )));
    }
    let opts = RunOptions {
        out_dir: args.out.clone(),
        seed_override: args.seed,
        tol_override: args.tol,
    };
    let outcome = run_scenario(&config, &opts)?;
    println!(
        "scenario '{}': wrote {} and {}",
        config.id,
        outcome.csv_path.display(),
        outcome.report_path.display()
    );
    if !outcome.passed() {
        for failure in &outcome.report.failures {
            eprintln!("invariant failure: {failure}");
        }
    }
    Ok(outcome.passed())
}

fn run() -> Result<bool, HarnessError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Classical(args) => run_kind(&args, ScenarioKind::Classical),
        Command::Quantum(args) => run_kind(&args, ScenarioKind::Quantum),
        Command::Topology(args) => run_kind(&args, ScenarioKind::Topology),
        Command::Reproduce { name, out } => {
            let report = reproduce::reproduce(&name, out.as_deref())?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::EmitPlots { report, out } => {
            let written = emit_plots(&report, &out)?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
