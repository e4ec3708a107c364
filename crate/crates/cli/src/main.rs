use std::path::PathBuf;
use std::process::ExitCode;

use aupo_core::harness::config::load_json;
use aupo_core::harness::io::{read_csv, sibling_path, write_csv, write_json};
use aupo_core::harness::{
    compute_scores, run_bench, run_experiment, sweep, BenchConfig, ExperimentConfig, ExperimentOutput, ResultRecord,
    SweepConfig,
};
use aupo_core::theory::theory_table;
use aupo_core::{Error, Result};
use clap::{Args, Parser, Subcommand};

/// MCTS planning experiments with the AUPO decision policy.
#[derive(Parser)]
#[command(name = "plan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Results CSV.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write per-episode returns to `<out stem>.raw.csv`.
    #[arg(long)]
    emit_raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every agent of a config for every budget.
    Run(RunArgs),
    /// Run the Cartesian product of a parameter grid.
    Sweep(RunArgs),
    /// Pairings and relative-improvement scores from a results CSV.
    Scores {
        #[arg(long = "in")]
        input: PathBuf,
        /// Scores CSV; matrices and family summary go to `<out stem>.report.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decision times on random-walk states.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact, simulated and bounded abstraction probabilities.
    Theory {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        trials: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn write_output(out: &ExperimentOutput, args: &RunArgs) -> Result<()> {
    write_csv(&args.out, &out.records)?;
    if args.emit_raw {
        write_csv(&sibling_path(&args.out, "raw.csv"), &out.raw)?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let cfg: ExperimentConfig = load_json(&args.config)?;
            let out = run_experiment(&cfg, args.threads)?;
            write_output(&out, &args)
        }
        Command::Sweep(args) => {
            let cfg: SweepConfig = load_json(&args.config)?;
            let out = sweep(&cfg, args.threads)?;
            write_output(&out, &args)
        }
        Command::Scores { input, out } => {
            let records: Vec<ResultRecord> = read_csv(&input)?;
            let report = compute_scores(&records)?;
            write_csv(&out, &report.scores)?;
            write_json(&sibling_path(&out, "report.json"), &report)
        }
        Command::Bench { config, out } => {
            let cfg: BenchConfig = load_json(&config)?;
            write_csv(&out, &run_bench(&cfg)?)
        }
        Command::Theory {
            out,
            trials,
            epsilon,
            seed,
        } => {
            if trials == 0 {
                return Err(Error::Config("--trials must be positive".into()));
            }
            write_csv(&out, &theory_table(trials, epsilon, seed)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plan: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
