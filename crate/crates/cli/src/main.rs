// SPDX-License-Identifier: Apache-2.0

//! `kinflow`: runs flow experiments from a JSON config and writes results.
//!
//! Exit status: 0 on success, 1 on an invariant failure, runtime error or
//! bound violation, 2 on an invalid config or usage.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use kinflow::complexity::instance_seed;
use rayon::prelude::*;

use config::{ExperimentConfig, Scenario};
use scenario::{run_instance, Outcome};

/// Worker threads for instance execution; defaults to the number of cores.
const THREADS_ENV: &str = "KINFLOW_THREADS";

#[derive(Parser)]
#[command(
    name = "kinflow",
    version,
    about = "Kinematic gradient-flow experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every instance of a config and write manifest.json, records.csv and summary.json.
    Run { config: PathBuf },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Re-run one instance and print its CSV row.
    Replay {
        scenario: String,
        #[arg(value_name = "N")]
        n: usize,
        seed: u64,
        /// Tunables to use instead of the scenario defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    ExperimentConfig::load(path)
        .map_err(|e| usage(anyhow::anyhow!("invalid config {}: {e}", path.display())))
}

fn threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

fn report_problems(outcomes: &[Outcome], config: Option<&PathBuf>) -> bool {
    let suffix = config
        .map(|p| format!(" --config {}", p.display()))
        .unwrap_or_default();
    let mut bad = false;
    for o in outcomes {
        if let Some(reason) = &o.failure {
            bad = true;
            eprintln!(
                "invariant failure: scenario {} N={} seed={}: {reason}\n  replay: {}{suffix}",
                o.row.scenario,
                o.row.n,
                o.row.seed,
                output::replay_command(o)
            );
        } else if o.bound_violation() {
            bad = true;
            eprintln!(
                "bound violation: scenario {} N={} seed={}\n  replay: {}{suffix}",
                o.row.scenario,
                o.row.n,
                o.row.seed,
                output::replay_command(o)
            );
        }
    }
    bad
}

fn run(path: &PathBuf) -> Result<bool, Failure> {
    let cfg = load(path)?;
    let threads = threads().map_err(usage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Runtime(e.into()))?;
    let work: Vec<(usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&n| (0..cfg.instances_per_dim).map(move |i| (n, i)))
        .collect();
    let outcomes: Vec<Outcome> = pool.install(|| {
        work.par_iter()
            .map(|&(n, i)| run_instance(&cfg, n, i, instance_seed(cfg.seed, n, i)))
            .collect()
    });
    let summary = output::summary(&cfg, &outcomes);
    output::write_all(
        &cfg.output_dir,
        &output::manifest(&cfg, threads),
        &outcomes,
        &summary,
    )
    .with_context(|| format!("writing results to {}", cfg.output_dir.display()))
    .map_err(Failure::Runtime)?;
    let failures = summary["invariant_failures"].as_u64().unwrap_or(0);
    println!(
        "{}: {} instances, {} invariant failures, {} time-bound and {} path-bound violations; results in {}",
        cfg.scenario,
        outcomes.len(),
        failures,
        summary["time_bound_violations"],
        summary["path_bound_violations"],
        cfg.output_dir.display()
    );
    Ok(!report_problems(&outcomes, Some(path)))
}

fn replay(scenario: &str, n: usize, seed: u64, config: Option<&PathBuf>) -> Result<bool, Failure> {
    let Some(scenario) = Scenario::parse(scenario) else {
        let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
        return Err(usage(anyhow::anyhow!(
            "unknown scenario {scenario:?}; expected one of {}",
            names.join(", ")
        )));
    };
    let mut cfg = match config {
        Some(p) => load(p)?,
        None => ExperimentConfig::defaults(scenario),
    };
    cfg.scenario = scenario;
    cfg.dims = vec![n];
    cfg.validate()
        .map_err(|e| usage(anyhow::anyhow!("invalid replay arguments: {e}")))?;
    let outcome = run_instance(&cfg, n, 0, seed);
    println!(
        "{}\n{}",
        output::csv_header(),
        output::csv_row(&outcome.row)
    );
    eprintln!("{:?}", outcome.detail);
    Ok(!report_problems(std::slice::from_ref(&outcome), config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => run(config),
        Command::Validate { config } => load(config).map(|cfg| {
            println!("{}: valid {} config", config.display(), cfg.scenario);
            true
        }),
        Command::Replay {
            scenario,
            n,
            seed,
            config,
        } => replay(scenario, *n, *seed, config.as_ref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
