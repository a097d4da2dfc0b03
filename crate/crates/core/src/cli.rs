//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration or input, 3 the optimized
//! solve is infeasible (the plan is still written), 4 I/O failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::benchmarks::{plan_all_fiber, plan_all_mmwave, plan_heuristic, Strategy};
use crate::config::RunConfig;
use crate::error::Error;
use crate::instance::Instance;
use crate::io::{write_atomic, write_json, PlanDocument, ScenarioDocument};
use crate::metrics::{monte_carlo, write_csv, MonteCarloReport};
use crate::optimizer::{solve_bnb, PlanStatus};
use crate::rng::{substream, Stream};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fronthaul", version, about = "Hybrid fiber/mmWave fronthaul planning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a scenario with link budgets.
    Generate {
        /// JSON run configuration; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve a scenario to optimality.
    Solve {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a comparison plan for a scenario.
    Benchmark {
        scenario: PathBuf,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        /// Seed for the heuristic's random choices; defaults to the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the Monte-Carlo sweep and write results.csv and summary.json.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Csv(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<RunConfig, Error> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p).map_err(|e| match e {
            Error::Config(c) if c.field == "<document>" => Error::Config(crate::error::ConfigError::new(
                format!("{}", p.display()),
                c.message,
            )),
            other => other,
        })?,
        None => RunConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn cmd_generate(config: Option<&Path>, out: &Path, seed: Option<u64>) -> Result<i32, Error> {
    let cfg = load_config(config, seed)?;
    let instance = Instance::generate(&cfg, cfg.seed)?;
    write_json(out, &ScenarioDocument::new(cfg, instance))?;
    Ok(EXIT_OK)
}

fn cmd_solve(scenario: &Path, out: &Path) -> Result<i32, Error> {
    let doc = ScenarioDocument::load(scenario)?;
    let problem = doc.problem()?;
    let plan = solve_bnb(&problem);
    write_json(out, &PlanDocument::new(Strategy::Optimized, &plan, &problem)?)?;
    if plan.status == PlanStatus::Infeasible {
        eprintln!(
            "infeasible: APs {:?} cannot meet their thresholds, DUs {:?} cannot meet backhaul",
            plan.infeasible_aps, plan.infeasible_dus
        );
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_benchmark(scenario: &Path, strategy: Strategy, seed: Option<u64>, out: &Path) -> Result<i32, Error> {
    if strategy == Strategy::Optimized {
        return cmd_solve(scenario, out);
    }
    let doc = ScenarioDocument::load(scenario)?;
    let problem = doc.problem()?;
    let bench = match strategy {
        Strategy::AllFiber => plan_all_fiber(&problem),
        Strategy::AllMmwave => plan_all_mmwave(&problem),
        Strategy::Heuristic => {
            let seed = seed.unwrap_or(doc.scenario.seed);
            plan_heuristic(&problem, &mut substream(seed, Stream::Heuristic, 0))
        }
        Strategy::Optimized => unreachable!(),
    };
    write_json(out, &PlanDocument::new(strategy, &bench.plan, &problem)?)?;
    if !bench.feasible {
        eprintln!("{strategy} plan is infeasible (recorded in output)");
    }
    Ok(EXIT_OK)
}

fn progress(report: &MonteCarloReport) {
    for c in &report.cells {
        let opt = c.strategy(Strategy::Optimized);
        let share = opt.all.map_or(f64::NAN, |m| m.fiber_share.mean);
        eprintln!(
            "cell W={} traffic={}: {} realizations, {} failed, optimized fiber share {:.3}",
            c.num_dus, c.traffic_level, c.realizations, c.failures, share
        );
    }
}

fn cmd_sweep(config: Option<&Path>, out: &Path, jobs: usize, seed: Option<u64>) -> Result<i32, Error> {
    let cfg = load_config(config, seed)?;
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let report = monte_carlo(&cfg, jobs)?;
    progress(&report);
    let mut csv = Vec::new();
    write_csv(&report, &mut csv)?;
    write_atomic(&out.join("results.csv"), &csv)?;
    write_json(&out.join("summary.json"), &report)?;
    Ok(EXIT_OK)
}

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Generate { config, out, seed } => cmd_generate(config.as_deref(), out, *seed),
        Command::Solve { scenario, out } => cmd_solve(scenario, out),
        Command::Benchmark {
            scenario,
            strategy,
            seed,
            out,
        } => cmd_benchmark(scenario, *strategy, *seed, out),
        Command::Sweep {
            config,
            out,
            jobs,
            seed,
        } => cmd_sweep(config.as_deref(), out, *jobs, *seed),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_strategy_is_a_usage_error() {
        assert_eq!(run(["fronthaul", "benchmark", "x.json", "--strategy", "fiber", "--out", "y"]), EXIT_CONFIG);
    }

    #[test]
    fn io_errors_map_to_four() {
        let e = Error::Io {
            path: "x".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(exit_code(&e), EXIT_IO);
        assert_eq!(exit_code(&Error::NoHotspots), EXIT_CONFIG);
    }
}
