//! Per-plan metrics and the Monte-Carlo sweep.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{plan_all_fiber, plan_all_mmwave, plan_heuristic, Strategy};
use crate::config::{RunConfig, TrafficLevel};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::optimizer::{check_feasibility, selected_rate, solve_bnb, Plan, PlanStatus, PlanningProblem};
use crate::rng::{derive_seed, substream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanMetrics {
    pub tco_total: f64,
    pub tco_per_ap: f64,
    pub fiber_share: f64,
    pub mmwave_share: f64,
    /// Delivered rate minus summed AP thresholds, bits/s.
    pub surplus_capacity: f64,
    /// Sum of AP thresholds over the network, bits/s.
    pub sum_threshold: f64,
    /// Sum of AP thresholds per DU, averaged over DUs, bits/s.
    pub mean_cluster_threshold: f64,
    pub fiber_aps: usize,
    pub mmwave_aps: usize,
    pub feasible: bool,
    pub violations: usize,
}

/// Total selected rate minus total AP threshold.
pub fn surplus_capacity(plan: &Plan, problem: &PlanningProblem) -> Result<f64> {
    problem.check_dims(plan)?;
    let mut delivered = 0.0;
    let mut demand = 0.0;
    for c in &problem.clusters {
        for a in &c.aps {
            delivered += selected_rate(a, plan.u[a.ap_id], plan.z[a.ap_id]);
            demand += a.threshold;
        }
    }
    Ok(delivered - demand)
}

pub fn plan_metrics(plan: &Plan, problem: &PlanningProblem) -> Result<PlanMetrics> {
    let report = check_feasibility(plan, problem)?;
    let cost = problem.evaluate(plan)?;
    let l = problem.num_aps as f64;
    let sum_threshold: f64 = problem.thresholds().iter().sum();
    Ok(PlanMetrics {
        tco_total: cost.objective,
        tco_per_ap: cost.objective / l,
        fiber_share: plan.fiber_count() as f64 / l,
        mmwave_share: plan.mmwave_count() as f64 / l,
        surplus_capacity: surplus_capacity(plan, problem)?,
        sum_threshold,
        mean_cluster_threshold: sum_threshold / problem.num_dus() as f64,
        fiber_aps: plan.fiber_count(),
        mmwave_aps: plan.mmwave_count(),
        feasible: report.is_feasible(),
        violations: report.violations.len(),
    })
}

/// Seed of realization `r` in sweep cell `(num_dus, level_index)`.
pub fn realization_seed(seed: u64, num_dus: usize, level_index: usize, r: usize) -> u64 {
    derive_seed(&[seed, num_dus as u64, level_index as u64, r as u64])
}

/// The configuration a sweep cell runs with.
pub fn cell_config(cfg: &RunConfig, num_dus: usize, level: &TrafficLevel) -> RunConfig {
    let mut c = cfg.clone();
    c.scenario.num_dus = num_dus;
    c.scenario.hotspots = level.hotspots;
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub status: PlanStatus,
    pub metrics: PlanMetrics,
}

/// Solves one realization with all four strategies.
pub fn run_realization(cfg: &RunConfig, seed: u64) -> Result<Vec<StrategyOutcome>> {
    let instance = Instance::generate(cfg, seed)?;
    let problem = instance.problem(cfg)?;
    let optimized = solve_bnb(&problem);
    let fiber = plan_all_fiber(&problem);
    let mmwave = plan_all_mmwave(&problem);
    let heuristic = plan_heuristic(&problem, &mut substream(seed, Stream::Heuristic, 0));
    let plans = [
        (Strategy::Optimized, &optimized),
        (Strategy::AllFiber, &fiber.plan),
        (Strategy::AllMmwave, &mmwave.plan),
        (Strategy::Heuristic, &heuristic.plan),
    ];
    plans
        .into_iter()
        .map(|(strategy, plan)| {
            Ok(StrategyOutcome {
                strategy,
                status: plan.status,
                metrics: plan_metrics(plan, &problem)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub num_dus: usize,
    pub traffic_level: String,
    pub hotspots: usize,
    pub realization: usize,
    pub seed: u64,
    pub outcome: StrategyOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationFailure {
    pub num_dus: usize,
    pub traffic_level: String,
    pub realization: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self { mean, std })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub count: usize,
    pub tco_total: Stat,
    pub tco_per_ap: Stat,
    pub fiber_share: Stat,
    pub mmwave_share: Stat,
    pub surplus_capacity: Stat,
    pub sum_threshold: Stat,
    pub mean_cluster_threshold: Stat,
}

impl MetricStats {
    pub fn of(metrics: &[PlanMetrics]) -> Option<Self> {
        let col = |f: fn(&PlanMetrics) -> f64| -> Option<Stat> {
            Stat::of(&metrics.iter().map(f).collect::<Vec<_>>())
        };
        Some(Self {
            count: metrics.len(),
            tco_total: col(|m| m.tco_total)?,
            tco_per_ap: col(|m| m.tco_per_ap)?,
            fiber_share: col(|m| m.fiber_share)?,
            mmwave_share: col(|m| m.mmwave_share)?,
            surplus_capacity: col(|m| m.surplus_capacity)?,
            sum_threshold: col(|m| m.sum_threshold)?,
            mean_cluster_threshold: col(|m| m.mean_cluster_threshold)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: Strategy,
    pub feasible_count: usize,
    /// Over every realization that produced a plan.
    pub all: Option<MetricStats>,
    /// Over feasible plans only; absent when none was feasible.
    pub feasible: Option<MetricStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub num_dus: usize,
    pub traffic_level: String,
    pub hotspots: usize,
    pub realizations: usize,
    pub failures: usize,
    pub seeds: Vec<u64>,
    pub strategies: Vec<StrategySummary>,
}

impl CellSummary {
    pub fn strategy(&self, s: Strategy) -> &StrategySummary {
        self.strategies
            .iter()
            .find(|x| x.strategy == s)
            .expect("every strategy is summarized")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub seed: u64,
    pub realizations: usize,
    pub cells: Vec<CellSummary>,
    pub failures: Vec<RealizationFailure>,
    #[serde(skip)]
    pub records: Vec<RealizationRecord>,
}

impl MonteCarloReport {
    pub fn cell(&self, num_dus: usize, level: &str) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.num_dus == num_dus && c.traffic_level == level)
    }
}

fn summarize(
    num_dus: usize,
    level: &TrafficLevel,
    seeds: Vec<u64>,
    records: &[RealizationRecord],
    failures: usize,
) -> CellSummary {
    let strategies = Strategy::ALL
        .into_iter()
        .map(|s| {
            let all: Vec<PlanMetrics> = records
                .iter()
                .filter(|r| r.outcome.strategy == s)
                .map(|r| r.outcome.metrics)
                .collect();
            let ok: Vec<PlanMetrics> = all.iter().copied().filter(|m| m.feasible).collect();
            StrategySummary {
                strategy: s,
                feasible_count: ok.len(),
                all: MetricStats::of(&all),
                feasible: MetricStats::of(&ok),
            }
        })
        .collect();
    CellSummary {
        num_dus,
        traffic_level: level.name.clone(),
        hotspots: level.hotspots,
        realizations: seeds.len(),
        failures,
        seeds,
        strategies,
    }
}

/// Runs the sweep on up to `jobs` threads. Output does not depend on `jobs`.
pub fn monte_carlo(cfg: &RunConfig, jobs: usize) -> Result<MonteCarloReport> {
    cfg.validate()?;
    let sweep = &cfg.sweep;
    let mut tasks = Vec::new();
    for &w in &sweep.num_dus {
        for li in 0..sweep.traffic_levels.len() {
            for r in 0..sweep.realizations {
                tasks.push((w, li, r, realization_seed(cfg.seed, w, li, r)));
            }
        }
    }

    let run = |&(w, li, r, seed): &(usize, usize, usize, u64)| {
        let level = &sweep.traffic_levels[li];
        run_realization(&cell_config(cfg, w, level), seed).map_err(|e| RealizationFailure {
            num_dus: w,
            traffic_level: level.name.clone(),
            realization: r,
            seed,
            error: e.to_string(),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Dimension(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| tasks.par_iter().map(run).collect());

    let mut report = MonteCarloReport {
        seed: cfg.seed,
        realizations: sweep.realizations,
        cells: Vec::new(),
        failures: Vec::new(),
        records: Vec::new(),
    };
    let per_cell = sweep.realizations;
    for (chunk_tasks, chunk) in tasks.chunks(per_cell).zip(results.chunks(per_cell)) {
        let (w, li, _, _) = chunk_tasks[0];
        let level = &sweep.traffic_levels[li];
        let mut records = Vec::new();
        let mut failures = 0;
        for (&(_, _, r, seed), res) in chunk_tasks.iter().zip(chunk) {
            match res {
                Ok(outcomes) => records.extend(outcomes.iter().map(|o| RealizationRecord {
                    num_dus: w,
                    traffic_level: level.name.clone(),
                    hotspots: level.hotspots,
                    realization: r,
                    seed,
                    outcome: o.clone(),
                })),
                Err(f) => {
                    log::warn!("realization {r} of cell W={w} {} failed: {}", level.name, f.error);
                    report.failures.push(f.clone());
                    failures += 1;
                }
            }
        }
        let seeds = chunk_tasks.iter().map(|t| t.3).collect();
        report.cells.push(summarize(w, level, seeds, &records, failures));
        report.records.extend(records);
    }
    Ok(report)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: [&str; 18] = [
    "num_dus",
    "traffic_level",
    "hotspots",
    "realization",
    "seed",
    "strategy",
    "status",
    "feasible",
    "violations",
    "tco_total",
    "tco_per_ap",
    "fiber_share",
    "mmwave_share",
    "surplus_capacity_bps",
    "sum_threshold_bps",
    "mean_cluster_threshold_bps",
    "fiber_aps",
    "mmwave_aps",
];

/// Writes one row per realization and strategy.
pub fn write_csv<W: Write>(report: &MonteCarloReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in &report.records {
        let m = &rec.outcome.metrics;
        let status = serde_json::to_value(rec.outcome.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        w.write_record([
            rec.num_dus.to_string(),
            rec.traffic_level.clone(),
            rec.hotspots.to_string(),
            rec.realization.to_string(),
            rec.seed.to_string(),
            rec.outcome.strategy.to_string(),
            status,
            m.feasible.to_string(),
            m.violations.to_string(),
            fmt_f64(m.tco_total),
            fmt_f64(m.tco_per_ap),
            fmt_f64(m.fiber_share),
            fmt_f64(m.mmwave_share),
            fmt_f64(m.surplus_capacity),
            fmt_f64(m.sum_threshold),
            fmt_f64(m.mean_cluster_threshold),
            m.fiber_aps.to_string(),
            m.mmwave_aps.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
