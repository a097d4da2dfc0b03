//! Acceptance criteria. Each test writes one `[PASS]`/`[FAIL]` line to
//! stderr (bypassing output capture) and fails if its criterion fails.

mod common;

use std::cell::Cell;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use common::*;
use fronthaul::benchmarks::Strategy;
use fronthaul::channel::{pathloss_los, pathloss_nlos};
use fronthaul::config::RunConfig;
use fronthaul::cost::{cost_breakdown, fiber_ap_cost, mmwave_ap_cost, ApTerm, CostParams, DuTerm};
use fronthaul::metrics::{monte_carlo, MonteCarloReport, RealizationRecord};
use fronthaul::optimizer::{solve_bnb, solve_cluster_bruteforce, PlanStatus};
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(id: u32, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] criterion {id:>2}: {detail}");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn default_sweep() -> &'static MonteCarloReport {
    static REPORT: OnceLock<MonteCarloReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        monte_carlo(&RunConfig::default(), jobs).expect("default sweep runs")
    })
}

/// Records of one realization keyed by strategy.
fn by_realization(records: &[RealizationRecord]) -> BTreeMap<(usize, String, usize), BTreeMap<Strategy, &RealizationRecord>> {
    let mut m: BTreeMap<_, BTreeMap<_, _>> = BTreeMap::new();
    for r in records {
        m.entry((r.num_dus, r.traffic_level.clone(), r.realization))
            .or_default()
            .insert(r.outcome.strategy, r);
    }
    m
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn criterion_01_solver_matches_enumeration() {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let checked = Cell::new(0usize);
    let feasible = Cell::new(0usize);
    let result = runner.run(&(proptest::num::u64::ANY, 1usize..=12), |(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, &[n]);
        let plan = solve_bnb(&p);
        let brute = solve_cluster_bruteforce(&p, 0).unwrap();
        checked.set(checked.get() + 1);
        if brute.feasible {
            feasible.set(feasible.get() + 1);
            proptest::prop_assert_eq!(plan.status, PlanStatus::Optimal);
            proptest::prop_assert!(
                rel_close(plan.objective, brute.objective, 1e-9),
                "bnb {} vs enumeration {}",
                plan.objective,
                brute.objective
            );
        } else {
            proptest::prop_assert_eq!(plan.status, PlanStatus::Infeasible);
        }
        Ok(())
    });
    let (checked, feasible) = (checked.get(), feasible.get());
    let pass = result.is_ok() && checked >= 1000;
    report(
        1,
        pass,
        &format!("{checked} clusters of 1..=12 APs ({feasible} feasible) match enumeration within 1e-9; {result:?}"),
    );
}

#[test]
fn criterion_02_decomposition_matches_joint_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut mismatches = Vec::new();
    let mut feasible = 0;
    let instances = 100;
    for i in 0..instances {
        let l = 2 + i % 15;
        let a = 1 + (i * 7) % (l - 1);
        let p = random_problem(&mut rng, &[a, l - a]);
        let plan = solve_bnb(&p);
        match joint_bruteforce(&p) {
            Some(best) => {
                feasible += 1;
                if plan.status != PlanStatus::Optimal || !rel_close(plan.objective, best, 1e-9) {
                    mismatches.push((i, plan.objective, best));
                }
            }
            None => {
                if plan.status != PlanStatus::Infeasible {
                    mismatches.push((i, plan.objective, f64::INFINITY));
                }
            }
        }
    }
    report(
        2,
        mismatches.is_empty(),
        &format!("{instances} W=2 instances with L<=16 ({feasible} feasible); mismatches {mismatches:?}"),
    );
}

#[test]
fn criterion_03_optimal_plans_are_feasible() {
    let r = default_sweep();
    let opt: Vec<_> = r
        .records
        .iter()
        .filter(|x| x.outcome.strategy == Strategy::Optimized)
        .collect();
    let bad: Vec<_> = opt
        .iter()
        .filter(|x| x.outcome.status != PlanStatus::Optimal || x.outcome.metrics.violations > 0)
        .map(|x| (x.num_dus, x.traffic_level.clone(), x.realization))
        .collect();
    let pass = r.failures.is_empty() && opt.len() == 3 * 3 * 20 && bad.is_empty();
    report(
        3,
        pass,
        &format!(
            "{} optimized plans, {} sweep failures, infeasible or non-optimal: {bad:?}",
            opt.len(),
            r.failures.len()
        ),
    );
}

#[test]
fn criterion_04_optimized_dominates() {
    let r = default_sweep();
    let mut checked = 0;
    let mut heuristic_feasible = 0;
    let mut violations = Vec::new();
    for (key, s) in by_realization(&r.records) {
        let opt = s[&Strategy::Optimized].outcome.metrics.tco_total;
        let fiber = s[&Strategy::AllFiber].outcome.metrics.tco_total;
        checked += 1;
        if opt > fiber {
            violations.push((key.clone(), "all-fiber", opt - fiber));
        }
        let h = &s[&Strategy::Heuristic].outcome.metrics;
        if h.feasible {
            heuristic_feasible += 1;
            if opt > h.tco_total {
                violations.push((key, "heuristic", opt - h.tco_total));
            }
        }
    }
    report(
        4,
        checked == 180 && violations.is_empty(),
        &format!("{checked} realizations ({heuristic_feasible} with feasible heuristic), violations {violations:?}"),
    );
}

fn optimized_fiber_share(r: &MonteCarloReport, w: usize, level: Option<&str>) -> f64 {
    mean(
        r.records
            .iter()
            .filter(|x| {
                x.outcome.strategy == Strategy::Optimized
                    && x.num_dus == w
                    && level.is_none_or(|l| x.traffic_level == l)
            })
            .map(|x| x.outcome.metrics.fiber_share),
    )
}

#[test]
fn criterion_05_fiber_share_non_decreasing_in_du_count() {
    let r = default_sweep();
    let shares: Vec<f64> = [2, 6, 10].iter().map(|&w| optimized_fiber_share(r, w, None)).collect();
    let per_level: Vec<String> = ["low", "medium", "high"]
        .iter()
        .map(|l| {
            let s: Vec<String> = [2, 6, 10]
                .iter()
                .map(|&w| format!("{:.3}", optimized_fiber_share(r, w, Some(l))))
                .collect();
            format!("{l} {}", s.join("/"))
        })
        .collect();
    let pass = shares.windows(2).all(|w| w[0] <= w[1]);
    report(
        5,
        pass,
        &format!(
            "mean optimized fiber share W=2/6/10: {:.4}/{:.4}/{:.4} (by level: {})",
            shares[0],
            shares[1],
            shares[2],
            per_level.join(", ")
        ),
    );
}

#[test]
fn criterion_06_fiber_dominant_with_two_dus() {
    let r = default_sweep();
    // The default configuration's hotspot count is the "medium" level.
    let defaults = RunConfig::default();
    let level = defaults
        .sweep
        .traffic_levels
        .iter()
        .find(|l| l.hotspots == defaults.scenario.hotspots)
        .expect("default hotspot count is a sweep level");
    let share = optimized_fiber_share(r, 2, Some(&level.name));
    report(
        6,
        share > 0.5,
        &format!(
            "mean optimized fiber share at W=2, {} hotspots: {share:.4} (required > 0.5; all levels pooled {:.4})",
            level.hotspots,
            optimized_fiber_share(r, 2, None)
        ),
    );
}

#[test]
fn criterion_07_surplus_and_mmwave_shortfall() {
    let r = default_sweep();
    let mut negative = Vec::new();
    let mut min_surplus = f64::INFINITY;
    for c in &r.cells {
        let s = c
            .strategy(Strategy::Optimized)
            .all
            .expect("optimized plans exist")
            .surplus_capacity
            .mean;
        min_surplus = min_surplus.min(s);
        if s < 0.0 {
            negative.push((c.num_dus, c.traffic_level.clone(), s));
        }
    }
    let short_high: Vec<_> = r
        .cells
        .iter()
        .filter(|c| c.traffic_level == "high")
        .filter(|c| c.strategy(Strategy::AllMmwave).feasible_count < c.realizations)
        .map(|c| c.num_dus)
        .collect();
    report(
        7,
        negative.is_empty() && !short_high.is_empty(),
        &format!(
            "min cell mean surplus {min_surplus:.4e} b/s, negative cells {negative:?}; \
             high-traffic cells with infeasible all-mmWave: W={short_high:?}"
        ),
    );
}

#[test]
fn criterion_08_pathloss_points() {
    let los = pathloss_los(100.0, 28.0, 0.0).unwrap();
    let nlos = pathloss_nlos(100.0, 28.0, 0.0).unwrap();
    let pass = (los - 103.344).abs() <= 1e-3 && (nlos - 125.144).abs() <= 1e-3;
    report(8, pass, &format!("LoS {los:.6} dB (103.344), NLoS {nlos:.6} dB (125.144), tol 1e-3"));
}

#[test]
fn criterion_09_cost_arithmetic() {
    let c = CostParams::default();
    let fiber0 = fiber_ap_cost(0.0, &c);
    let mmw = mmwave_ap_cost(&c);
    let one_du = cost_breakdown(
        &c,
        [ApTerm {
            fiber: true,
            mmwave: false,
            distance_m: 100.0,
        }],
        [DuTerm {
            antenna: false,
            otns: 1,
        }],
    )
    .objective;
    let pass = fiber0 == 8787.0 && mmw == 19000.0 && one_du == 73114.0;
    report(9, pass, &format!("fiber AP at 0 m {fiber0}, mmWave AP {mmw}, one fiber AP at 100 m with its DU {one_du}"));
}

fn run_sweep(config: &Path, out: &Path, jobs: &str) -> bool {
    Command::new(env!("CARGO_BIN_EXE_fronthaul"))
        .args(["sweep", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--jobs", jobs])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

#[test]
fn criterion_10_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"seed": 2024, "sweep": {"realizations": 3}}"#).unwrap();
    let runs = [("a", "1"), ("b", "1"), ("c", "4")];
    let ok = runs
        .iter()
        .all(|(name, jobs)| run_sweep(&config, &dir.path().join(name), jobs));
    let read = |run: &str, file: &str| std::fs::read(dir.path().join(run).join(file)).unwrap_or_default();
    let csv_same = ok && !read("a", "results.csv").is_empty() && read("a", "results.csv") == read("b", "results.csv");
    let json_same = ok && !read("a", "summary.json").is_empty() && read("a", "summary.json") == read("b", "summary.json");
    let jobs_same = ok && read("a", "summary.json") == read("c", "summary.json");
    report(
        10,
        csv_same && json_same && jobs_same,
        &format!("repeat CSV identical: {csv_same}, repeat JSON identical: {json_same}, --jobs 4 aggregates identical: {jobs_same}"),
    );
}
