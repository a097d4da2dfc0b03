//! Reference plans the optimizer is compared against.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cost::otn_count;
use crate::optimizer::{check_feasibility, ConstraintKind, Plan, PlanStatus, PlanningProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Optimized,
    AllFiber,
    AllMmwave,
    Heuristic,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Optimized,
        Strategy::AllFiber,
        Strategy::AllMmwave,
        Strategy::Heuristic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Optimized => "optimized",
            Strategy::AllFiber => "all-fiber",
            Strategy::AllMmwave => "all-mmwave",
            Strategy::Heuristic => "heuristic",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected optimized, all-fiber, all-mmwave or heuristic)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPlan {
    pub strategy: Strategy,
    pub plan: Plan,
    pub feasible: bool,
}

/// Builds a plan from per-AP fiber flags, deriving the DU variables from
/// their forcing rules, and records which constraints fail.
fn finish(problem: &PlanningProblem, strategy: Strategy, u: Vec<bool>) -> BenchmarkPlan {
    let w = problem.num_dus();
    let mut plan = Plan {
        z: u.iter().map(|&b| !b).collect(),
        u,
        v: vec![false; w],
        kappa: vec![0; w],
        objective: 0.0,
        status: PlanStatus::Feasible,
        infeasible_aps: Vec::new(),
        infeasible_dus: Vec::new(),
    };
    for c in &problem.clusters {
        let fiber = c.aps.iter().filter(|a| plan.u[a.ap_id]).count();
        plan.kappa[c.du_id] = otn_count(fiber, problem.cost.otn_split);
        plan.v[c.du_id] = fiber < c.aps.len();
    }
    plan.objective = problem
        .evaluate(&plan)
        .expect("benchmark plan matches problem")
        .objective;
    let report = check_feasibility(&plan, problem).expect("benchmark plan matches problem");
    for v in &report.violations {
        match v.constraint {
            ConstraintKind::ApCapacity => plan.infeasible_aps.push(v.index),
            ConstraintKind::DuBackhaul => plan.infeasible_dus.push(v.index),
            _ => unreachable!("benchmark plans satisfy structural constraints"),
        }
    }
    let feasible = report.is_feasible();
    if !feasible {
        plan.status = PlanStatus::Infeasible;
    }
    BenchmarkPlan {
        strategy,
        plan,
        feasible,
    }
}

/// Every AP on fiber.
pub fn plan_all_fiber(problem: &PlanningProblem) -> BenchmarkPlan {
    finish(problem, Strategy::AllFiber, vec![true; problem.num_aps])
}

/// Every AP on mmWave.
pub fn plan_all_mmwave(problem: &PlanningProblem) -> BenchmarkPlan {
    finish(problem, Strategy::AllMmwave, vec![false; problem.num_aps])
}

/// Starts from all-mmWave, moves APs the mmWave link cannot serve to fiber,
/// then moves randomly chosen mmWave APs of each under-provisioned DU to fiber
/// until the DU's backhaul share is covered or no mmWave AP is left.
pub fn plan_heuristic<R: Rng + ?Sized>(problem: &PlanningProblem, rng: &mut R) -> BenchmarkPlan {
    let mut u = vec![false; problem.num_aps];
    for c in &problem.clusters {
        for a in &c.aps {
            if a.threshold > a.mmwave_rate {
                u[a.ap_id] = true;
            }
        }
    }
    for c in &problem.clusters {
        let demand = problem.alpha * c.backhaul_rate;
        let rate = |u: &[bool]| -> f64 {
            c.aps
                .iter()
                .map(|a| if u[a.ap_id] { a.fiber_rate } else { a.mmwave_rate })
                .sum()
        };
        let mut mmw: Vec<usize> = c.aps.iter().map(|a| a.ap_id).filter(|&l| !u[l]).collect();
        while rate(&u) < demand - crate::optimizer::RATE_TOL && !mmw.is_empty() {
            let pick = mmw.remove(rng.random_range(0..mmw.len()));
            u[pick] = true;
        }
    }
    finish(problem, Strategy::Heuristic, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostParams;
    use crate::optimizer::{solve_bnb, ApLink, ClusterSpec};
    use crate::rng::{substream, Stream};

    fn problem(sizes: &[usize], threshold: f64, mmwave_rate: f64, backhaul: f64) -> PlanningProblem {
        let mut next = 0;
        let clusters = sizes
            .iter()
            .enumerate()
            .map(|(w, &n)| {
                let aps = (0..n)
                    .map(|i| ApLink {
                        ap_id: next + i,
                        distance_m: 10.0 * (i + 1) as f64,
                        threshold,
                        fiber_rate: 10e9,
                        mmwave_rate,
                    })
                    .collect();
                next += n;
                ClusterSpec { du_id: w, backhaul_rate: backhaul, aps }
            })
            .collect();
        PlanningProblem::new(next, clusters, CostParams::default(), 0.7, 1e-6).unwrap()
    }

    #[test]
    fn all_fiber_otn_ceiling() {
        let p = problem(&[16, 17], 1e9, 2e9, 1e9);
        let b = plan_all_fiber(&p);
        assert!(b.feasible);
        assert_eq!(b.plan.kappa, vec![1, 2]);
        assert_eq!(b.plan.v, vec![false, false]);
        assert!(b.plan.z.iter().all(|&z| !z));
        let trench: f64 = p.distances().iter().map(|d| 26.0 * d).sum();
        assert_eq!(b.plan.objective, 33.0 * 8787.0 + trench + 3.0 * 61727.0);
    }

    #[test]
    fn all_mmwave_cost_and_shortfall() {
        let p = problem(&[5, 7], 1e9, 2e9, 1e9);
        let b = plan_all_mmwave(&p);
        assert!(b.feasible);
        assert_eq!(b.plan.objective, 12.0 * 19_000.0 + 2.0 * 34_500.0);
        assert_eq!(b.plan.kappa, vec![0, 0]);
        assert!(b.plan.u.iter().all(|&u| !u));

        let mut q = p.clone();
        q.clusters[1].aps[3].threshold = 3e9;
        let b = plan_all_mmwave(&q);
        assert!(!b.feasible);
        assert_eq!(b.plan.infeasible_aps, vec![8]);
        assert_eq!(b.plan.status, PlanStatus::Infeasible);
    }

    #[test]
    fn heuristic_without_transitions_is_all_mmwave() {
        let p = problem(&[6, 6], 1e9, 2e9, 1e9);
        let mut rng = substream(1, Stream::Heuristic, 0);
        let h = plan_heuristic(&p, &mut rng);
        assert_eq!(h.plan, plan_all_mmwave(&p).plan);
    }

    #[test]
    fn heuristic_forced_switch_only() {
        let mut p = problem(&[6], 1e9, 2e9, 1e9);
        p.clusters[0].aps[4].threshold = 5e9;
        let h = plan_heuristic(&p, &mut substream(1, Stream::Heuristic, 0));
        assert!(h.feasible);
        let fiber: Vec<usize> = (0..6).filter(|&l| h.plan.u[l]).collect();
        assert_eq!(fiber, vec![4]);
        assert_eq!(h.plan.kappa, vec![1]);
        assert_eq!(h.plan.v, vec![true]);
    }

    #[test]
    fn heuristic_random_transitions_cover_backhaul() {
        // 10 mmWave APs at 2 Gbps give 20 Gbps; demand is 0.7 * 40 = 28 Gbps,
        // so exactly one switch (+8 Gbps) is needed.
        let p = problem(&[10], 1e9, 2e9, 40e9);
        let a = plan_heuristic(&p, &mut substream(5, Stream::Heuristic, 0));
        let b = plan_heuristic(&p, &mut substream(5, Stream::Heuristic, 0));
        assert_eq!(a, b);
        assert!(a.feasible);
        assert_eq!(a.plan.fiber_count(), 1);
        let opt = solve_bnb(&p);
        assert!(opt.objective <= a.plan.objective);
    }

    #[test]
    fn heuristic_exhausted_is_infeasible() {
        let p = problem(&[3], 1e9, 2e9, 1000e9);
        let h = plan_heuristic(&p, &mut substream(5, Stream::Heuristic, 0));
        assert!(!h.feasible);
        assert_eq!(h.plan.fiber_count(), 3);
        assert_eq!(h.plan.infeasible_dus, vec![0]);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert!("fiber".parse::<Strategy>().is_err());
    }
}
