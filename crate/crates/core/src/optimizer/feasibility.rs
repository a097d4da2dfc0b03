use serde::{Deserialize, Serialize};

use super::{selected_rate, Plan, PlanningProblem, RATE_TOL};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Exactly one technology per AP.
    SingleTechnology,
    /// OTN count equals the rounded-up fiber load.
    OtnCount,
    /// Antenna array present iff some AP uses mmWave.
    MmwaveDevice,
    /// Selected rate covers the AP threshold.
    ApCapacity,
    /// Cluster rate covers the DU's share of backhaul.
    DuBackhaul,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintKind,
    /// AP id for per-AP constraints, DU id otherwise.
    pub index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// Selected rate minus threshold, by AP id (bits/s).
    pub ap_slack: Vec<f64>,
    /// Cluster rate minus `alpha * backhaul`, by DU id (bits/s).
    pub du_slack: Vec<f64>,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every constraint of the model against `plan`.
pub fn check_feasibility(plan: &Plan, problem: &PlanningProblem) -> Result<FeasibilityReport> {
    problem.check_dims(plan)?;
    let mut ap_slack = vec![0.0; problem.num_aps];
    let mut du_slack = vec![0.0; problem.num_dus()];
    let mut violations = Vec::new();
    let split = problem.cost.otn_split;

    for c in &problem.clusters {
        let w = c.du_id;
        let mut n_fiber: u64 = 0;
        let mut n_mmw: u64 = 0;
        let mut rate_sum = 0.0;
        for a in &c.aps {
            let (u, z) = (plan.u[a.ap_id], plan.z[a.ap_id]);
            if u == z {
                violations.push(Violation {
                    constraint: ConstraintKind::SingleTechnology,
                    index: a.ap_id,
                    detail: format!("fiber={u} mmwave={z}"),
                });
            }
            n_fiber += u as u64;
            n_mmw += z as u64;
            let r = selected_rate(a, u, z);
            rate_sum += r;
            ap_slack[a.ap_id] = r - a.threshold;
            if r < a.threshold - RATE_TOL {
                violations.push(Violation {
                    constraint: ConstraintKind::ApCapacity,
                    index: a.ap_id,
                    detail: format!("rate {r:.6e} below threshold {:.6e}", a.threshold),
                });
            }
        }

        let kappa = plan.kappa[w] as u64;
        let capacity = kappa * split as u64;
        let spare_ok = (capacity as f64 - n_fiber as f64) <= split as f64 * (1.0 - problem.epsilon);
        if capacity < n_fiber || !spare_ok {
            violations.push(Violation {
                constraint: ConstraintKind::OtnCount,
                index: w,
                detail: format!("{kappa} OTNs for {n_fiber} fiber APs at split {split}"),
            });
        }

        let v = plan.v[w] as u64;
        let size = c.aps.len() as u64;
        if v * size < n_mmw || v > n_mmw {
            violations.push(Violation {
                constraint: ConstraintKind::MmwaveDevice,
                index: w,
                detail: format!("antenna={} with {n_mmw} mmWave APs", plan.v[w]),
            });
        }

        let demand = problem.alpha * c.backhaul_rate;
        du_slack[w] = rate_sum - demand;
        if rate_sum < demand - RATE_TOL {
            violations.push(Violation {
                constraint: ConstraintKind::DuBackhaul,
                index: w,
                detail: format!("cluster rate {rate_sum:.6e} below {demand:.6e}"),
            });
        }
    }

    Ok(FeasibilityReport {
        ap_slack,
        du_slack,
        violations,
    })
}
