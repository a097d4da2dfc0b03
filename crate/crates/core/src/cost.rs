//! Total-cost-of-ownership model for fiber and mmWave fronthaul.
//!
//! Per-AP fiber cost is the ONU plus fiber O&M over the horizon plus trenching
//! proportional to the AP-DU distance. Each DU pays one OTN bundle per started
//! group of `otn_split` fiber APs. mmWave APs pay a receiver plus O&M, and a DU
//! with at least one mmWave AP pays for its antenna array once.

use serde::{Deserialize, Serialize};

use crate::channel::LinkBudget;
use crate::error::{ConfigError, Error, Result};
use crate::optimizer::Plan;
use crate::scenario::Scenario;

/// Monetary and technology parameters, in US dollars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    pub onu_cost: f64,
    pub fiber_om_annual: f64,
    /// Trenching and burial, per meter.
    pub trench_per_m: f64,
    /// OLT, MUX and auxiliary equipment, priced as one bundle per OTN.
    pub fiber_du_cost: f64,
    pub mmw_rx_cost: f64,
    pub mmw_om_annual: f64,
    pub mmw_du_cost: f64,
    pub years: u32,
    /// Fiber links served by one OTN (1:split PON).
    pub otn_split: u32,
    /// Carried for reporting only; no cost term uses it.
    pub du_pool_cost: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            onu_cost: 6_502.0,
            fiber_om_annual: 2_285.0,
            trench_per_m: 26.0,
            fiber_du_cost: 61_727.0,
            mmw_rx_cost: 6_000.0,
            mmw_om_annual: 13_000.0,
            mmw_du_cost: 34_500.0,
            years: 1,
            otn_split: 16,
            du_pool_cost: 91_035.0,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let money = [
            ("cost.onu_cost", self.onu_cost),
            ("cost.fiber_om_annual", self.fiber_om_annual),
            ("cost.trench_per_m", self.trench_per_m),
            ("cost.fiber_du_cost", self.fiber_du_cost),
            ("cost.mmw_rx_cost", self.mmw_rx_cost),
            ("cost.mmw_om_annual", self.mmw_om_annual),
            ("cost.mmw_du_cost", self.mmw_du_cost),
            ("cost.du_pool_cost", self.du_pool_cost),
        ];
        for (field, value) in money {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::new(field, format!("must be finite and >= 0, got {value}")));
            }
        }
        if self.years < 1 {
            return Err(ConfigError::new("cost.years", "must be at least 1"));
        }
        if self.otn_split < 1 {
            return Err(ConfigError::new("cost.otn_split", "must be at least 1"));
        }
        Ok(())
    }

    /// Distance-independent part of the per-AP fiber cost.
    pub fn fiber_ap_fixed(&self) -> f64 {
        self.onu_cost + self.years as f64 * self.fiber_om_annual
    }
}

/// Cost of connecting one AP over fiber at `distance_m` from its DU.
pub fn fiber_ap_cost(distance_m: f64, params: &CostParams) -> f64 {
    params.fiber_ap_fixed() + params.trench_per_m * distance_m
}

/// Cost of connecting one AP over mmWave.
pub fn mmwave_ap_cost(params: &CostParams) -> f64 {
    params.mmw_rx_cost + params.years as f64 * params.mmw_om_annual
}

/// Number of OTNs a DU needs for `fiber_aps` fiber connections.
pub fn otn_count(fiber_aps: usize, otn_split: u32) -> u32 {
    fiber_aps.div_ceil(otn_split as usize) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub fiber_total: f64,
    pub mmwave_total: f64,
    pub objective: f64,
}

/// One AP's decision: fiber flag, mmWave flag, and distance to its DU.
#[derive(Debug, Clone, Copy)]
pub struct ApTerm {
    pub fiber: bool,
    pub mmwave: bool,
    pub distance_m: f64,
}

/// One DU's decision: antenna-array flag and OTN count.
#[derive(Debug, Clone, Copy)]
pub struct DuTerm {
    pub antenna: bool,
    pub otns: u32,
}

/// Evaluates the joint objective term by term.
pub fn cost_breakdown(
    params: &CostParams,
    aps: impl IntoIterator<Item = ApTerm>,
    dus: impl IntoIterator<Item = DuTerm>,
) -> CostBreakdown {
    let mmw_ap = mmwave_ap_cost(params);
    let mut fiber_total = 0.0;
    let mut mmwave_total = 0.0;
    for ap in aps {
        if ap.fiber {
            fiber_total += fiber_ap_cost(ap.distance_m, params);
        }
        if ap.mmwave {
            mmwave_total += mmw_ap;
        }
    }
    for du in dus {
        fiber_total += du.otns as f64 * params.fiber_du_cost;
        if du.antenna {
            mmwave_total += params.mmw_du_cost;
        }
    }
    CostBreakdown {
        fiber_total,
        mmwave_total,
        objective: fiber_total + mmwave_total,
    }
}

/// Prices `plan` on a generated scenario. AP distances come from `links`.
pub fn evaluate_plan_cost(
    plan: &Plan,
    scenario: &Scenario,
    links: &[LinkBudget],
    params: &CostParams,
) -> Result<CostBreakdown> {
    let l = scenario.aps.len();
    let w = scenario.dus.len();
    if plan.u.len() != l || plan.z.len() != l {
        return Err(Error::Dimension(format!(
            "plan has {} fiber / {} mmWave flags for {l} APs",
            plan.u.len(),
            plan.z.len()
        )));
    }
    if plan.v.len() != w || plan.kappa.len() != w {
        return Err(Error::Dimension(format!(
            "plan has {} antenna / {} OTN entries for {w} DUs",
            plan.v.len(),
            plan.kappa.len()
        )));
    }
    let mut distance = vec![None; l];
    for link in links {
        if link.ap_id >= l {
            return Err(Error::Dimension(format!("link references AP {}", link.ap_id)));
        }
        distance[link.ap_id] = Some(link.distance_m);
    }
    let mut aps = Vec::with_capacity(l);
    for (id, d) in distance.into_iter().enumerate() {
        let distance_m =
            d.ok_or_else(|| Error::Dimension(format!("no link budget for AP {id}")))?;
        aps.push(ApTerm {
            fiber: plan.u[id],
            mmwave: plan.z[id],
            distance_m,
        });
    }
    let dus = plan
        .v
        .iter()
        .zip(&plan.kappa)
        .map(|(&antenna, &otns)| DuTerm { antenna, otns });
    Ok(cost_breakdown(params, aps, dus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_ap_cost_reference_values() {
        let p = CostParams::default();
        assert_eq!(fiber_ap_cost(0.0, &p), 8_787.0);
        assert_eq!(fiber_ap_cost(100.0, &p), 11_387.0);
        let bare = CostParams {
            trench_per_m: 0.0,
            fiber_om_annual: 0.0,
            ..p
        };
        assert_eq!(fiber_ap_cost(500.0, &bare), 6_502.0);
    }

    #[test]
    fn mmwave_ap_cost_reference_values() {
        let p = CostParams::default();
        assert_eq!(mmwave_ap_cost(&p), 19_000.0);
        assert_eq!(mmwave_ap_cost(&CostParams { years: 2, ..p.clone() }), 32_000.0);
        let no_om = CostParams {
            mmw_om_annual: 0.0,
            ..p
        };
        assert_eq!(mmwave_ap_cost(&no_om), 6_000.0);
    }

    #[test]
    fn otn_count_is_ceiling() {
        assert_eq!(otn_count(0, 16), 0);
        assert_eq!(otn_count(1, 16), 1);
        assert_eq!(otn_count(16, 16), 1);
        assert_eq!(otn_count(17, 16), 2);
    }

    #[test]
    fn joint_objective_examples() {
        let p = CostParams::default();
        let one_fiber = cost_breakdown(
            &p,
            [ApTerm { fiber: true, mmwave: false, distance_m: 100.0 }],
            [DuTerm { antenna: false, otns: 1 }],
        );
        assert_eq!(one_fiber.objective, 73_114.0);
        assert_eq!(one_fiber.mmwave_total, 0.0);

        let two_mmw = cost_breakdown(
            &p,
            [ApTerm { fiber: false, mmwave: true, distance_m: 50.0 }; 2],
            [DuTerm { antenna: true, otns: 0 }],
        );
        assert_eq!(two_mmw.objective, 72_500.0);
        assert_eq!(two_mmw.fiber_total, 0.0);

        let nothing = cost_breakdown(
            &p,
            [ApTerm { fiber: false, mmwave: false, distance_m: 50.0 }],
            [DuTerm { antenna: false, otns: 0 }],
        );
        assert_eq!(nothing.objective, 0.0);
    }

    #[test]
    fn negative_money_rejected() {
        let p = CostParams {
            trench_per_m: -1.0,
            ..CostParams::default()
        };
        assert_eq!(p.validate().unwrap_err().field, "cost.trench_per_m");
    }
}
