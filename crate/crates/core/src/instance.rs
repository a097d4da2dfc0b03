//! One realization end to end: scenario, link budgets and planning problem.

use serde::{Deserialize, Serialize};

use crate::channel::{build_link_budgets, LinkBudget, MmWaveParams};
use crate::config::RunConfig;
use crate::error::Result;
use crate::optimizer::{build_problem, PlanningProblem};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub scenario: Scenario,
    pub links: Vec<LinkBudget>,
}

impl Instance {
    /// Draws the scenario and prices every AP-DU link. Uses
    /// `cfg.scenario` as is; the sweep overrides DU and hotspot counts before
    /// calling this.
    pub fn generate(cfg: &RunConfig, seed: u64) -> Result<Self> {
        let scenario = Scenario::generate(&cfg.scenario, cfg.solver.alpha, seed)?;
        let links = build_link_budgets(
            &scenario,
            &MmWaveParams::from(&cfg.channel),
            cfg.channel.fiber_rate_bps,
            seed,
        )?;
        Ok(Self { scenario, links })
    }

    pub fn problem(&self, cfg: &RunConfig) -> Result<PlanningProblem> {
        Ok(build_problem(
            &self.scenario,
            &self.links,
            &cfg.cost,
            cfg.solver.alpha,
            cfg.solver.epsilon,
        )?
        .with_integrality_tol(cfg.solver.integrality_tol))
    }
}
