//! JSON documents read and written by the command-line tool.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::benchmarks::Strategy;
use crate::channel::LinkBudget;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::optimizer::{check_feasibility, selected_rate, Plan, PlanStatus, PlanningProblem, Technology, Violation};
use crate::scenario::Scenario;

pub const FORMAT_VERSION: u32 = 1;

/// A generated realization together with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub format_version: u32,
    pub config: RunConfig,
    pub scenario: Scenario,
    pub links: Vec<LinkBudget>,
}

impl ScenarioDocument {
    pub fn new(config: RunConfig, instance: Instance) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            config,
            scenario: instance.scenario,
            links: instance.links,
        }
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::Dimension(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                doc.format_version
            )));
        }
        doc.config.validate()?;
        doc.scenario.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?, path)
    }

    pub fn instance(&self) -> Instance {
        Instance {
            scenario: self.scenario.clone(),
            links: self.links.clone(),
        }
    }

    pub fn problem(&self) -> Result<PlanningProblem> {
        self.instance().problem(&self.config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApEntry {
    pub id: usize,
    pub du: usize,
    pub technology: Option<Technology>,
    pub rate_bps: f64,
    pub threshold_bps: f64,
    pub slack_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuEntry {
    pub id: usize,
    /// Antenna array installed.
    pub v: bool,
    /// OTN count.
    pub kappa: u32,
    pub backhaul_slack_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub format_version: u32,
    pub strategy: Strategy,
    pub status: PlanStatus,
    pub feasible: bool,
    pub objective: f64,
    pub fiber_total: f64,
    pub mmwave_total: f64,
    pub aps: Vec<ApEntry>,
    pub dus: Vec<DuEntry>,
    pub violations: Vec<Violation>,
    pub infeasible_aps: Vec<usize>,
    pub infeasible_dus: Vec<usize>,
}

impl PlanDocument {
    pub fn new(strategy: Strategy, plan: &Plan, problem: &PlanningProblem) -> Result<Self> {
        let report = check_feasibility(plan, problem)?;
        let cost = problem.evaluate(plan)?;
        let mut aps = Vec::with_capacity(problem.num_aps);
        for c in &problem.clusters {
            for a in &c.aps {
                aps.push(ApEntry {
                    id: a.ap_id,
                    du: c.du_id,
                    technology: plan.technology(a.ap_id),
                    rate_bps: selected_rate(a, plan.u[a.ap_id], plan.z[a.ap_id]),
                    threshold_bps: a.threshold,
                    slack_bps: report.ap_slack[a.ap_id],
                });
            }
        }
        aps.sort_by_key(|a| a.id);
        let dus = (0..problem.num_dus())
            .map(|w| DuEntry {
                id: w,
                v: plan.v[w],
                kappa: plan.kappa[w],
                backhaul_slack_bps: report.du_slack[w],
            })
            .collect();
        Ok(Self {
            format_version: FORMAT_VERSION,
            strategy,
            status: plan.status,
            feasible: report.is_feasible(),
            objective: cost.objective,
            fiber_total: cost.fiber_total,
            mmwave_total: cost.mmwave_total,
            aps,
            dus,
            violations: report.violations,
            infeasible_aps: plan.infeasible_aps.clone(),
            infeasible_dus: plan.infeasible_dus.clone(),
        })
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, to_json(value).as_bytes())
}
