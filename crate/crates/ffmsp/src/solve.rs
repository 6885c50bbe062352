//! Single runs driven by a real clock.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use ffmsp_core::budget::{Clock, NoClock};
use ffmsp_core::engine::{run_grasp_baseline_with, run_ma_with, MAConfig, RunRecord};
use ffmsp_core::heuristic::HeuristicTables;
use ffmsp_core::problem::Instance;

use crate::error::Result;

/// Wall clock started at construction.
#[derive(Debug, Clone, Copy)]
pub struct StdClock {
    start: Instant,
}

impl StdClock {
    pub fn start() -> Self {
        StdClock {
            start: Instant::now(),
        }
    }
}

impl Clock for StdClock {
    fn elapsed(&self) -> std::time::Duration {
        self.start.elapsed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// The memetic algorithm.
    Ma,
    /// Iterated GRASP + hill climbing.
    Grasp,
}

/// Runs `algo` on `inst`.
///
/// Runs with a time limit use the wall clock. Runs bounded only by
/// evaluations never read the clock, so their records (timing fields
/// included) are reproducible bit for bit.
pub fn run(
    inst: &Instance,
    tables: &HeuristicTables,
    algo: Algorithm,
    cfg: &MAConfig,
) -> Result<RunRecord> {
    let wall;
    let clock: &dyn Clock = if cfg.budget.time_limit_ms.is_some() {
        wall = StdClock::start();
        &wall
    } else {
        &NoClock
    };
    let rec = match algo {
        Algorithm::Ma => run_ma_with(inst, tables, cfg, clock)?,
        Algorithm::Grasp => run_grasp_baseline_with(inst, tables, cfg, clock)?,
    };
    Ok(rec)
}

/// Host facts stamped onto wall-clock results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostInfo {
    pub hostname: String,
    pub os: String,
    pub arch: String,
    pub cpus: usize,
}

impl HostInfo {
    pub fn current() -> Self {
        let hostname = std::fs::read_to_string("/etc/hostname")
            .map(|s| s.trim().to_string())
            .unwrap_or_default();
        HostInfo {
            hostname,
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// JSON document written by `ffmsp solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub best_string: String,
    pub record: RunRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub host: Option<HostInfo>,
}

impl SolveReport {
    pub fn new(inst: &Instance, algorithm: Algorithm, record: RunRecord) -> Self {
        let host = record
            .config
            .budget
            .time_limit_ms
            .map(|_| HostInfo::current());
        SolveReport {
            algorithm,
            instance_id: inst.id().to_string(),
            n: inst.n(),
            m: inst.m(),
            d: inst.threshold(),
            best_string: inst.alphabet().decode(&record.best),
            record,
            host,
        }
    }
}
