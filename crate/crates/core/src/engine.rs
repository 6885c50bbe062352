//! The memetic algorithm and the iterated GRASP + hill climbing baseline.
//!
//! The memetic algorithm keeps a steady-state population. Every iteration
//! produces one offspring (path relinking or uniform crossover of two
//! tournament winners with probability `p_x`, otherwise a copy of one
//! winner), mutates it, optionally hill-climbs it, and lets it replace the
//! worst member when strictly better. The best individual by `h` ever seen
//! is returned.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use rand::Rng;

use crate::budget::{Budget, BudgetLimits, Clock, NoClock};
use crate::construct::{column_counts, grasp_construct, GraspParams};
use crate::error::{Error, Result};
use crate::heuristic::{HeuristicTables, HeuristicValue};
use crate::operators::{
    hill_climb_individual, mutate_in_place, path_relink_individuals, uniform_crossover,
};
use crate::problem::{
    build_profile, build_profile_unchecked, CandidateString, DistanceProfile, Instance,
};
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum InitMode {
    Grasp,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CrossoverMode {
    /// Path relinking.
    Pr,
    /// Uniform crossover.
    Ux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum LocalSearch {
    /// Hill climbing over `h`.
    Hc,
    None,
}

/// Parameters of one memetic-algorithm or baseline run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MAConfig {
    pub pop_size: usize,
    /// Crossover probability.
    pub p_x: f64,
    /// Per-symbol mutation probability; `None` means `1/m`.
    pub p_m: Option<f64>,
    /// GRASP greediness.
    pub alpha: f64,
    pub init: InitMode,
    pub crossover: CrossoverMode,
    pub local_search: LocalSearch,
    pub budget: BudgetLimits,
    pub seed: u64,
    /// Stop as soon as the best string is far from this many input strings.
    pub target_f: Option<usize>,
}

impl Default for MAConfig {
    fn default() -> Self {
        MAConfig {
            pop_size: 100,
            p_x: 0.9,
            p_m: None,
            alpha: 0.1,
            init: InitMode::Grasp,
            crossover: CrossoverMode::Pr,
            local_search: LocalSearch::Hc,
            budget: BudgetLimits::default(),
            seed: 0,
            target_f: None,
        }
    }
}

impl MAConfig {
    /// Mutation probability for strings of length `m`.
    pub fn mutation_rate(&self, m: usize) -> f64 {
        self.p_m.unwrap_or(1.0 / m as f64)
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::arg("population size must be at least 2"));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.p_x) {
            return Err(Error::arg(format!("p_x {} outside [0, 1]", self.p_x)));
        }
        if let Some(p) = self.p_m {
            if !unit.contains(&p) {
                return Err(Error::arg(format!("p_m {p} outside [0, 1]")));
            }
        }
        GraspParams::new(self.alpha)?;
        if !self.budget.is_bounded() {
            return Err(Error::arg("set an evaluation limit, a time limit, or both"));
        }
        if let Some(t) = self.target_f {
            if t > inst.n() {
                return Err(Error::arg(format!("target f {t} exceeds n = {}", inst.n())));
            }
        }
        Ok(())
    }
}

/// A candidate string together with its profile and `h` value.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub string: CandidateString,
    pub profile: DistanceProfile,
    pub h: HeuristicValue,
}

impl Individual {
    pub fn evaluate(
        string: CandidateString,
        inst: &Instance,
        tables: &HeuristicTables,
    ) -> Result<Self> {
        inst.check_candidate(&string)?;
        let profile = build_profile(&string, inst)?;
        let h = crate::heuristic::h_value(&profile, inst, tables)?;
        Ok(Individual { string, profile, h })
    }

    fn from_profile(
        string: CandidateString,
        profile: DistanceProfile,
        inst: &Instance,
        tables: &HeuristicTables,
    ) -> Self {
        let h = tables.evaluate(inst, &profile);
        Individual { string, profile, h }
    }

    /// Whether the cached profile and `h` match a fresh evaluation.
    pub fn is_consistent(&self, inst: &Instance, tables: &HeuristicTables) -> bool {
        let fresh = build_profile_unchecked(&self.string, inst);
        fresh == self.profile && tables.evaluate(inst, &fresh) == self.h
    }
}

/// Binary tournament: two draws with replacement, the higher `h` wins and
/// ties go to the first draw.
pub fn binary_tournament<'p, R: Rng + ?Sized>(
    pop: &'p [Individual],
    rng: &mut R,
) -> Result<&'p Individual> {
    if pop.is_empty() {
        return Err(Error::InvalidState(
            "tournament on an empty population".into(),
        ));
    }
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    Ok(if b.h.total > a.h.total { b } else { a })
}

/// Steady-state replacement: `offspring` takes the place of the worst member
/// (first one on ties) if it is strictly better. Returns whether it entered.
pub fn replace(pop: &mut [Individual], offspring: Individual) -> bool {
    let Some((worst, _)) = pop
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.h.total.total_cmp(&b.h.total).then(i.cmp(j)))
    else {
        return false;
    };
    if offspring.h.total > pop[worst].h.total {
        pop[worst] = offspring;
        true
    } else {
        false
    }
}

/// Best-so-far sample, taken whenever the best `h` improves.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryPoint {
    pub elapsed_ms: u64,
    pub evaluations: u64,
    pub best_f: usize,
    pub best_h: f64,
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub instance_id: String,
    pub seed: u64,
    pub best_f: usize,
    pub best_h: f64,
    pub best: CandidateString,
    pub evaluations: u64,
    pub wall_ms: u64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub config: MAConfig,
}

struct Tracker {
    best: Individual,
    trajectory: Vec<TrajectoryPoint>,
}

impl Tracker {
    fn new(first: &Individual, budget: &Budget<'_>) -> Self {
        let mut t = Tracker {
            best: first.clone(),
            trajectory: Vec::new(),
        };
        t.sample(budget);
        t
    }

    fn sample(&mut self, budget: &Budget<'_>) {
        self.trajectory.push(TrajectoryPoint {
            elapsed_ms: millis(budget.elapsed()),
            evaluations: budget.used(),
            best_f: self.best.h.f,
            best_h: self.best.h.total,
        });
    }

    fn offer(&mut self, ind: &Individual, budget: &Budget<'_>) {
        if ind.h.total > self.best.h.total {
            self.best = ind.clone();
            self.sample(budget);
        }
    }

    fn reached(&self, target: Option<usize>) -> bool {
        target.is_some_and(|t| self.best.h.f >= t)
    }

    fn finish(self, inst: &Instance, cfg: &MAConfig, budget: &Budget<'_>) -> RunRecord {
        RunRecord {
            instance_id: inst.id().into(),
            seed: cfg.seed,
            best_f: self.best.h.f,
            best_h: self.best.h.total,
            best: self.best.string,
            evaluations: budget.used(),
            wall_ms: millis(budget.elapsed()),
            trajectory: self.trajectory,
            config: cfg.clone(),
        }
    }
}

fn millis(d: Duration) -> u64 {
    d.as_millis() as u64
}

fn check_clock(cfg: &MAConfig, clock: &dyn Clock) -> Result<()> {
    if cfg.budget.max_evals.is_none() && !clock.is_wall_clock() {
        return Err(Error::arg(
            "a time-only budget needs a wall clock; set an evaluation limit",
        ));
    }
    Ok(())
}

/// Runs the memetic algorithm with an evaluation budget only.
pub fn run_ma(inst: &Instance, cfg: &MAConfig) -> Result<RunRecord> {
    let tables = HeuristicTables::for_instance(inst);
    run_ma_with(inst, &tables, cfg, &NoClock)
}

/// Runs the memetic algorithm with shared tables and a caller-supplied clock.
pub fn run_ma_with(
    inst: &Instance,
    tables: &HeuristicTables,
    cfg: &MAConfig,
    clock: &dyn Clock,
) -> Result<RunRecord> {
    cfg.validate(inst)?;
    check_clock(cfg, clock)?;
    if tables.sigma() != inst.sigma() || tables.max_len() < inst.m() {
        return Err(Error::arg("heuristic tables do not fit the instance"));
    }
    let mut budget = Budget::new(cfg.budget, clock);
    let m = inst.m();
    let sigma = inst.sigma() as u8;
    let p_m = cfg.mutation_rate(m);

    let mut init_rng = stream(cfg.seed, Stream::Init);
    let mut grasp_rng = stream(cfg.seed, Stream::Grasp);
    let mut sel_rng = stream(cfg.seed, Stream::Selection);
    let mut coin_rng = stream(cfg.seed, Stream::CrossoverDecision);
    let mut ux_rng = stream(cfg.seed, Stream::Recombination);
    let mut mut_rng = stream(cfg.seed, Stream::Mutation);

    let counts = column_counts(inst);
    let params = GraspParams::new(cfg.alpha)?;
    let mut pop: Vec<Individual> = Vec::with_capacity(cfg.pop_size);
    for _ in 0..cfg.pop_size {
        let s = match cfg.init {
            InitMode::Grasp => grasp_construct(&counts, params, &mut grasp_rng),
            InitMode::Random => {
                CandidateString((0..m).map(|_| init_rng.gen_range(0..sigma)).collect())
            }
        };
        let profile = build_profile_unchecked(&s, inst);
        pop.push(Individual::from_profile(s, profile, inst, tables));
        budget.charge();
    }
    let first_best = pop
        .iter()
        .reduce(|a, b| if b.h.total > a.h.total { b } else { a })
        .expect("pop_size >= 2");
    let mut tracker = Tracker::new(first_best, &budget);

    let mut iteration: u64 = 0;
    while !budget.exhausted() && !tracker.reached(cfg.target_f) {
        iteration += 1;
        let mut child = if coin_rng.gen_bool(cfg.p_x) {
            let p1 = binary_tournament(&pop, &mut sel_rng)?;
            let p2 = binary_tournament(&pop, &mut sel_rng)?;
            match cfg.crossover {
                CrossoverMode::Pr => path_relink_individuals(p1, p2, inst, tables, &mut budget),
                CrossoverMode::Ux => {
                    let s = uniform_crossover(&p1.string, &p2.string, &mut ux_rng)?;
                    let profile = build_profile_unchecked(&s, inst);
                    Individual::from_profile(s, profile, inst, tables)
                }
            }
        } else {
            binary_tournament(&pop, &mut sel_rng)?.clone()
        };

        let before = child.string.clone();
        mutate_in_place(&mut child.string.0, sigma, p_m, &mut mut_rng);
        for (j, (&old, &new)) in before.iter().zip(child.string.iter()).enumerate() {
            if old != new {
                child.profile.substitute(inst, j, old, new);
            }
        }
        child.h = tables.evaluate(inst, &child.profile);
        budget.charge();

        if cfg.local_search == LocalSearch::Hc {
            child = hill_climb_individual(child, inst, tables, &mut budget);
        }
        tracker.offer(&child, &budget);
        replace(&mut pop, child);

        if cfg!(debug_assertions) && iteration.is_multiple_of(10_000) {
            for ind in &pop {
                debug_assert!(ind.is_consistent(inst, tables));
            }
        }
    }
    Ok(tracker.finish(inst, cfg, &budget))
}

/// Iterated GRASP + hill climbing with an evaluation budget only.
pub fn run_grasp_baseline(inst: &Instance, cfg: &MAConfig) -> Result<RunRecord> {
    let tables = HeuristicTables::for_instance(inst);
    run_grasp_baseline_with(inst, &tables, cfg, &NoClock)
}

/// Repeats "construct with GRASP, then hill-climb" until the budget runs
/// out, keeping the best string by `h`. The first construction always runs.
pub fn run_grasp_baseline_with(
    inst: &Instance,
    tables: &HeuristicTables,
    cfg: &MAConfig,
    clock: &dyn Clock,
) -> Result<RunRecord> {
    cfg.validate(inst)?;
    check_clock(cfg, clock)?;
    if tables.sigma() != inst.sigma() || tables.max_len() < inst.m() {
        return Err(Error::arg("heuristic tables do not fit the instance"));
    }
    let mut budget = Budget::new(cfg.budget, clock);
    let mut grasp_rng = stream(cfg.seed, Stream::Grasp);
    let counts = column_counts(inst);
    let params = GraspParams::new(cfg.alpha)?;

    let mut tracker: Option<Tracker> = None;
    loop {
        let s = grasp_construct(&counts, params, &mut grasp_rng);
        let profile = build_profile_unchecked(&s, inst);
        let start = Individual::from_profile(s, profile, inst, tables);
        budget.charge();
        let local = hill_climb_individual(start, inst, tables, &mut budget);
        match tracker.as_mut() {
            Some(t) => t.offer(&local, &budget),
            None => tracker = Some(Tracker::new(&local, &budget)),
        }
        let t = tracker.as_ref().expect("set above");
        if budget.exhausted() || t.reached(cfg.target_f) {
            break;
        }
    }
    Ok(tracker
        .expect("at least one iteration")
        .finish(inst, cfg, &budget))
}
