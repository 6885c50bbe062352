//! Experiment suites: instance grids, repeated seeded runs, RPD statistics
//! and CSV output.
//!
//! A suite is described by a TOML file:
//!
//! ```toml
//! seed = 1
//! instances_per_cell = 5
//! runs_per_instance = 10
//!
//! [source]
//! kind = "random"          # or "fasta", with `path = "genome.fa"`
//! alphabet = "ACGT"
//!
//! [grid]
//! n = [100, 200]
//! m = [300, 600, 800]
//! d_frac = [0.75, 0.80, 0.85]
//!
//! [budget]
//! max_evals = 200000       # and/or time_limit_s = 600
//!
//! [[algorithm]]
//! name = "MA"
//! algo = "ma"              # or "grasp"
//! init = "grasp"
//! xover = "pr"
//! ls = "hc"
//! alpha = 0.1
//! ```
//!
//! Relative FASTA paths resolve against the suite file's directory.
//!
//! Statistics pool every run of every instance in a cell: the RPD of a run
//! is measured against the best `f` any algorithm reached on that instance,
//! and each cell reports the mean and sample standard deviation of those
//! per-run values.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ffmsp_core::budget::BudgetLimits;
use ffmsp_core::engine::{CrossoverMode, InitMode, LocalSearch, MAConfig, RunRecord};
use ffmsp_core::heuristic::HeuristicTables;
use ffmsp_core::problem::{extract_real_instance, generate_random_instance, Alphabet, Instance};
use ffmsp_core::rng::derive_seed;

use crate::error::{Error, Result};
use crate::fasta::{joined_sequence, parse_fasta};
use crate::solve::{self, Algorithm};

/// Separator placed between FASTA records; never part of an alphabet, so
/// windows that straddle two records are rejected.
pub const RECORD_SEPARATOR: u8 = b' ';

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Source {
    Random {
        #[serde(default)]
        alphabet: Option<String>,
    },
    Fasta {
        path: PathBuf,
        #[serde(default)]
        alphabet: Option<String>,
    },
}

impl Source {
    fn alphabet(&self) -> Result<Alphabet> {
        let symbols = match self {
            Source::Random { alphabet } | Source::Fasta { alphabet, .. } => alphabet.as_deref(),
        };
        match symbols {
            None => Ok(Alphabet::dna()),
            Some(s) => Ok(Alphabet::new(s.as_bytes())?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub d_frac: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub max_evals: Option<u64>,
    pub time_limit_s: Option<f64>,
}

impl BudgetSpec {
    pub fn limits(&self) -> BudgetLimits {
        BudgetLimits {
            max_evals: self.max_evals,
            time_limit_ms: self.time_limit_s.map(|s| (s * 1000.0).round() as u64),
        }
    }
}

/// One named algorithm configuration. Unset fields take the defaults of
/// [`MAConfig`].
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: String,
    pub algo: Algorithm,
    pub init: Option<InitMode>,
    pub xover: Option<CrossoverMode>,
    pub ls: Option<LocalSearch>,
    pub alpha: Option<f64>,
    pub pop_size: Option<usize>,
    pub px: Option<f64>,
    pub pm: Option<f64>,
}

impl AlgorithmSpec {
    pub fn config(&self, budget: BudgetLimits, seed: u64) -> MAConfig {
        let d = MAConfig::default();
        MAConfig {
            pop_size: self.pop_size.unwrap_or(d.pop_size),
            p_x: self.px.unwrap_or(d.p_x),
            p_m: self.pm.or(d.p_m),
            alpha: self.alpha.unwrap_or(d.alpha),
            init: self.init.unwrap_or(d.init),
            crossover: self.xover.unwrap_or(d.crossover),
            local_search: self.ls.unwrap_or(d.local_search),
            budget,
            seed,
            target_f: None,
        }
    }
}

fn default_instances_per_cell() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub seed: u64,
    #[serde(default = "default_instances_per_cell")]
    pub instances_per_cell: usize,
    pub runs_per_instance: usize,
    pub source: Source,
    pub grid: Grid,
    pub budget: BudgetSpec,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
}

impl SuiteSpec {
    /// Parses and validates a suite file's contents. `base_dir` anchors
    /// relative FASTA paths.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut spec: SuiteSpec = toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        if let Source::Fasta { path, .. } = &mut spec.source {
            if path.is_relative() {
                *path = base_dir.join(&*path);
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Spec(msg.to_string()));
        if self.grid.n.is_empty() || self.grid.m.is_empty() || self.grid.d_frac.is_empty() {
            return bad("every grid list needs at least one value");
        }
        if self.algorithms.is_empty() {
            return bad("at least one [[algorithm]] is required");
        }
        if self.instances_per_cell < 1 || self.runs_per_instance < 1 {
            return bad("instances_per_cell and runs_per_instance must be at least 1");
        }
        let names: BTreeSet<&str> = self.algorithms.iter().map(|a| a.name.as_str()).collect();
        if names.len() != self.algorithms.len() {
            return bad("algorithm names must be unique");
        }
        if names.iter().any(|n| n.is_empty() || n.contains(',')) {
            return bad("algorithm names must be nonempty and free of commas");
        }
        if !self.budget.limits().is_bounded() {
            return bad("[budget] needs max_evals and/or time_limit_s");
        }
        self.source.alphabet()?;
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.grid.n.len() * self.grid.m.len() * self.grid.d_frac.len()
    }
}

/// A generated instance and the grid cell it belongs to.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub index: usize,
    pub d_frac: f64,
    pub instance: Arc<Instance>,
}

/// Generates every instance of the suite, cell by cell in grid order
/// (`d_frac`, then `n`, then `m`).
pub fn build_instances(spec: &SuiteSpec) -> Result<Vec<SuiteInstance>> {
    let alphabet = spec.source.alphabet()?;
    let genome = match &spec.source {
        Source::Fasta { path, .. } => {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            Some(joined_sequence(&parse_fasta(&bytes)?, RECORD_SEPARATOR))
        }
        Source::Random { .. } => None,
    };
    let mut out = Vec::new();
    for &d_frac in &spec.grid.d_frac {
        for &n in &spec.grid.n {
            for &m in &spec.grid.m {
                for k in 0..spec.instances_per_cell {
                    let seed = derive_seed(
                        spec.seed,
                        &[
                            b"instance",
                            &(n as u64).to_le_bytes(),
                            &(m as u64).to_le_bytes(),
                            &d_frac.to_bits().to_le_bytes(),
                            &(k as u64).to_le_bytes(),
                        ],
                    );
                    let inst = match &genome {
                        None => generate_random_instance(n, m, d_frac, alphabet.clone(), seed)?,
                        Some(seq) => {
                            extract_real_instance(seq, alphabet.clone(), n, m, d_frac, seed)?
                        }
                    };
                    out.push(SuiteInstance {
                        index: out.len(),
                        d_frac,
                        instance: Arc::new(inst),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Seed of one replicate, stable under changes to the rest of the suite.
pub fn run_seed(master: u64, instance_id: &str, algorithm: &str, run: usize) -> u64 {
    derive_seed(
        master,
        &[
            instance_id.as_bytes(),
            algorithm.as_bytes(),
            &(run as u64).to_le_bytes(),
        ],
    )
}

/// One finished replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub algorithm: String,
    pub instance_index: usize,
    pub run: usize,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub record: RunRecord,
}

impl Outcome {
    pub fn to_row(&self) -> RunRow {
        RunRow {
            instance_id: self.record.instance_id.clone(),
            algorithm: self.algorithm.clone(),
            seed: self.record.seed,
            n: self.n,
            m: self.m,
            d: self.d,
            best_f: self.record.best_f,
            best_h: self.record.best_h,
            evaluations: self.record.evaluations,
            wall_ms: self.record.wall_ms,
        }
    }
}

/// Executes every (instance, algorithm, run) triple on `workers` threads.
/// Any failed run aborts the suite. Results are sorted by cell, algorithm,
/// instance and run.
pub fn run_suite(spec: &SuiteSpec, workers: usize) -> Result<Vec<Outcome>> {
    spec.validate()?;
    let instances = build_instances(spec)?;
    let mut tables: HashMap<(usize, usize), Arc<HeuristicTables>> = HashMap::new();
    for si in &instances {
        let key = (si.instance.m(), si.instance.sigma());
        tables
            .entry(key)
            .or_insert_with(|| Arc::new(HeuristicTables::for_instance(&si.instance)));
    }
    let limits = spec.budget.limits();
    let jobs: Vec<(&SuiteInstance, &AlgorithmSpec, usize)> = instances
        .iter()
        .flat_map(|si| {
            spec.algorithms
                .iter()
                .flat_map(move |a| (0..spec.runs_per_instance).map(move |r| (si, a, r)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Spec(format!("cannot start worker pool: {e}")))?;
    let mut outcomes = pool.install(|| {
        jobs.par_iter()
            .map(|&(si, alg, run)| {
                let inst = &si.instance;
                let seed = run_seed(spec.seed, inst.id(), &alg.name, run);
                let cfg = alg.config(limits, seed);
                let t = &tables[&(inst.m(), inst.sigma())];
                let record = solve::run(inst, t, alg.algo, &cfg)?;
                Ok(Outcome {
                    algorithm: alg.name.clone(),
                    instance_index: si.index,
                    run,
                    n: inst.n(),
                    m: inst.m(),
                    d: inst.threshold(),
                    record,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    outcomes.sort_by(|a, b| {
        cell_order((a.d, a.n, a.m), (b.d, b.n, b.m))
            .then_with(|| a.algorithm.cmp(&b.algorithm))
            .then(a.instance_index.cmp(&b.instance_index))
            .then(a.run.cmp(&b.run))
    });
    Ok(outcomes)
}

/// Orders cells `(d, n, m)` by `d/m`, then `n`, then `m`.
fn cell_order(a: (usize, usize, usize), b: (usize, usize, usize)) -> std::cmp::Ordering {
    let fa = a.0 as f64 / a.2 as f64;
    let fb = b.0 as f64 / b.2 as f64;
    fa.total_cmp(&fb).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
}

/// Per-run CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub best_f: usize,
    pub best_h: f64,
    pub evaluations: u64,
    pub wall_ms: u64,
}

/// Solution-quality-over-time CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqtRow {
    pub instance_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub best_f: usize,
    pub evaluations: u64,
}

pub fn sqt_rows(outcomes: &[Outcome]) -> Vec<SqtRow> {
    outcomes
        .iter()
        .flat_map(|o| {
            o.record.trajectory.iter().map(move |p| SqtRow {
                instance_id: o.record.instance_id.clone(),
                algorithm: o.algorithm.clone(),
                seed: o.record.seed,
                elapsed_ms: p.elapsed_ms,
                best_f: p.best_f,
                evaluations: p.evaluations,
            })
        })
        .collect()
}

const RUN_HEADER: [&str; 10] = [
    "instance_id",
    "algorithm",
    "seed",
    "n",
    "m",
    "d",
    "best_f",
    "best_h",
    "evaluations",
    "wall_ms",
];

const SQT_HEADER: [&str; 6] = [
    "instance_id",
    "algorithm",
    "seed",
    "elapsed_ms",
    "best_f",
    "evaluations",
];

fn write_rows<W: Write, T: Serialize>(out: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn write_runs_csv<W: Write>(out: W, rows: &[RunRow]) -> Result<()> {
    write_rows(out, &RUN_HEADER, rows)
}

pub fn write_sqt_csv<W: Write>(out: W, rows: &[SqtRow]) -> Result<()> {
    write_rows(out, &SQT_HEADER, rows)
}

pub fn read_runs_csv<R: Read>(input: R) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(RUN_HEADER) {
        return Err(Error::parse(
            1,
            format!("per-run CSV header must be `{}`", RUN_HEADER.join(",")),
        ));
    }
    r.deserialize()
        .collect::<std::result::Result<Vec<RunRow>, _>>()
        .map_err(Error::from)
}

/// Relative percentage distance of `sol` from `best`, in percent.
/// Zero when `best` is zero.
pub fn rpd(sol: usize, best: usize) -> Result<f64> {
    if sol > best {
        return Err(ffmsp_core::Error::InvalidArgument(format!(
            "solution {sol} exceeds the reference best {best}"
        ))
        .into());
    }
    if best == 0 {
        return Ok(0.0);
    }
    Ok((best - sol) as f64 * 100.0 / best as f64)
}

/// Improvement of a reference algorithm over another, in percentage
/// points of mean RPD.
pub fn improvement_pct(rpd_mean_other: f64, rpd_mean_ref: f64) -> f64 {
    rpd_mean_other - rpd_mean_ref
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub d_frac: f64,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub mean_sol: f64,
    pub rpd_mean: f64,
    pub rpd_std: f64,
    /// Other algorithm name to `rpd_mean(other) - rpd_mean(self)`.
    pub improvement_vs: BTreeMap<String, f64>,
}

/// Sum of values in ascending order, independent of input order.
fn ordered_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

fn mean_and_std(values: &mut [f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = ordered_sum(values) / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    (mean, (ordered_sum(&mut sq) / (k - 1.0)).sqrt())
}

/// Per-cell, per-algorithm statistics. The result does not depend on the
/// order of `rows`.
pub fn summarize(rows: &[RunRow]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(ffmsp_core::Error::InvalidArgument("no runs to summarize".into()).into());
    }
    let mut best: HashMap<&str, usize> = HashMap::new();
    for r in rows {
        let b = best.entry(&r.instance_id).or_insert(0);
        *b = (*b).max(r.best_f);
    }
    type Cell = (usize, usize, usize);
    let mut groups: BTreeMap<(Cell, &str), (Vec<f64>, u64)> = BTreeMap::new();
    for r in rows {
        let g = groups
            .entry(((r.d, r.n, r.m), r.algorithm.as_str()))
            .or_insert_with(|| (Vec::new(), 0));
        g.0.push(rpd(r.best_f, best[r.instance_id.as_str()])?);
        g.1 += r.best_f as u64;
    }
    let mut out: Vec<SummaryRow> = groups
        .into_iter()
        .map(|(((d, n, m), alg), (mut rpds, sum_f))| {
            let count = rpds.len() as f64;
            let (rpd_mean, rpd_std) = mean_and_std(&mut rpds);
            SummaryRow {
                d_frac: d as f64 / m as f64,
                n,
                m,
                algorithm: alg.to_string(),
                mean_sol: sum_f as f64 / count,
                rpd_mean,
                rpd_std,
                improvement_vs: BTreeMap::new(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.d_frac
            .total_cmp(&b.d_frac)
            .then(a.n.cmp(&b.n))
            .then(a.m.cmp(&b.m))
            .then_with(|| a.algorithm.cmp(&b.algorithm))
    });
    let snapshot: Vec<(f64, usize, usize, String, f64)> = out
        .iter()
        .map(|r| (r.d_frac, r.n, r.m, r.algorithm.clone(), r.rpd_mean))
        .collect();
    for row in &mut out {
        for (df, n, m, alg, other_mean) in &snapshot {
            if *df == row.d_frac && *n == row.n && *m == row.m && *alg != row.algorithm {
                row.improvement_vs
                    .insert(alg.clone(), improvement_pct(*other_mean, row.rpd_mean));
            }
        }
    }
    Ok(out)
}

/// Writes the summary table. One `imp_vs_<name>` column per algorithm
/// present; the entry comparing an algorithm with itself is left empty.
pub fn write_summary_csv<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let algorithms: BTreeSet<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "d_frac",
        "n",
        "m",
        "algorithm",
        "mean_sol",
        "rpd_mean",
        "rpd_std",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(algorithms.iter().map(|a| format!("imp_vs_{a}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            format!("{:.2}", r.d_frac),
            r.n.to_string(),
            r.m.to_string(),
            r.algorithm.clone(),
            format!("{:.4}", r.mean_sol),
            format!("{:.4}", r.rpd_mean),
            format!("{:.4}", r.rpd_std),
        ];
        rec.extend(algorithms.iter().map(|a| {
            r.improvement_vs
                .get(*a)
                .map(|v| format!("{v:.4}"))
                .unwrap_or_default()
        }));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(inst: &str, alg: &str, f: usize) -> RunRow {
        RunRow {
            instance_id: inst.into(),
            algorithm: alg.into(),
            seed: 0,
            n: 100,
            m: 300,
            d: 240,
            best_f: f,
            best_h: f as f64 * 101.0,
            evaluations: 1,
            wall_ms: 0,
        }
    }

    #[test]
    fn rpd_examples() {
        assert_eq!(rpd(100, 100).unwrap(), 0.0);
        assert_eq!(rpd(80, 100).unwrap(), 20.0);
        assert_eq!(rpd(0, 0).unwrap(), 0.0);
        assert!(rpd(5, 4).is_err());
    }

    #[test]
    fn improvement_examples() {
        assert!((improvement_pct(5.85, 1.14) - 4.71).abs() < 1e-9);
        assert!((improvement_pct(10.30, 1.27) - 9.03).abs() < 1e-9);
        assert_eq!(improvement_pct(3.3, 3.3), 0.0);
    }

    #[test]
    fn constant_runs() {
        let rows = vec![row("a", "X", 90), row("a", "X", 90), row("b", "X", 70)];
        let s = summarize(&rows).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].rpd_mean, 0.0);
        assert_eq!(s[0].rpd_std, 0.0);
        assert!((s[0].mean_sol - 250.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_algorithms() {
        let rows = vec![row("a", "lo", 80), row("a", "hi", 100)];
        let s = summarize(&rows).unwrap();
        let hi = s.iter().find(|r| r.algorithm == "hi").unwrap();
        let lo = s.iter().find(|r| r.algorithm == "lo").unwrap();
        assert_eq!(lo.rpd_mean, 20.0);
        assert_eq!(hi.rpd_mean, 0.0);
        assert_eq!(hi.improvement_vs["lo"], 20.0);
        assert_eq!(lo.improvement_vs["hi"], -20.0);
    }

    #[test]
    fn empty_summary_is_an_error() {
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn runs_csv_header_only() {
        let mut buf = Vec::new();
        write_runs_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance_id,algorithm,seed,n,m,d,best_f,best_h,evaluations,wall_ms\n"
        );
    }

    #[test]
    fn summary_csv_layout() {
        let rows = vec![row("a", "lo", 80), row("a", "hi", 100)];
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &summarize(&rows).unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "d_frac,n,m,algorithm,mean_sol,rpd_mean,rpd_std,imp_vs_hi,imp_vs_lo"
        );
        assert_eq!(lines[1], "0.80,100,300,hi,100.0000,0.0000,0.0000,,20.0000");
        assert_eq!(lines[2], "0.80,100,300,lo,80.0000,20.0000,0.0000,-20.0000,");
    }

    #[test]
    fn spec_validation() {
        let base = r#"
            seed = 3
            runs_per_instance = 2
            [source]
            kind = "random"
            [grid]
            n = [5]
            m = [10]
            d_frac = [0.8]
            [budget]
            max_evals = 100
            [[algorithm]]
            name = "MA"
            algo = "ma"
        "#;
        let spec = SuiteSpec::from_toml(base, Path::new(".")).unwrap();
        assert_eq!(spec.instances_per_cell, 5);
        assert_eq!(spec.cell_count(), 1);

        let no_budget = base.replace("max_evals = 100", "");
        assert!(SuiteSpec::from_toml(&no_budget, Path::new(".")).is_err());
        let empty_grid = base.replace("n = [5]", "n = []");
        assert!(SuiteSpec::from_toml(&empty_grid, Path::new(".")).is_err());
        let typo = base.replace("algo = \"ma\"", "algo = \"ma\"\nalhpa = 0.2");
        assert!(SuiteSpec::from_toml(&typo, Path::new(".")).is_err());
    }
}
