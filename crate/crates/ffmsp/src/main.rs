use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ffmsp::bench::{
    read_runs_csv, run_suite, sqt_rows, summarize, write_runs_csv, write_sqt_csv,
    write_summary_csv, SuiteSpec,
};
use ffmsp::fasta::{joined_sequence, parse_fasta};
use ffmsp::instance_file;
use ffmsp::solve::{self, Algorithm, HostInfo, SolveReport};
use ffmsp_core::budget::BudgetLimits;
use ffmsp_core::engine::{CrossoverMode, InitMode, LocalSearch, MAConfig};
use ffmsp_core::heuristic::HeuristicTables;
use ffmsp_core::problem::{extract_real_instance, generate_random_instance, Alphabet};

#[derive(Parser)]
#[command(
    name = "ffmsp",
    version,
    about = "Far From Most String Problem solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance, uniformly random or sliced from a FASTA genome.
    Gen(GenArgs),
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run a suite of instances and algorithms.
    Bench(BenchArgs),
    /// Recompute the summary table from a per-run CSV.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long = "d-frac")]
    d_frac: f64,
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Slice the strings out of this FASTA file instead of drawing them.
    #[arg(long)]
    fasta: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "ma")]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "grasp")]
    init: InitArg,
    #[arg(long, value_enum, default_value = "pr")]
    xover: XoverArg,
    #[arg(long, value_enum, default_value = "hc")]
    ls: LsArg,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long = "pop-size", default_value_t = 100)]
    pop_size: usize,
    #[arg(long, default_value_t = 0.9)]
    px: f64,
    /// Mutation probability per symbol; defaults to 1/m.
    #[arg(long)]
    pm: Option<f64>,
    #[arg(long = "time-limit-s")]
    time_limit_s: Option<f64>,
    #[arg(long = "max-evals")]
    max_evals: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "out-json")]
    out_json: Option<PathBuf>,
    /// Also write the per-run CSV row.
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    runs: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AlgoArg {
    Ma,
    Grasp,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum InitArg {
    Grasp,
    Random,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum XoverArg {
    Pr,
    Ux,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum LsArg {
    Hc,
    None,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn gen(args: GenArgs) -> Result<()> {
    let alphabet = Alphabet::new(args.alphabet.as_bytes())?;
    let inst = match &args.fasta {
        None => generate_random_instance(args.n, args.m, args.d_frac, alphabet, args.seed)?,
        Some(path) => {
            let bytes =
                std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let records = parse_fasta(&bytes).with_context(|| path.display().to_string())?;
            let seq = joined_sequence(&records, ffmsp::bench::RECORD_SEPARATOR);
            extract_real_instance(&seq, alphabet, args.n, args.m, args.d_frac, args.seed)?
        }
    };
    instance_file::save(&inst, &args.out)?;
    eprintln!("wrote {} ({})", args.out.display(), inst.id());
    Ok(())
}

fn solve_cmd(args: SolveArgs) -> Result<()> {
    if args.time_limit_s.is_none() && args.max_evals.is_none() {
        bail!("give --time-limit-s and/or --max-evals");
    }
    let inst = instance_file::load(&args.instance)?;
    let cfg = MAConfig {
        pop_size: args.pop_size,
        p_x: args.px,
        p_m: args.pm,
        alpha: args.alpha,
        init: match args.init {
            InitArg::Grasp => InitMode::Grasp,
            InitArg::Random => InitMode::Random,
        },
        crossover: match args.xover {
            XoverArg::Pr => CrossoverMode::Pr,
            XoverArg::Ux => CrossoverMode::Ux,
        },
        local_search: match args.ls {
            LsArg::Hc => LocalSearch::Hc,
            LsArg::None => LocalSearch::None,
        },
        budget: BudgetLimits {
            max_evals: args.max_evals,
            time_limit_ms: args.time_limit_s.map(|s| (s * 1000.0).round() as u64),
        },
        seed: args.seed,
        target_f: None,
    };
    let algo = match args.algo {
        AlgoArg::Ma => Algorithm::Ma,
        AlgoArg::Grasp => Algorithm::Grasp,
    };
    let tables = HeuristicTables::for_instance(&inst);
    let record = solve::run(&inst, &tables, algo, &cfg)?;
    eprintln!(
        "best_f = {} / {}  (h = {:.6}, {} evaluations, {} ms)",
        record.best_f,
        inst.n(),
        record.best_h,
        record.evaluations,
        record.wall_ms
    );
    let report = SolveReport::new(&inst, algo, record);
    if let Some(path) = &args.out_json {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        use std::io::Write;
        writeln!(w)?;
    } else {
        println!("{}", report.best_string);
    }
    if let Some(path) = &args.out_csv {
        let row = ffmsp::bench::RunRow {
            instance_id: report.instance_id.clone(),
            algorithm: match algo {
                Algorithm::Ma => "ma".into(),
                Algorithm::Grasp => "grasp".into(),
            },
            seed: report.record.seed,
            n: report.n,
            m: report.m,
            d: report.d,
            best_f: report.record.best_f,
            best_h: report.record.best_h,
            evaluations: report.record.evaluations,
            wall_ms: report.record.wall_ms,
        };
        write_runs_csv(create(path)?, &[row])?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let spec = SuiteSpec::load(&args.spec)?;
    let outcomes = run_suite(&spec, args.workers)?;
    let rows: Vec<_> = outcomes.iter().map(|o| o.to_row()).collect();
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    write_runs_csv(create(&args.out_dir.join("runs.csv"))?, &rows)?;
    write_sqt_csv(create(&args.out_dir.join("sqt.csv"))?, &sqt_rows(&outcomes))?;
    write_summary_csv(
        create(&args.out_dir.join("summary.csv"))?,
        &summarize(&rows)?,
    )?;
    if spec.budget.time_limit_s.is_some() {
        serde_json::to_writer_pretty(
            create(&args.out_dir.join("host.json"))?,
            &HostInfo::current(),
        )?;
    }
    eprintln!("{} runs written to {}", rows.len(), args.out_dir.display());
    Ok(())
}

fn summarize_cmd(args: SummarizeArgs) -> Result<()> {
    let file =
        File::open(&args.runs).with_context(|| format!("opening {}", args.runs.display()))?;
    let rows = read_runs_csv(file).with_context(|| args.runs.display().to_string())?;
    write_summary_csv(create(&args.out)?, &summarize(&rows)?)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Summarize(a) => summarize_cmd(a),
    }
}
