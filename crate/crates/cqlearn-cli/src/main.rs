//! Command-line harness: run learners on generated instances, check the
//! inference-dimension property, verify witness files, and emit CSV.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqlearn::geometry::{RationalVector, Sign};
use cqlearn::infer;
use cqlearn::lab::{self, WitnessKind};
use cqlearn::learn::{self, BoostConfig, StatConfig};
use cqlearn::query::SimulatedOracle;
use cqlearn::{io as cio, ratio, Rat};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

const CSV_HEADER: &str = "trial,mode,d,N_or_eta,n,k,label_queries,comparison_queries,total_queries,iterations,resamples,soundness_violations,wall_ms";

#[derive(Parser)]
#[command(name = "cqlearn", about = "Active learning of half spaces with label and comparison queries", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded experiment trials and emit one CSV row per trial.
    Run(RunArgs),
    /// Parse an instance or witness file and verify it.
    Verify { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Mode {
    Learn2d,
    Boost,
    Statistical,
    Witness,
    #[value(name = "infdim-check")]
    InfdimCheck,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Learn2d => "learn2d",
            Mode::Boost => "boost",
            Mode::Statistical => "statistical",
            Mode::Witness => "witness",
            Mode::InfdimCheck => "infdim-check",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKindArg {
    R3,
    Margin,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Grid side length N (points on {0..N}^d); selects grid instances.
    #[arg(long)]
    grid: Option<u64>,
    /// Minimal-ratio target "p/q"; selects margin instances.
    #[arg(long)]
    eta: Option<String>,
    /// Ambient dimension d.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Pool size n (witness mode: number of held-out points).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Witness construction for --mode witness.
    #[arg(long, value_enum, default_value = "r3")]
    kind: WitnessKindArg,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the suggested weak-learner parameter k.
    #[arg(long)]
    k: Option<usize>,
    /// Statistical mode: target error.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Statistical mode: failure probability.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// CSV output path ("-" for standard output).
    #[arg(long, default_value = "-")]
    output: String,
    /// Concurrent trials (default: CQLEARN_JOBS or all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

struct Row {
    trial: u64,
    mode: &'static str,
    d: usize,
    n_or_eta: String,
    n: usize,
    k: Option<usize>,
    label_queries: Option<usize>,
    compare_queries: Option<usize>,
    total_queries: Option<usize>,
    iterations: Option<usize>,
    resamples: Option<usize>,
    soundness_violations: usize,
    wall_ms: u128,
}

impl Row {
    fn to_csv(&self) -> String {
        fn opt(v: Option<usize>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.mode,
            self.d,
            self.n_or_eta,
            self.n,
            opt(self.k),
            opt(self.label_queries),
            opt(self.compare_queries),
            opt(self.total_queries),
            opt(self.iterations),
            opt(self.resamples),
            self.soundness_violations,
            self.wall_ms
        )
    }
}

fn parse_eta(s: &str) -> Result<Rat, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad eta numerator: {e}"))?;
    let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad eta denominator: {e}"))?;
    if q == BigInt::from(0) {
        return Err("eta denominator is zero".into());
    }
    Ok(Rat::new(p, q))
}

/// One of grid and margin, per the flags; grid N=8 when neither is given.
enum InstanceSpec {
    Grid(u64),
    Margin(Rat),
}

impl InstanceSpec {
    fn from_args(args: &RunArgs) -> Result<Self, String> {
        match (&args.grid, &args.eta) {
            (Some(_), Some(_)) => Err("--grid and --eta are mutually exclusive".into()),
            (Some(n), None) => Ok(InstanceSpec::Grid(*n)),
            (None, Some(e)) => Ok(InstanceSpec::Margin(parse_eta(e)?)),
            (None, None) => Ok(InstanceSpec::Grid(8)),
        }
    }

    fn describe(&self) -> String {
        match self {
            InstanceSpec::Grid(n) => format!("N={n}"),
            InstanceSpec::Margin(e) => format!("eta={e}"),
        }
    }

    fn oracle(&self, d: usize, n: usize, seed: u64) -> cqlearn::Result<(SimulatedOracle, usize)> {
        let inst = match self {
            InstanceSpec::Grid(n_side) => lab::gen_grid(*n_side, d, n, seed)?,
            InstanceSpec::Margin(eta) => lab::gen_margin(d, n, eta, seed)?,
        };
        let k = inst.suggested_k;
        Ok((SimulatedOracle::new(inst.hidden, inst.pool)?, k))
    }
}

fn count_violations(
    oracle: &SimulatedOracle,
    labels: &std::collections::BTreeMap<usize, Sign>,
) -> usize {
    labels
        .iter()
        .filter(|(&id, &s)| s != oracle.hidden().label_of(&oracle.pool()[id]).unwrap())
        .count()
}

fn run_trial(args: &RunArgs, spec: &InstanceSpec, trial: u64) -> Result<Row, String> {
    let seed = args.seed.wrapping_add(trial);
    let start = Instant::now();
    let mut row = Row {
        trial,
        mode: args.mode.name(),
        d: args.d,
        n_or_eta: spec.describe(),
        n: args.n,
        k: None,
        label_queries: None,
        compare_queries: None,
        total_queries: None,
        iterations: None,
        resamples: None,
        soundness_violations: 0,
        wall_ms: 0,
    };
    match args.mode {
        Mode::Learn2d => {
            if args.d != 2 {
                return Err("learn2d requires --d 2".into());
            }
            let (mut o, _) = spec.oracle(2, args.n, seed).map_err(|e| e.to_string())?;
            let report = learn::learn_2d(&mut o, 30, seed).map_err(|e| e.to_string())?;
            row.label_queries = Some(o.stats().label_count);
            row.compare_queries = Some(o.stats().compare_count);
            row.total_queries = Some(o.stats().total());
            row.iterations = Some(report.iterations);
            row.soundness_violations = count_violations(&o, &report.labels);
        }
        Mode::Boost => {
            let (mut o, suggested) = spec.oracle(args.d, args.n, seed).map_err(|e| e.to_string())?;
            let k = args.k.unwrap_or(suggested);
            row.k = Some(k);
            let report = learn::boost(&mut o, &BoostConfig::new(k, seed)).map_err(|e| e.to_string())?;
            row.label_queries = Some(o.stats().label_count);
            row.compare_queries = Some(o.stats().compare_count);
            row.total_queries = Some(o.stats().total());
            row.iterations = Some(report.iterations);
            row.resamples = Some(report.resamples);
            row.soundness_violations = count_violations(&o, &report.labels);
        }
        Mode::Statistical => {
            let n_side = match spec {
                InstanceSpec::Grid(n) => *n,
                InstanceSpec::Margin(_) => return Err("statistical mode requires --grid".into()),
            };
            let d = args.d;
            let seed_inst = lab::gen_grid(n_side, d, 2, seed).map_err(|e| e.to_string())?;
            let hidden = seed_inst.hidden;
            let k = args.k.unwrap_or(seed_inst.suggested_k);
            row.k = Some(k);
            let cfg = StatConfig::new(args.eps, args.delta, k, seed);
            row.n = cfg.sample_size(d);
            let h2 = hidden.clone();
            let draw = move |rng: &mut ChaCha12Rng| {
                RationalVector::from_ints(
                    &(0..d)
                        .map(|_| rng.random_range(0..=n_side as i64))
                        .collect::<Vec<_>>(),
                )
                .lift()
            };
            let (concept, report) =
                learn::learn_statistical(draw, |pool| SimulatedOracle::new(h2, pool), d, &cfg)
                    .map_err(|e| e.to_string())?;
            row.label_queries = Some(report.stats.label_count);
            row.compare_queries = Some(report.stats.compare_count);
            row.total_queries = Some(report.stats.total());
            row.iterations = Some(report.iterations);
            row.resamples = Some(report.resamples);
            // Monte-Carlo disagreement estimate stands in for soundness.
            let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5151);
            let draw2 = |rng: &mut ChaCha12Rng| {
                RationalVector::from_ints(
                    &(0..d)
                        .map(|_| rng.random_range(0..=n_side as i64))
                        .collect::<Vec<_>>(),
                )
                .lift()
            };
            let mut wrong = 0usize;
            for _ in 0..2000 {
                let x = draw2(&mut rng);
                if concept.label_of(&x).unwrap() != hidden.label_of(&x).unwrap() {
                    wrong += 1;
                }
            }
            let bad = wrong as f64 / 2000.0 > args.eps;
            row.soundness_violations = usize::from(bad);
        }
        Mode::Witness => {
            let w = match args.kind {
                WitnessKindArg::R3 => lab::gen_lb_r3(args.n),
                WitnessKindArg::Margin => lab::gen_lb_margin(args.n),
            }
            .map_err(|e| e.to_string())?;
            row.d = w.pool[0].dim();
            row.n_or_eta.clear();
            let report = lab::verify_witness(&w).map_err(|e| e.to_string())?;
            row.soundness_violations = report.violations.len();
        }
        Mode::InfdimCheck => {
            let (ok, k) = infdim_trial(args, spec, seed)?;
            row.k = Some(k);
            row.soundness_violations = usize::from(!ok);
        }
    }
    row.wall_ms = start.elapsed().as_millis();
    Ok(row)
}

/// Draws k pool ids with replacement and checks that the labels and exact
/// sorted comparisons of all but one determine that one's label.
fn infdim_trial(args: &RunArgs, spec: &InstanceSpec, seed: u64) -> Result<(bool, usize), String> {
    let (mut o, suggested) = spec.oracle(args.d, args.n, seed).map_err(|e| e.to_string())?;
    let k = args.k.unwrap_or(suggested);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let subset: Vec<usize> = (0..k).map(|_| rng.random_range(0..o.pool_size())).collect();
    let mut order: Vec<usize> = (0..subset.len()).collect();
    order.sort_by_key(|&p| {
        usize::from(subset.iter().filter(|&&id| id == subset[p]).count() <= 1)
    });
    for &p in order.iter().take(3) {
        let rest: Vec<usize> = (0..subset.len()).filter(|&q| q != p).collect();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for &q in &rest {
            let id = subset[q];
            match o.query_label(id).map_err(|e| e.to_string())? {
                Sign::Pos => pos.push(id),
                Sign::Neg => neg.push(id),
            }
        }
        learn::sort_with_queries(&pos, Sign::Pos, &mut o).map_err(|e| e.to_string())?;
        learn::sort_with_queries(&neg, Sign::Neg, &mut o).map_err(|e| e.to_string())?;
        let t = o.transcript().clone();
        let verdict =
            infer::infer_label(&t, &o.pool().to_vec(), subset[p]).map_err(|e| e.to_string())?;
        if let Some(s) = verdict.forced_sign() {
            let truth = o.hidden().label_of(&o.pool()[subset[p]]).unwrap();
            return Ok((s == truth, k));
        }
    }
    Ok((false, k))
}

fn cmd_run(args: RunArgs) -> Result<bool, String> {
    let spec = InstanceSpec::from_args(&args)?;
    let jobs = args
        .jobs
        .or_else(|| {
            std::env::var("CQLEARN_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;

    let results: Vec<Result<Row, String>> = pool.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|t| run_trial(&args, &spec, t))
            .collect()
    });

    let mut out: Box<dyn std::io::Write> = if args.output == "-" {
        Box::new(std::io::stdout().lock())
    } else {
        Box::new(std::fs::File::create(&args.output).map_err(|e| e.to_string())?)
    };
    writeln!(out, "# cqlearn experiment, rng=ChaCha12 (seed_from_u64)").map_err(|e| e.to_string())?;
    writeln!(out, "{CSV_HEADER}").map_err(|e| e.to_string())?;
    let mut clean = true;
    for r in results {
        let row = r?;
        clean &= row.soundness_violations == 0;
        writeln!(out, "{}", row.to_csv()).map_err(|e| e.to_string())?;
    }
    Ok(clean)
}

fn cmd_verify(path: &PathBuf) -> Result<bool, String> {
    let parsed = cio::parse_instance_file(path).map_err(|e| e.to_string())?;
    match parsed {
        cio::ParsedFile::Witness(w) => {
            let report = lab::verify_witness(&w).map_err(|e| e.to_string())?;
            println!(
                "witness: n={} kind={:?} violations={}",
                report.n,
                report.kind,
                report.violations.len()
            );
            for v in &report.violations {
                println!("  {v}");
            }
            if let Some(m) = &report.min_margin_sq {
                println!("  min squared normalized margin: {m}");
            }
            if matches!(report.kind, WitnessKind::Margin) && report.clean() {
                let ok = report.min_margin_sq.as_ref().is_some_and(|m| *m >= ratio(1, 64));
                if !ok {
                    println!("  margin below 1/64");
                    return Ok(false);
                }
            }
            Ok(report.clean())
        }
        cio::ParsedFile::Instance(inst) => {
            // Realizability: the recorded concept must label its own pool
            // consistently, i.e. the version space of the full labeling is
            // nonempty.
            let mut oracle = SimulatedOracle::new(inst.hidden.clone(), inst.pool.clone())
                .map_err(|e| e.to_string())?;
            for i in 0..oracle.pool_size() {
                oracle.query_label(i).map_err(|e| e.to_string())?;
            }
            let t = oracle.transcript().clone();
            let vs = infer::VersionSpace::from_transcript(&t, &inst.pool)
                .map_err(|e| e.to_string())?;
            let ok = !vs.is_empty();
            println!(
                "instance: d={} n={} suggested_k={} realizable={}",
                inst.pool[0].dim(),
                inst.pool.len(),
                inst.suggested_k,
                ok
            );
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify { path } => cmd_verify(&path),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
