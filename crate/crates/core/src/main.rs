use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dclcs::bench::{run_bench, BenchConfig, CSV_HEADER};
use dclcs::color::DEFAULT_EXHAUSTIVE_CAP;
use dclcs::fpt::{DEFAULT_MAX_K, DEFAULT_MEMORY_BUDGET};
use dclcs::oracle::{brute_force_dclcs, OracleLimits, DEFAULT_MAX_SHORTER_LEN};
use dclcs::reduction::{build_reduction, reduction_limits, verify_equivalence, ScsInstance};
use dclcs::{format_solution, parse_instance, solve_dclcs, verify_solution, Error, FamilySpec, Instance, Sequence, Solution, SolverConfig};

const EXIT_SOLUTION: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_REFUSED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "dclcs", version, about = "Doubly-constrained longest common subsequence solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with the color-coding algorithm.
    Solve(SolveArgs),
    /// Solve an instance by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Build a constrained-LCS instance from shortest-common-supersequence strings.
    ReduceScs(ReduceArgs),
    /// Time table fills on random inputs and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Exhaustive,
    Exact,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Plain,
    JsonLines,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "random")]
    family: FamilyKind,
    #[arg(long, default_value_t = 0.001)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_K)]
    max_k: usize,
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    memory_budget: u64,
    /// Cap on the number of functions of the exhaustive family.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    exhaustive_cap: u64,
    #[arg(long, overrides_with = "no_parallel")]
    parallel: bool,
    #[arg(long)]
    no_parallel: bool,
    #[arg(long, value_enum, default_value = "plain")]
    report: ReportFormat,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Refuse instances whose shorter input is longer than this.
    #[arg(long, default_value_t = DEFAULT_MAX_SHORTER_LEN)]
    max_len: usize,
    #[arg(long, value_enum, default_value = "plain")]
    report: ReportFormat,
}

#[derive(Args)]
struct ReduceArgs {
    /// One string per line; '%' lines are comments.
    #[arg(long)]
    strings: PathBuf,
    #[arg(long)]
    length: usize,
    /// Alphabet symbols; defaults to the symbols used by the strings.
    #[arg(long)]
    alphabet: Option<String>,
    /// Check the length correspondence with the exhaustive oracles.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    /// Inclusive range `A..B`.
    #[arg(long)]
    k_range: String,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    constraint_len: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Outcome {
    Solution,
    Infeasible,
    Refused,
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<Sequence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    trials_used: u64,
    k_tested: Vec<usize>,
    wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl RunReport {
    fn new(command: &'static str) -> Self {
        RunReport {
            command,
            outcome: Outcome::Refused,
            length: None,
            solution: None,
            mode: None,
            trials_used: 0,
            k_tested: Vec::new(),
            wall_time_ms: 0.0,
            family: None,
            seed: None,
            delta: None,
            error: None,
        }
    }

    fn emit(&self, format: ReportFormat) {
        if format == ReportFormat::JsonLines {
            match serde_json::to_string(self) {
                Ok(line) => eprintln!("{line}"),
                Err(e) => eprintln!("report serialization failed: {e}"),
            }
        }
    }
}

fn load_instance(path: &PathBuf) -> anyhow::Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Prints a solution after re-verifying it, and maps the outcome to an exit code.
fn finish(inst: &Instance, solution: Option<&Solution>, report: &mut RunReport) -> u8 {
    if let Some(sol) = solution {
        if !verify_solution(inst, &sol.sequence).passed() || !sol.certificate_valid(&inst.s1, &inst.s2) {
            eprintln!("internal error: solution {} failed verification", sol.sequence);
            return EXIT_VERIFY_FAILED;
        }
        report.outcome = Outcome::Solution;
        report.length = Some(sol.len());
        report.solution = Some(sol.sequence.clone());
    } else {
        report.outcome = Outcome::Infeasible;
    }
    print!("{}", format_solution(solution));
    if solution.is_some() {
        EXIT_SOLUTION
    } else {
        EXIT_INFEASIBLE
    }
}

fn refuse(err: impl std::fmt::Display, report: &mut RunReport) -> u8 {
    eprintln!("error: {err:#}");
    report.outcome = Outcome::Refused;
    report.error = Some(format!("{err:#}"));
    EXIT_REFUSED
}

fn cmd_solve(args: &SolveArgs) -> u8 {
    let started = Instant::now();
    let family = match args.family {
        FamilyKind::Exhaustive => FamilySpec::Exhaustive {
            cap: args.exhaustive_cap,
        },
        FamilyKind::Exact => FamilySpec::Exact,
        FamilyKind::Random => FamilySpec::Randomized {
            delta: args.delta,
            seed: args.seed,
        },
    };
    let mut report = RunReport::new("solve");
    report.family = Some(family.name());
    if let FamilySpec::Randomized { delta, seed } = family {
        report.seed = Some(seed);
        report.delta = Some(delta);
    }
    let cfg = SolverConfig {
        family,
        max_k: args.max_k,
        memory_budget: args.memory_budget,
        parallel_trials: !args.no_parallel,
    };

    let code = match load_instance(&args.instance) {
        Err(e) => refuse(e, &mut report),
        Ok(inst) => {
            report.mode = Some(inst.mode().to_string());
            match solve_dclcs(&inst, &cfg) {
                Err(e) => refuse(e, &mut report),
                Ok(out) => {
                    report.trials_used = out.trials_used;
                    report.k_tested = out.k_tested.clone();
                    finish(&inst, out.solution.as_ref(), &mut report)
                }
            }
        }
    };
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    report.emit(args.report);
    code
}

fn cmd_oracle(args: &OracleArgs) -> u8 {
    let started = Instant::now();
    let mut report = RunReport::new("oracle");
    let limits = OracleLimits {
        max_shorter_len: args.max_len,
        ..OracleLimits::default()
    };
    let code = match load_instance(&args.instance) {
        Err(e) => refuse(e, &mut report),
        Ok(inst) => {
            report.mode = Some(inst.mode().to_string());
            match brute_force_dclcs(&inst, &limits) {
                Err(e) => refuse(e, &mut report),
                Ok(sol) => finish(&inst, sol.as_ref(), &mut report),
            }
        }
    };
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    report.emit(args.report);
    code
}

fn read_scs_instance(args: &ReduceArgs) -> anyhow::Result<ScsInstance> {
    let text = std::fs::read_to_string(&args.strings).with_context(|| format!("reading {}", args.strings.display()))?;
    let strings = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'))
        .map(|l| l.parse::<Sequence>())
        .collect::<Result<Vec<_>, Error>>()?;
    let scs = match &args.alphabet {
        Some(a) => ScsInstance::new(strings, a.parse::<Sequence>()?.alphabet())?,
        None => ScsInstance::from_strings(strings)?,
    };
    Ok(scs)
}

fn cmd_reduce_scs(args: &ReduceArgs) -> anyhow::Result<u8> {
    let scs = read_scs_instance(args)?;
    let out = build_reduction(&scs, args.length)?;
    let mut text = out.to_instance_file(&scs);
    let mut code = EXIT_SOLUTION;
    if args.verify {
        let eq = verify_equivalence(&scs, args.length, &reduction_limits())?;
        let clcs = eq.clcs_length.map_or_else(|| "none".to_string(), |n| n.to_string());
        text.push_str(&format!(
            "% verify {} (scs length {}, longest feasible {})\n",
            eq.holds(),
            eq.scs_length,
            clcs
        ));
        if !eq.holds() {
            code = EXIT_VERIFY_FAILED;
        }
    }
    print!("{text}");
    Ok(code)
}

fn parse_k_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("k range {s:?} must look like A..B"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<u8> {
    let (k_min, k_max) = parse_k_range(&args.k_range)?;
    let cfg = BenchConfig {
        n: args.n,
        k_min,
        k_max,
        repeats: args.repeats,
        seed: args.seed,
        constraint_len: args.constraint_len,
        ..BenchConfig::default()
    };
    let rows = run_bench(&cfg)?;
    println!("{CSV_HEADER}");
    for row in rows {
        println!("{}", row.to_csv());
    }
    Ok(EXIT_SOLUTION)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::ReduceScs(args) => cmd_reduce_scs(args).unwrap_or_else(|e| {
            eprintln!("error: {e:#}");
            EXIT_REFUSED
        }),
        Command::Bench(args) => cmd_bench(args).unwrap_or_else(|e| {
            eprintln!("error: {e:#}");
            EXIT_REFUSED
        }),
    };
    ExitCode::from(code)
}
