//! Command-line entry point. Every subcommand is a thin composition of
//! library calls; see the crate examples for the same operations in
//! library form.
//!
//! Exit codes: 0 success, 10 satisfiable, 20 unsatisfiable (solve-style
//! subcommands), 1 on error or failed validation.

use std::error::Error;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use grwalk::driver::{
    self, dialect_policy, Dialect, Expectation, FrontierKind, ReachabilityDb, SolverSpec,
};
use grwalk::encoding::{recommended_threshold, InstanceBuilder};
use grwalk::formats::{self, LoweringMethod, SolverStatus};
use grwalk::geometry::{prop1_slope_bounds, theoretical_bounds};
use grwalk::oracle::{self, SearchBudget};
use grwalk::walk::{self, Walk};
use grwalk::Point;

#[derive(Parser)]
#[command(
    name = "grwalk",
    version,
    about = "Encode, solve, enumerate, and validate north-east lattice walks avoiding k collinear points"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a CNF or KNF instance for an n-point walk
    Encode(EncodeArgs),
    /// Encode, run an external solver, decode and validate the result
    Solve(SolveArgs),
    /// Exhaustively enumerate walks with the native backtracking search
    Enumerate(EnumerateArgs),
    /// Validate walks from a corpus file against the collinearity rule
    Validate(ValidateArgs),
    /// Rewrite a corpus to deduplicated normal forms
    Canon(CanonArgs),
    /// Walk a reachability frontier, persisting verdicts to a database
    Reach(ReachArgs),
    /// Split an instance along an antidiagonal into an iCNF cube file
    Cubes(CubesArgs),
    /// Emit an instance forcing a fixed subpath to occur in the walk
    Extend(ExtendArgs),
    /// Emit walk-count-per-point CSV data from exhaustive enumeration
    Heatmap(HeatmapArgs),
    /// Print the closed-form length bounds for a given k
    Bounds(BoundsArgs),
}

#[derive(Args, Clone)]
struct EncodeOpts {
    /// Number of collinear points to avoid
    #[arg(long)]
    k: u32,
    /// Number of points in the walk (steps + 1)
    #[arg(long)]
    n: u32,
    /// Disable the slope-interval filter for non-collinearity constraints
    #[arg(long)]
    no_prop1: bool,
    /// Disable the north-first-step symmetry breaking unit
    #[arg(long)]
    no_symmetry: bool,
    /// Disable extremal point blocking
    #[arg(long)]
    no_extremal: bool,
    /// Drop non-collinearity constraints for lines with at most this many
    /// points ("auto" applies the recommended per-k policy)
    #[arg(long)]
    threshold: Option<String>,
    /// Block points straying more than this many lattice points diagonally
    /// from the midline y = x+1
    #[arg(long)]
    streamline: Option<u32>,
    /// Force endpoint X,Y onto the walk
    #[arg(long, value_parser = parse_point)]
    pin: Option<Point>,
    /// Subpath steps to force into the walk (e.g. NEN), or @FILE to read one
    #[arg(long)]
    subpath: Option<String>,
    /// Reachability database supplying unreachable-point clauses
    #[arg(long)]
    unreach_db: Option<PathBuf>,
    /// Cardinality lowering method for CNF output
    #[arg(long, default_value = "seqcounter", value_parser = parse_method)]
    method: LoweringMethod,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    opts: EncodeOpts,
    /// Output format
    #[arg(long, default_value = "cnf", value_parser = parse_dialect)]
    format: Dialect,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverOpts {
    /// Solver command template with {cnf}, {seed}, {timeout} placeholders
    #[arg(long)]
    solver: String,
    /// Input dialect the solver accepts
    #[arg(long, default_value = "cnf", value_parser = parse_dialect)]
    solver_dialect: Dialect,
    /// Random seed passed to the solver
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-solve timeout in seconds
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Maximum concurrent solver processes
    #[arg(long, default_value_t = 1)]
    width: usize,
}

impl SolverOpts {
    fn spec(&self) -> SolverSpec {
        SolverSpec::new(&self.solver)
            .dialect(self.solver_dialect)
            .width(self.width)
            .timeout(Duration::from_secs(self.timeout))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    opts: EncodeOpts,
    #[command(flatten)]
    solver: SolverOpts,
    /// Pipeline dialect (knf pays off on satisfiable instances)
    #[arg(long, value_parser = parse_dialect)]
    dialect: Option<Dialect>,
    /// Write the satisfying walk to this corpus file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: u32,
    /// Enumerate walks of exactly this many steps instead of searching for
    /// the maximum
    #[arg(long)]
    m: Option<u32>,
    /// Restrict to walks whose first step is north
    #[arg(long)]
    north_first: bool,
    /// Step budget for the maximum search
    #[arg(long)]
    max_steps: Option<u32>,
    /// Time budget in seconds for the maximum search
    #[arg(long)]
    time_budget: Option<u64>,
    /// Corpus output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    k: u32,
    /// Corpus file, one walk per line
    file: PathBuf,
}

#[derive(Args)]
struct CanonArgs {
    /// Corpus file, one walk per line
    file: PathBuf,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReachArgs {
    #[arg(long)]
    k: u32,
    /// Stop once frontier points need walks of this many points
    #[arg(long)]
    n_max: u32,
    /// Verdict database, created if missing
    #[arg(long)]
    db: PathBuf,
    /// Which frontier to walk: upper, lower, or both
    #[arg(long, default_value = "both")]
    frontier: String,
    #[command(flatten)]
    solver: SolverOpts,
}

#[derive(Args)]
struct CubesArgs {
    #[command(flatten)]
    opts: EncodeOpts,
    /// Antidiagonal index to split on
    #[arg(long)]
    antidiagonal: u32,
    /// Cube file output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    opts: EncodeOpts,
    /// Output format
    #[arg(long, default_value = "cnf", value_parser = parse_dialect)]
    format: Dialect,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeatmapArgs {
    #[arg(long)]
    k: u32,
    /// Count pass-through visits instead of walk endpoints
    #[arg(long)]
    visits: bool,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    k: u32,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y got {s:?}"))?;
    Ok(Point::new(
        x.trim().parse().map_err(|e| format!("bad x: {e}"))?,
        y.trim().parse().map_err(|e| format!("bad y: {e}"))?,
    ))
}

fn parse_method(s: &str) -> Result<LoweringMethod, String> {
    match s {
        "seqcounter" | "seq" | "sequential-counter" => Ok(LoweringMethod::SequentialCounter),
        "totalizer" | "tot" => Ok(LoweringMethod::Totalizer),
        other => Err(format!("unknown lowering method {other:?}")),
    }
}

fn parse_dialect(s: &str) -> Result<Dialect, String> {
    s.parse()
}

type CliResult = Result<u8, Box<dyn Error>>;

fn build_instance(opts: &EncodeOpts) -> Result<grwalk::Instance, Box<dyn Error>> {
    let threshold = match opts.threshold.as_deref() {
        None => None,
        Some("auto") => recommended_threshold(opts.k, opts.n, true),
        Some(raw) => Some(raw.parse::<u32>()?),
    };
    let mut builder = InstanceBuilder::new(opts.k, opts.n)
        .symmetry(!opts.no_symmetry)
        .extremal(!opts.no_extremal)
        .use_prop1(!opts.no_prop1)
        .threshold(threshold)
        .streamline(opts.streamline);
    if let Some(p) = opts.pin {
        builder = builder.pin(p);
    }
    if let Some(raw) = &opts.subpath {
        let steps = match raw.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path)?.trim().to_string(),
            None => raw.clone(),
        };
        builder = builder.subpath(steps.parse::<Walk>()?);
    }
    if let Some(path) = &opts.unreach_db {
        let db = ReachabilityDb::open(opts.k, path)?;
        builder = builder.unreachability(db.unreachability_set());
    }
    Ok(builder.build()?)
}

fn open_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Box<dyn Error>> {
    Ok(match path {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_encode(args: EncodeArgs) -> CliResult {
    let instance = build_instance(&args.opts)?;
    let mut sink = open_sink(&args.out)?;
    match args.format {
        Dialect::Cnf => formats::write_dimacs(&instance, args.opts.method, &mut sink)?,
        Dialect::Knf => formats::write_knf(&instance, &mut sink)?,
    }
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> CliResult {
    let instance = build_instance(&args.opts)?;
    let spec = args.solver.spec();
    let pipeline = args
        .dialect
        .unwrap_or_else(|| dialect_policy(Expectation::Unknown));
    let outcome = driver::solve_instance(&instance, &spec, pipeline, args.solver.seed)?;
    match outcome.result.status {
        SolverStatus::Sat => {
            let walk = outcome.walk.expect("validated walk on SAT");
            println!("s SATISFIABLE");
            println!("walk {walk}");
            if outcome.retries > 0 {
                println!(
                    "c accepted after {} constraint-restoring retries",
                    outcome.retries
                );
            }
            if let Some(path) = &args.out {
                walk::write_corpus(File::create(path)?, [&walk])?;
            }
            Ok(10)
        }
        SolverStatus::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        SolverStatus::Unknown => {
            println!("s UNKNOWN");
            Ok(0)
        }
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> CliResult {
    let mut sink = open_sink(&args.out)?;
    match args.m {
        Some(m) => {
            let walks = oracle::enumerate_all(args.k, m, args.north_first)?;
            let classes = walk::dedup(walks.iter().cloned());
            eprintln!(
                "{} walks of {m} steps, {} up to isomorphism",
                walks.len(),
                classes.len()
            );
            walk::write_corpus(&mut sink, &walks)?;
        }
        None => {
            let budget = SearchBudget {
                max_steps: args.max_steps,
                time: args.time_budget.map(Duration::from_secs),
            };
            let outcome = oracle::search_max(args.k, budget)?;
            match outcome.a_value() {
                Some(a) => println!("a({}) = {a}", args.k),
                None => println!(
                    "a({}) >= {} (search not exhausted within budget)",
                    args.k,
                    outcome.longest + 1
                ),
            }
            let classes = walk::dedup(outcome.witnesses);
            println!(
                "maximal walks: {} up to isomorphism, {} steps each",
                classes.len(),
                outcome.longest
            );
            walk::write_corpus(&mut sink, &classes)?;
        }
    }
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> CliResult {
    let walks = walk::read_corpus(BufReader::new(File::open(&args.file)?))?;
    let mut bad = 0usize;
    for (idx, w) in walks.iter().enumerate() {
        let report = w.validate(args.k)?;
        if report.is_empty() {
            println!("walk {}: ok ({w})", idx + 1);
        } else {
            bad += 1;
            println!("walk {}: INVALID ({w})", idx + 1);
            for (line, count) in report.violations() {
                println!("  line {line} carries {count} walk points");
            }
        }
    }
    println!(
        "{} of {} walks avoid {} collinear points",
        walks.len() - bad,
        walks.len(),
        args.k
    );
    Ok(if bad == 0 { 0 } else { 1 })
}

fn cmd_canon(args: CanonArgs) -> CliResult {
    let walks = walk::read_corpus(BufReader::new(File::open(&args.file)?))?;
    let total = walks.len();
    let classes = walk::dedup(walks);
    eprintln!("{total} walks, {} equivalence classes", classes.len());
    let mut sink = open_sink(&args.out)?;
    walk::write_corpus(&mut sink, &classes)?;
    Ok(0)
}

fn cmd_reach(args: ReachArgs) -> CliResult {
    let spec = args.solver.spec();
    let mut db = ReachabilityDb::open(args.k, &args.db)?;
    let kinds: Vec<FrontierKind> = match args.frontier.as_str() {
        "upper" => vec![FrontierKind::Upper],
        "lower" => vec![FrontierKind::Lower],
        "both" => vec![FrontierKind::Upper, FrontierKind::Lower],
        other => return Err(format!("unknown frontier {other:?}").into()),
    };
    for kind in kinds {
        let outcome = driver::frontier_bounds(
            args.k,
            args.n_max,
            &spec,
            kind,
            &mut db,
            None,
            args.solver.seed,
        )?;
        println!("{kind:?} frontier: {} verdicts", outcome.trail.len());
        for (p, status) in &outcome.trail {
            println!("  {p} {status}");
        }
        if let Some(p) = outcome.halted_at {
            println!("  halted at {p} on an unknown verdict");
        }
    }
    println!("database now holds {} verdicts", db.len());
    Ok(0)
}

fn cmd_cubes(args: CubesArgs) -> CliResult {
    let instance = build_instance(&args.opts)?;
    let cubes = driver::generate_antidiagonal_cubes(&instance, args.antidiagonal)?;
    eprintln!("{} cubes on antidiagonal {}", cubes.len(), args.antidiagonal);
    let mut sink = open_sink(&args.out)?;
    formats::write_cubes(&cubes, &mut sink)?;
    Ok(0)
}

fn cmd_extend(args: ExtendArgs) -> CliResult {
    if args.opts.subpath.is_none() {
        return Err("extend requires --subpath".into());
    }
    cmd_encode(EncodeArgs {
        opts: args.opts,
        format: args.format,
        out: args.out,
    })
}

fn cmd_heatmap(args: HeatmapArgs) -> CliResult {
    let counts = oracle::point_counts(args.k)?;
    let map = if args.visits {
        &counts.visits
    } else {
        &counts.ending
    };
    let mut sink = open_sink(&args.out)?;
    oracle::write_heatmap_csv(map, &mut sink)?;
    Ok(0)
}

fn cmd_bounds(args: BoundsArgs) -> CliResult {
    let bounds = theoretical_bounds(args.k)?;
    let interval = prop1_slope_bounds(args.k)?;
    println!(
        "every walk of length {} contains {} collinear points",
        bounds.upper, args.k
    );
    println!(
        "lower = {:.6} (a walk of {} steps avoiding {} collinear points exists)",
        bounds.lower_value, bounds.lower_steps, args.k
    );
    println!("constraint slope interval: {interval}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Encode(args) => cmd_encode(args),
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::Validate(args) => cmd_validate(args),
        Cmd::Canon(args) => cmd_canon(args),
        Cmd::Reach(args) => cmd_reach(args),
        Cmd::Cubes(args) => cmd_cubes(args),
        Cmd::Extend(args) => cmd_extend(args),
        Cmd::Heatmap(args) => cmd_heatmap(args),
        Cmd::Bounds(args) => cmd_bounds(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            if let Some(io_err) = err.downcast_ref::<io::Error>() {
                if io_err.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
