//! External solver orchestration: single solves with model validation and
//! heuristic-repair retries, all-solutions enumeration through blocking
//! clauses, the incremental a(k) search, reachability frontiers with a
//! persistent verdict database, antidiagonal cube generation, and parallel
//! solve campaigns with an append-only ledger.
//!
//! Solvers are external processes described by a command template with
//! `{cnf}`, `{seed}` and `{timeout}` placeholders; only files and standard
//! output cross the boundary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::encoding::{
    CardinalityConstraint, EncodeError, Instance, InstanceBuilder, Lit, UnreachabilitySet,
};
use crate::formats::{
    self, instance_hash, parse_knf, parse_solver_output, FormatError, LoweringMethod,
    SolverResult, SolverStatus,
};
use crate::geometry::{GeometryError, Line, Point};
use crate::oracle;
use crate::walk::{dedup, Walk, WalkError};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error("failed to launch solver {command:?}: {source}")]
    SolverLaunch {
        command: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("solver returned an invalid model on a full instance: {0}")]
    InvalidModel(String),
    #[error("model still invalid after {0} constraint-restoring retries")]
    RetryLimitExceeded(u32),
    #[error("solver returned UNKNOWN for {context}")]
    Unknown { context: String },
    #[error("solver and oracle disagree: {0}")]
    OracleMismatch(String),
    #[error("conflicting verdict for {point}: recorded {recorded}, new {new}")]
    ConflictingVerdict {
        point: Point,
        recorded: Reachability,
        new: Reachability,
    },
    #[error("reachability database line {line}: {message}")]
    DbParse { line: usize, message: String },
    #[error("antidiagonal {c} out of range for an {n}-point instance")]
    CubeIndexOutOfRange { c: u32, n: u32 },
}

/// How instances are presented to a solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Cnf,
    Knf,
}

impl Dialect {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dialect::Cnf => "cnf",
            Dialect::Knf => "knf",
        }
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cnf" => Ok(Dialect::Cnf),
            "knf" => Ok(Dialect::Knf),
            other => Err(format!("unknown dialect {other:?}")),
        }
    }
}

/// What we expect of an instance, driving the dialect choice: klause-native
/// solving pays off on satisfiable instances, plain CNF on unsatisfiable or
/// unknown ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Sat,
    Unsat,
    Unknown,
}

pub fn dialect_policy(expectation: Expectation) -> Dialect {
    match expectation {
        Expectation::Sat => Dialect::Knf,
        Expectation::Unsat | Expectation::Unknown => Dialect::Cnf,
    }
}

/// An external solver: a command template plus the input dialect it accepts
/// and execution limits.
#[derive(Clone, Debug)]
pub struct SolverSpec {
    /// Command template; `{cnf}` is replaced by the instance path, `{seed}`
    /// and `{timeout}` by their values when present.
    pub command: String,
    /// Input dialect the solver consumes. Instances built for the other
    /// dialect are converted on the way in.
    pub dialect: Dialect,
    /// Maximum number of concurrently running solver processes.
    pub width: NonZeroUsize,
    /// Per-process wall-clock limit.
    pub timeout: Duration,
}

impl SolverSpec {
    pub fn new(command: impl Into<String>) -> Self {
        SolverSpec {
            command: command.into(),
            dialect: Dialect::Cnf,
            width: NonZeroUsize::new(1).unwrap(),
            timeout: Duration::from_secs(600),
        }
    }

    pub fn dialect(mut self, dialect: Dialect) -> Self {
        self.dialect = dialect;
        self
    }

    pub fn width(mut self, width: usize) -> Self {
        self.width = NonZeroUsize::new(width.max(1)).unwrap();
        self
    }

    pub fn timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn name(&self) -> String {
        let head = self.command.split_whitespace().next().unwrap_or("solver");
        Path::new(head)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| head.to_string())
    }
}

/// Run one solver process on a serialized instance and parse its output.
fn run_solver_process(
    spec: &SolverSpec,
    instance_path: &Path,
    seed: u64,
    timeout: Duration,
) -> Result<SolverResult, DriverError> {
    let rendered = spec
        .command
        .replace("{cnf}", &instance_path.to_string_lossy())
        .replace("{seed}", &seed.to_string())
        .replace("{timeout}", &timeout.as_secs().max(1).to_string());
    let mut parts = rendered.split_whitespace();
    let program = parts.next().unwrap_or_default().to_string();
    let args: Vec<&str> = parts.collect();
    let start = Instant::now();
    let mut child = Command::new(&program)
        .args(&args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| DriverError::SolverLaunch {
            command: rendered.clone(),
            source,
        })?;
    // drain stdout on a separate thread; models can exceed the pipe buffer
    // and would otherwise block the child before it can exit
    let mut stdout = child.stdout.take().expect("stdout piped");
    let drain = std::thread::spawn(move || {
        let mut buf = String::new();
        stdout.read_to_string(&mut buf).ok();
        buf
    });
    // enforce the wall clock from outside as well; a small grace period lets
    // solvers honor their own limit first
    let deadline = start + timeout + Duration::from_secs(5);
    let timed_out = loop {
        match child.try_wait()? {
            Some(_) => break false,
            None if Instant::now() >= deadline => {
                child.kill().ok();
                child.wait()?;
                break true;
            }
            None => std::thread::sleep(Duration::from_millis(10)),
        }
    };
    let output = drain.join().unwrap_or_default();
    let mut result = if timed_out {
        SolverResult::new(SolverStatus::Unknown, None)
    } else {
        parse_solver_output(&output)?
    };
    result.wall_time = Some(start.elapsed());
    result.solver = Some(spec.name());
    result.seed = Some(seed);
    Ok(result)
}

/// Serialize `instance` for the solver, converting between dialects when the
/// pipeline choice and the solver's input format differ.
fn write_instance_file(
    instance: &Instance,
    pipeline: Dialect,
    spec: &SolverSpec,
    extra_units: &[Lit],
    dir: &Path,
    label: &str,
) -> Result<PathBuf, DriverError> {
    let mut staged = instance.clone();
    if !extra_units.is_empty() {
        staged.push_extra_clauses(extra_units.iter().map(|&l| vec![l]));
    }
    let (bytes, ext) = match (pipeline, spec.dialect) {
        (Dialect::Cnf, _) => {
            // plain CNF is a valid KNF subset, so it serves both solvers
            (formats::dimacs_bytes(&staged, LoweringMethod::SequentialCounter), "cnf")
        }
        (Dialect::Knf, Dialect::Knf) => (formats::knf_bytes(&staged), "knf"),
        (Dialect::Knf, Dialect::Cnf) => {
            let knf = parse_knf(&String::from_utf8(formats::knf_bytes(&staged)).expect("utf8"))?;
            (formats::knf_to_cnf(&knf, LoweringMethod::SequentialCounter), "cnf")
        }
    };
    let path = dir.join(format!("{label}.{ext}"));
    std::fs::write(&path, bytes)?;
    Ok(path)
}

/// Result of solving one instance, including the validated walk for
/// satisfiable outcomes and how many heuristic-repair retries it took.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub result: SolverResult,
    pub walk: Option<Walk>,
    pub retries: u32,
}

const MAX_RETRIES: u32 = 3;

/// Solve an instance: serialize, run the external solver, decode and validate
/// any model. A model with k collinear points on a heuristically thinned
/// instance triggers a retry with the violated lines' constraints (plus every
/// line sharing two or more points with the returned walk) restored.
/// Unsatisfiable verdicts on thinned instances stand.
pub fn solve_instance(
    instance: &Instance,
    spec: &SolverSpec,
    pipeline: Dialect,
    seed: u64,
) -> Result<SolveOutcome, DriverError> {
    solve_with_assumptions(instance, spec, pipeline, &[], seed)
}

/// Like [`solve_instance`] with cube literals added as unit clauses.
pub fn solve_with_assumptions(
    instance: &Instance,
    spec: &SolverSpec,
    pipeline: Dialect,
    cube: &[Lit],
    seed: u64,
) -> Result<SolveOutcome, DriverError> {
    let dir = tempfile::tempdir()?;
    let mut current = instance.clone();
    let thinned = instance.provenance().threshold.is_some();
    for attempt in 0..=MAX_RETRIES {
        let path = write_instance_file(
            &current,
            pipeline,
            spec,
            cube,
            dir.path(),
            &format!("inst{attempt}"),
        )?;
        let result = run_solver_process(spec, &path, seed, spec.timeout)?;
        match result.status {
            SolverStatus::Unsat | SolverStatus::Unknown => {
                return Ok(SolveOutcome {
                    result,
                    walk: None,
                    retries: attempt,
                });
            }
            SolverStatus::Sat => {
                let model = result.model.as_ref().expect("model present on SAT");
                let walk = formats::decode_model(model, current.varmap(), current.n())?;
                let report = walk.validate(current.k())?;
                if report.is_empty() {
                    return Ok(SolveOutcome {
                        result,
                        walk: Some(walk),
                        retries: attempt,
                    });
                }
                if !thinned {
                    return Err(DriverError::InvalidModel(format!(
                        "walk {walk} has k collinear points on an unthinned instance"
                    )));
                }
                restore_constraints(&mut current, &walk, &report.lines().collect::<Vec<_>>())?;
            }
        }
    }
    Err(DriverError::RetryLimitExceeded(MAX_RETRIES))
}

/// Restore the at-most constraints for the violated lines plus every line
/// through two or more points of the offending walk that qualifies for a
/// constraint but is missing from the instance.
fn restore_constraints(
    instance: &mut Instance,
    walk: &Walk,
    violated: &[&Line],
) -> Result<(), DriverError> {
    let (k, n) = (instance.k(), instance.n());
    let present = instance.constrained_lines();
    let mut lines: BTreeSet<Line> = violated.iter().map(|l| **l).collect();
    let pts = walk.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(line) = Line::through(pts[i], pts[j]) {
                lines.insert(line);
            }
        }
    }
    let mut restored = Vec::new();
    for line in lines {
        if line.is_horizontal() || line.is_vertical() || present.contains(&line) {
            continue;
        }
        if line.point_count(n) < k {
            continue;
        }
        let lits = line
            .points(n)
            .into_iter()
            .map(|p| instance.varmap().lit(p))
            .collect::<Result<Vec<_>, _>>()?;
        restored.push(CardinalityConstraint::at_most(lits, k - 1)?);
    }
    instance.push_cards(restored);
    Ok(())
}

/// All walks satisfying the instance, enumerated by repeatedly solving and
/// blocking the point-variable assignment of each model found.
pub fn enumerate_solutions(
    instance: &Instance,
    spec: &SolverSpec,
    pipeline: Dialect,
    seed: u64,
    limit: Option<usize>,
) -> Result<Vec<Walk>, DriverError> {
    let mut current = instance.clone();
    let mut walks = Vec::new();
    loop {
        if let Some(limit) = limit {
            if walks.len() >= limit {
                return Ok(walks);
            }
        }
        let outcome = solve_instance(&current, spec, pipeline, seed)?;
        match outcome.result.status {
            SolverStatus::Unsat => return Ok(walks),
            SolverStatus::Unknown => {
                return Err(DriverError::Unknown {
                    context: format!(
                        "all-solutions enumeration after {} walks",
                        walks.len()
                    ),
                })
            }
            SolverStatus::Sat => {
                let walk = outcome.walk.expect("validated walk on SAT");
                let on_walk: BTreeSet<u32> = walk
                    .points()
                    .into_iter()
                    .map(|p| current.varmap().var(p).expect("point in region"))
                    .collect();
                let blocking: Vec<Lit> = (1..=current.varmap().count())
                    .map(|v| {
                        if on_walk.contains(&v) {
                            -(v as Lit)
                        } else {
                            v as Lit
                        }
                    })
                    .collect();
                current.push_extra_clauses([blocking]);
                walks.push(walk);
            }
        }
    }
}

/// Result of the incremental a(k) search.
#[derive(Clone, Debug)]
pub struct ASearchResult {
    pub a_value: u32,
    /// Maximal walks in normal form.
    pub witnesses: BTreeSet<Walk>,
    /// Every walk found, per length.
    pub corpus: BTreeMap<u32, Vec<Walk>>,
}

/// How satisfiable endpoints are expanded into complete walk sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AllSolutionsMode {
    /// Repeated solving with blocking clauses.
    BlockingClauses,
    /// Native exhaustive enumeration, cross-checked against each solver
    /// verdict. Only sensible where the oracle is fast (k <= 5).
    Oracle,
}

/// Determine a(k) by increasing the step count m and solving one pinned
/// instance per endpoint (x, m-x); a(k) is the first m with every endpoint
/// unsatisfiable. Walks found along the way are retained.
pub fn incremental_a_search(
    k: u32,
    spec: &SolverSpec,
    mode: AllSolutionsMode,
    seed: u64,
) -> Result<ASearchResult, DriverError> {
    let mut corpus: BTreeMap<u32, Vec<Walk>> = BTreeMap::new();
    let mut m = 1;
    loop {
        let n = m + 1;
        let oracle_walks = match mode {
            AllSolutionsMode::Oracle => Some(oracle::enumerate_all(k, m, true)?),
            AllSolutionsMode::BlockingClauses => None,
        };
        let mut walks_at_m: Vec<Walk> = Vec::new();
        for x in 0..=m {
            let endpoint = Point::new(x, m - x);
            let instance = InstanceBuilder::new(k, n).pin(endpoint).build()?;
            match &oracle_walks {
                Some(all) => {
                    let expected: Vec<Walk> = all
                        .iter()
                        .filter(|w| w.endpoint() == endpoint)
                        .cloned()
                        .collect();
                    let outcome = solve_instance(&instance, spec, dialect_policy(if expected.is_empty() { Expectation::Unsat } else { Expectation::Sat }), seed)?;
                    let sat = outcome.result.status == SolverStatus::Sat;
                    if outcome.result.status == SolverStatus::Unknown {
                        return Err(DriverError::Unknown {
                            context: format!("endpoint {endpoint} at m={m}"),
                        });
                    }
                    if sat != !expected.is_empty() {
                        return Err(DriverError::OracleMismatch(format!(
                            "endpoint {endpoint} at m={m}: solver says {}, oracle found {} walks",
                            outcome.result.status.as_str(),
                            expected.len()
                        )));
                    }
                    walks_at_m.extend(expected);
                }
                None => {
                    let found = enumerate_solutions(
                        &instance,
                        spec,
                        dialect_policy(Expectation::Unknown),
                        seed,
                        None,
                    )?;
                    walks_at_m.extend(found);
                }
            }
        }
        if walks_at_m.is_empty() {
            let witnesses = corpus
                .get(&(m - 1))
                .map(|walks| dedup(walks.iter().cloned()))
                .unwrap_or_default();
            return Ok(ASearchResult {
                a_value: m,
                witnesses,
                corpus,
            });
        }
        corpus.insert(m, walks_at_m);
        m += 1;
    }
}

/// Reachability verdict for one point under the north-first convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reachability {
    Reachable,
    Unreachable,
    Unknown,
}

impl Reachability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reachability::Reachable => "reachable",
            Reachability::Unreachable => "unreachable",
            Reachability::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Reachability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Reachability {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reachable" => Ok(Reachability::Reachable),
            "unreachable" => Ok(Reachability::Unreachable),
            "unknown" => Ok(Reachability::Unknown),
            other => Err(format!("unknown reachability status {other:?}")),
        }
    }
}

/// Per-entry provenance: which solver produced the verdict and how long it
/// took.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerdictMeta {
    pub solver: Option<String>,
    pub seed: Option<u64>,
    pub wall_time: Option<Duration>,
}

/// Persistent map from points to reachability verdicts for one k, stored as
/// append-friendly lines `k x y status`.
#[derive(Debug)]
pub struct ReachabilityDb {
    k: u32,
    entries: BTreeMap<Point, (Reachability, VerdictMeta)>,
    sink: Option<File>,
}

impl ReachabilityDb {
    pub fn new(k: u32) -> Self {
        ReachabilityDb {
            k,
            entries: BTreeMap::new(),
            sink: None,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Open (or create) a database file, replaying existing lines and
    /// appending every future update to it.
    pub fn open(k: u32, path: &Path) -> Result<Self, DriverError> {
        let mut db = ReachabilityDb::new(k);
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                let parse_err = |message: String| DriverError::DbParse {
                    line: idx + 1,
                    message,
                };
                if fields.len() != 4 {
                    return Err(parse_err(format!("expected 4 fields, got {}", fields.len())));
                }
                let line_k: u32 = fields[0]
                    .parse()
                    .map_err(|_| parse_err(format!("bad k {:?}", fields[0])))?;
                if line_k != k {
                    continue; // entries for other k coexist in one file
                }
                let x = fields[1]
                    .parse()
                    .map_err(|_| parse_err(format!("bad x {:?}", fields[1])))?;
                let y = fields[2]
                    .parse()
                    .map_err(|_| parse_err(format!("bad y {:?}", fields[2])))?;
                let status: Reachability = fields[3].parse().map_err(parse_err)?;
                db.record(Point::new(x, y), status, VerdictMeta::default())?;
            }
        }
        db.sink = Some(OpenOptions::new().create(true).append(true).open(path)?);
        Ok(db)
    }

    pub fn status(&self, p: Point) -> Reachability {
        self.entries
            .get(&p)
            .map_or(Reachability::Unknown, |(status, _)| *status)
    }

    pub fn meta(&self, p: Point) -> Option<&VerdictMeta> {
        self.entries.get(&p).map(|(_, meta)| meta)
    }

    /// Record a verdict. Re-recording the same status is a no-op; upgrading
    /// an unknown entry is allowed; contradicting a definite verdict is an
    /// error.
    pub fn record(
        &mut self,
        p: Point,
        status: Reachability,
        meta: VerdictMeta,
    ) -> Result<(), DriverError> {
        match self.entries.get(&p) {
            Some((existing, _)) if *existing == status => return Ok(()),
            Some((Reachability::Unknown, _)) | None => {}
            Some((existing, _)) => {
                return Err(DriverError::ConflictingVerdict {
                    point: p,
                    recorded: *existing,
                    new: status,
                })
            }
        }
        self.entries.insert(p, (status, meta));
        if let Some(sink) = &mut self.sink {
            writeln!(sink, "{} {} {} {}", self.k, p.x, p.y, status.as_str())?;
            sink.flush()?;
        }
        Ok(())
    }

    pub fn unreachable_points(&self) -> BTreeSet<Point> {
        self.entries
            .iter()
            .filter(|(_, (status, _))| *status == Reachability::Unreachable)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Points where both `(x, y)` and `(y, x)` are recorded unreachable; only
    /// these support translated blocking clauses.
    pub fn mirror_complete_unreachable(&self) -> BTreeSet<Point> {
        let unreachable = self.unreachable_points();
        unreachable
            .iter()
            .filter(|p| unreachable.contains(&Point::new(p.y, p.x)))
            .copied()
            .collect()
    }

    /// Snapshot consumable by the encoder.
    pub fn unreachability_set(&self) -> UnreachabilitySet {
        UnreachabilitySet::new(self.k, self.unreachable_points())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, Reachability)> + '_ {
        self.entries.iter().map(|(p, (status, _))| (*p, *status))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontierKind {
    Upper,
    Lower,
}

/// Trail of verdicts produced by one frontier run.
#[derive(Clone, Debug, Default)]
pub struct FrontierOutcome {
    pub trail: Vec<(Point, Reachability)>,
    /// Set when the frontier stopped on an UNKNOWN verdict.
    pub halted_at: Option<Point>,
}

/// Walk a reachability frontier, one solver call per undetermined point.
///
/// Upper rule: from a reachable (x, y) move to (x, y+1); from an unreachable
/// one move to (x+1, y-1). Lower rule: reachable moves to (x+1, y),
/// unreachable to (x-1, y+1). The walk starts at the first point past the
/// extremal blocking bound and stops once x + y reaches `n_max` or a verdict
/// comes back unknown (the database keeps everything determined so far).
pub fn frontier_bounds(
    k: u32,
    n_max: u32,
    spec: &SolverSpec,
    kind: FrontierKind,
    db: &mut ReachabilityDb,
    start: Option<Point>,
    seed: u64,
) -> Result<FrontierOutcome, DriverError> {
    let mut current = start.unwrap_or(match kind {
        FrontierKind::Upper => Point::new(0, k - 2),
        FrontierKind::Lower => Point::new(k - 2, 1),
    });
    let mut outcome = FrontierOutcome::default();
    while current.antidiagonal() < n_max {
        let verdict = match db.status(current) {
            Reachability::Unknown => {
                let n = current.antidiagonal() + 1;
                let instance = InstanceBuilder::new(k, n)
                    .unreachability(db.unreachability_set())
                    .pin(current)
                    .build()?;
                let solved =
                    solve_instance(&instance, spec, dialect_policy(Expectation::Unknown), seed)?;
                let verdict = match solved.result.status {
                    SolverStatus::Sat => Reachability::Reachable,
                    SolverStatus::Unsat => Reachability::Unreachable,
                    SolverStatus::Unknown => Reachability::Unknown,
                };
                let meta = VerdictMeta {
                    solver: solved.result.solver.clone(),
                    seed: solved.result.seed,
                    wall_time: solved.result.wall_time,
                };
                if verdict != Reachability::Unknown {
                    db.record(current, verdict, meta)?;
                }
                verdict
            }
            known => known,
        };
        outcome.trail.push((current, verdict));
        current = match (kind, verdict) {
            (_, Reachability::Unknown) => {
                outcome.halted_at = Some(current);
                return Ok(outcome);
            }
            (FrontierKind::Upper, Reachability::Reachable) => Point::new(current.x, current.y + 1),
            (FrontierKind::Upper, Reachability::Unreachable) => {
                if current.y == 0 {
                    return Ok(outcome);
                }
                Point::new(current.x + 1, current.y - 1)
            }
            (FrontierKind::Lower, Reachability::Reachable) => Point::new(current.x + 1, current.y),
            (FrontierKind::Lower, Reachability::Unreachable) => {
                if current.x == 0 {
                    return Ok(outcome);
                }
                Point::new(current.x - 1, current.y + 1)
            }
        };
    }
    Ok(outcome)
}

/// One cube per unblocked point on antidiagonal `c`: every walk crosses the
/// antidiagonal exactly once, so the cubes partition the solution space.
pub fn generate_antidiagonal_cubes(
    instance: &Instance,
    c: u32,
) -> Result<Vec<Vec<Lit>>, DriverError> {
    let n = instance.n();
    if c + 1 >= n {
        return Err(DriverError::CubeIndexOutOfRange { c, n });
    }
    let blocked = instance.blocked_vars();
    let mut cubes = Vec::new();
    for x in 0..=c {
        let p = Point::new(x, c - x);
        let var = instance.varmap().var(p)?;
        if !blocked.contains(&var) {
            cubes.push(vec![var as Lit]);
        }
    }
    Ok(cubes)
}

/// One campaign job result, serialized as a ledger line
/// `hash cube seed status millis walk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRecord {
    pub instance_hash: String,
    pub cube: Option<Vec<Lit>>,
    pub seed: u64,
    pub status: String,
    pub wall_millis: u128,
    pub walk: Option<Walk>,
}

impl LedgerRecord {
    pub fn to_line(&self) -> String {
        let cube = match &self.cube {
            None => "-".to_string(),
            Some(lits) => lits
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(","),
        };
        let walk = self
            .walk
            .as_ref()
            .map_or("-".to_string(), |w| w.to_string());
        format!(
            "{} {} {} {} {} {}",
            self.instance_hash, cube, self.seed, self.status, self.wall_millis, walk
        )
    }

    pub fn parse_line(line: &str) -> Option<LedgerRecord> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return None;
        }
        let cube = match fields[1] {
            "-" => None,
            lits => Some(
                lits.split(',')
                    .map(|l| l.parse().ok())
                    .collect::<Option<Vec<Lit>>>()?,
            ),
        };
        Some(LedgerRecord {
            instance_hash: fields[0].to_string(),
            cube,
            seed: fields[2].parse().ok()?,
            status: fields[3].to_string(),
            wall_millis: fields[4].parse().ok()?,
            walk: match fields[5] {
                "-" => None,
                s => Some(s.parse().ok()?),
            },
        })
    }
}

/// Completed campaign: every job result plus the distinct walks found.
#[derive(Clone, Debug, Default)]
pub struct CampaignOutcome {
    pub records: Vec<LedgerRecord>,
    pub distinct_walks: BTreeSet<Walk>,
}

/// Run one solver job per (cube, seed) pair, up to `spec.width` processes at
/// a time, appending each result to the ledger file as it lands. Per-job
/// failures are recorded, never fatal.
pub fn run_campaign(
    instance: &Instance,
    cubes: Option<&[Vec<Lit>]>,
    seeds: &[u64],
    spec: &SolverSpec,
    pipeline: Dialect,
    ledger_path: Option<&Path>,
) -> Result<CampaignOutcome, DriverError> {
    let hash = instance_hash(instance, LoweringMethod::SequentialCounter);
    let no_cube: Vec<Option<&[Lit]>> = vec![None];
    let cube_list: Vec<Option<&[Lit]>> = match cubes {
        Some(cubes) => cubes.iter().map(|c| Some(c.as_slice())).collect(),
        None => no_cube,
    };
    let jobs: Vec<(usize, Option<&[Lit]>, u64)> = cube_list
        .iter()
        .enumerate()
        .flat_map(|(i, cube)| seeds.iter().map(move |&s| (i, *cube, s)))
        .collect();
    let ledger_file = match ledger_path {
        Some(path) => Some(Mutex::new(
            OpenOptions::new().create(true).append(true).open(path)?,
        )),
        None => None,
    };
    let results: Mutex<Vec<(usize, LedgerRecord)>> = Mutex::new(Vec::new());
    let next_job = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..spec.width.get().min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let idx = next_job.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(&(_, cube, seed)) = jobs.get(idx) else {
                    return;
                };
                let started = Instant::now();
                let outcome =
                    solve_with_assumptions(instance, spec, pipeline, cube.unwrap_or(&[]), seed);
                let record = match outcome {
                    Ok(outcome) => LedgerRecord {
                        instance_hash: hash.clone(),
                        cube: cube.map(|c| c.to_vec()),
                        seed,
                        status: outcome.result.status.as_str().to_string(),
                        wall_millis: started.elapsed().as_millis(),
                        walk: outcome.walk,
                    },
                    Err(err) => LedgerRecord {
                        instance_hash: hash.clone(),
                        cube: cube.map(|c| c.to_vec()),
                        seed,
                        status: format!("error:{}", compact(&err.to_string())),
                        wall_millis: started.elapsed().as_millis(),
                        walk: None,
                    },
                };
                if let Some(file) = &ledger_file {
                    let mut file = file.lock().expect("ledger lock");
                    writeln!(file, "{}", record.to_line()).ok();
                    file.flush().ok();
                }
                results.lock().expect("results lock").push((idx, record));
            });
        }
    });
    let mut indexed = results.into_inner().expect("results lock");
    indexed.sort_by_key(|(idx, _)| *idx);
    let records: Vec<LedgerRecord> = indexed.into_iter().map(|(_, r)| r).collect();
    let distinct_walks = dedup(records.iter().filter_map(|r| r.walk.clone()));
    Ok(CampaignOutcome {
        records,
        distinct_walks,
    })
}

fn compact(message: &str) -> String {
    message
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .chars()
        .take(60)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dialect_policy_table() {
        assert_eq!(dialect_policy(Expectation::Sat), Dialect::Knf);
        assert_eq!(dialect_policy(Expectation::Unsat), Dialect::Cnf);
        assert_eq!(dialect_policy(Expectation::Unknown), Dialect::Cnf);
    }

    #[test]
    fn reachability_db_conflicts_are_loud() {
        let mut db = ReachabilityDb::new(4);
        let p = Point::new(3, 5);
        db.record(p, Reachability::Reachable, VerdictMeta::default())
            .unwrap();
        db.record(p, Reachability::Reachable, VerdictMeta::default())
            .unwrap();
        let err = db
            .record(p, Reachability::Unreachable, VerdictMeta::default())
            .unwrap_err();
        assert!(matches!(err, DriverError::ConflictingVerdict { .. }));
    }

    #[test]
    fn mirror_complete_requires_both_orientations() {
        let mut db = ReachabilityDb::new(7);
        db.record(Point::new(33, 88), Reachability::Unreachable, VerdictMeta::default())
            .unwrap();
        assert!(db.mirror_complete_unreachable().is_empty());
        db.record(Point::new(88, 33), Reachability::Unreachable, VerdictMeta::default())
            .unwrap();
        assert!(db
            .mirror_complete_unreachable()
            .contains(&Point::new(33, 88)));
    }

    #[test]
    fn reachability_db_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reach.db");
        {
            let mut db = ReachabilityDb::open(4, &path).unwrap();
            db.record(Point::new(1, 2), Reachability::Reachable, VerdictMeta::default())
                .unwrap();
            db.record(Point::new(0, 3), Reachability::Unreachable, VerdictMeta::default())
                .unwrap();
        }
        let db = ReachabilityDb::open(4, &path).unwrap();
        assert_eq!(db.status(Point::new(1, 2)), Reachability::Reachable);
        assert_eq!(db.status(Point::new(0, 3)), Reachability::Unreachable);
        assert_eq!(db.status(Point::new(9, 9)), Reachability::Unknown);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("4 1 2 reachable"));
        assert!(text.contains("4 0 3 unreachable"));
    }

    #[test]
    fn cube_generation_skips_blocked_points() {
        let instance = InstanceBuilder::new(4, 9).build().unwrap();
        let cubes = generate_antidiagonal_cubes(&instance, 3).unwrap();
        // antidiagonal 3 has points (0,3),(1,2),(2,1),(3,0); extremal
        // blocking removes (0,3) and (1,0) is on antidiagonal 1
        let vm = instance.varmap();
        let expected: Vec<Vec<Lit>> = [(1u32, 2u32), (2, 1), (3, 0)]
            .iter()
            .map(|&(x, y)| vec![vm.lit(Point::new(x, y)).unwrap()])
            .collect();
        assert_eq!(cubes, expected);

        let single = generate_antidiagonal_cubes(&instance, 0).unwrap();
        assert_eq!(single, vec![vec![1]]);

        assert!(matches!(
            generate_antidiagonal_cubes(&instance, 8),
            Err(DriverError::CubeIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn ledger_record_roundtrip() {
        let record = LedgerRecord {
            instance_hash: "deadbeef00112233".into(),
            cube: Some(vec![7, -9]),
            seed: 42,
            status: "sat".into(),
            wall_millis: 1234,
            walk: Some("NEN".parse().unwrap()),
        };
        let parsed = LedgerRecord::parse_line(&record.to_line()).unwrap();
        assert_eq!(parsed, record);

        let bare = LedgerRecord {
            cube: None,
            walk: None,
            status: "unsat".into(),
            ..record
        };
        assert_eq!(LedgerRecord::parse_line(&bare.to_line()).unwrap(), bare);
    }

    #[test]
    fn db_open_ignores_other_k_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reach.db");
        std::fs::write(&path, "# comment\n5 1 1 reachable\n4 1 1 reachable\n").unwrap();
        let db = ReachabilityDb::open(4, &path).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(db.status(Point::new(1, 1)), Reachability::Reachable);
    }

    #[test]
    fn db_parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reach.db");
        std::fs::write(&path, "4 1 1 sideways\n").unwrap();
        let err = ReachabilityDb::open(4, &path).unwrap_err();
        assert!(matches!(err, DriverError::DbParse { line: 1, .. }));
    }
}
