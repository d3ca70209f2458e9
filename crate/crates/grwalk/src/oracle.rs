//! Exhaustive backtracking search over north-east walks, independent of any
//! SAT machinery: ground truth for small k.
//!
//! The searcher maintains, per lattice line through at least two walk points,
//! the number of point *pairs* on that line. Appending a point adds one pair
//! per earlier point on the line, so pair counts need no deduplication and
//! undo is a plain decrement. A line carries k walk points exactly when its
//! pair count reaches k(k-1)/2.
//!
//! Only vertical, horizontal, and Proposition-1-band lines are tracked: a
//! prefix that survives the horizontal/vertical check never has k-1
//! consecutive equal steps, so out-of-band lines can never reach k points.

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};
use std::io::{self, Write};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::geometry::{gcd, Point};
use crate::walk::{Step, Walk};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("k must be at least 3, got {0}")]
    InvalidK(u32),
    #[error("exact enumeration is only feasible for k <= 6, got {0}")]
    KTooLarge(u32),
    #[error("prefix of {0} steps already violates the collinearity rule")]
    InvalidPrefix(usize),
}

/// Depth cap keeping packed line keys within range; far beyond any search
/// this oracle can finish anyway.
const MAX_DEPTH: u32 = 1000;

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn write(&mut self, _: &[u8]) {
        unreachable!("line keys hash as u64")
    }

    fn write_u64(&mut self, value: u64) {
        self.0 = (self.0 ^ value).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

type LineCounts = HashMap<u64, u32, BuildHasherDefault<KeyHasher>>;

const VERTICAL_TAG: u64 = 1 << 62;

/// Packed key of the line through two walk points, or `None` when the line
/// cannot reach k collinear points and is not tracked.
#[inline]
fn line_key(k: u32, q: Point, p: Point) -> Option<u64> {
    let dx = u64::from(p.x - q.x);
    let dy = u64::from(p.y - q.y);
    if dx == 0 {
        return Some(VERTICAL_TAG | u64::from(q.x));
    }
    let (rise, run) = if dy == 0 {
        (0, 1)
    } else {
        let g = gcd(dy, dx);
        let (rise, run) = (dy / g, dx / g);
        let band = u64::from(k - 2);
        if rise > band * run || run > band * rise {
            return None;
        }
        (rise, run)
    };
    let alpha = i64::from(q.y) * run as i64 - rise as i64 * i64::from(q.x);
    debug_assert!(rise < 1 << 10 && run < 1 << 10 && alpha.unsigned_abs() < 1 << 41);
    Some(rise << 52 | run << 42 | (alpha + (1 << 41)) as u64)
}

struct Searcher {
    k: u32,
    pair_threshold: u32,
    pts: Vec<Point>,
    steps: Vec<Step>,
    counts: LineCounts,
    journal: Vec<u64>,
    marks: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Searcher {
    fn new(k: u32, deadline: Option<Instant>) -> Self {
        Searcher {
            k,
            pair_threshold: k * (k - 1) / 2,
            pts: vec![Point::new(0, 0)],
            steps: Vec::new(),
            counts: LineCounts::default(),
            journal: Vec::new(),
            marks: Vec::new(),
            nodes: 0,
            deadline,
            timed_out: false,
        }
    }

    fn depth(&self) -> u32 {
        self.steps.len() as u32
    }

    /// Extend the walk by one step if the collinearity rule still holds.
    fn try_push(&mut self, step: Step) -> bool {
        let last = *self.pts.last().expect("origin always present");
        let p = match step {
            Step::North => Point::new(last.x, last.y + 1),
            Step::East => Point::new(last.x + 1, last.y),
        };
        let mark = self.journal.len();
        let mut ok = true;
        for i in 0..self.pts.len() {
            let Some(key) = line_key(self.k, self.pts[i], p) else {
                continue;
            };
            let count = self.counts.entry(key).or_insert(0);
            *count += 1;
            self.journal.push(key);
            if *count >= self.pair_threshold {
                ok = false;
                break;
            }
        }
        if !ok {
            self.rollback(mark);
            return false;
        }
        self.marks.push(mark);
        self.pts.push(p);
        self.steps.push(step);
        true
    }

    fn pop(&mut self) {
        self.pts.pop();
        self.steps.pop();
        let mark = self.marks.pop().expect("pop without matching push");
        self.rollback(mark);
    }

    fn rollback(&mut self, mark: usize) {
        for key in self.journal.drain(mark..) {
            match self.counts.get_mut(&key) {
                Some(1) => {
                    self.counts.remove(&key);
                }
                Some(count) => *count -= 1,
                None => unreachable!("journal key missing from counts"),
            }
        }
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    fn current_walk(&self) -> Walk {
        Walk::new(self.steps.clone())
    }

    /// Seed the searcher with a fixed prefix.
    fn push_prefix(&mut self, prefix: &Walk) -> Result<(), OracleError> {
        for &step in prefix.steps() {
            if !self.try_push(step) {
                return Err(OracleError::InvalidPrefix(prefix.len()));
            }
        }
        Ok(())
    }
}

fn check_k(k: u32) -> Result<(), OracleError> {
    if k < 3 {
        return Err(OracleError::InvalidK(k));
    }
    Ok(())
}

/// Budget limiting a [`search_max`] run; exceeding one makes the outcome
/// inexhaustive rather than an error.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchBudget {
    pub max_steps: Option<u32>,
    pub time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn steps(max_steps: u32) -> Self {
        SearchBudget {
            max_steps: Some(max_steps),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Longest walk length found, in steps.
    pub longest: u32,
    /// All north-first walks of the longest length found (before dedup).
    pub witnesses: Vec<Walk>,
    /// When true the search space was fully explored, so the smallest length
    /// forcing k collinear points is exactly `longest + 1`.
    pub exhausted: bool,
}

impl SearchOutcome {
    /// `a(k)` when the search was exhaustive.
    pub fn a_value(&self) -> Option<u32> {
        self.exhausted.then_some(self.longest + 1)
    }
}

/// Depth-first search for the longest walk avoiding k collinear points,
/// restricted to north first steps (complementation loses no lengths).
pub fn search_max(k: u32, budget: SearchBudget) -> Result<SearchOutcome, OracleError> {
    check_k(k)?;
    let deadline = budget.time.map(|t| Instant::now() + t);
    let limit = budget.max_steps.unwrap_or(MAX_DEPTH).min(MAX_DEPTH);
    let mut searcher = Searcher::new(k, deadline);
    let mut longest = 0u32;
    let mut witnesses = Vec::new();
    let mut budget_hit = false;

    fn dfs(
        s: &mut Searcher,
        limit: u32,
        longest: &mut u32,
        witnesses: &mut Vec<Walk>,
        budget_hit: &mut bool,
    ) {
        if s.out_of_time() {
            return;
        }
        if s.depth() > *longest {
            *longest = s.depth();
            witnesses.clear();
        }
        if s.depth() == *longest {
            witnesses.push(s.current_walk());
        }
        if s.depth() == limit {
            *budget_hit = true;
            return;
        }
        for step in [Step::North, Step::East] {
            if s.depth() == 0 && step == Step::East {
                continue; // north-first
            }
            if s.try_push(step) {
                dfs(s, limit, longest, witnesses, budget_hit);
                s.pop();
            }
        }
    }
    dfs(
        &mut searcher,
        limit,
        &mut longest,
        &mut witnesses,
        &mut budget_hit,
    );
    Ok(SearchOutcome {
        longest,
        witnesses,
        exhausted: !searcher.timed_out && !budget_hit,
    })
}

/// All m-step walks avoiding k collinear points, in lexicographic step order
/// (north before east), before any isomorphism rejection.
pub fn enumerate_all(k: u32, m: u32, north_first: bool) -> Result<Vec<Walk>, OracleError> {
    check_k(k)?;
    let mut out = Vec::new();
    let mut searcher = Searcher::new(k, None);
    enumerate_into(&mut searcher, m.min(MAX_DEPTH), north_first, &mut |w| {
        out.push(w)
    });
    Ok(out)
}

/// All m-step walks extending a fixed prefix, in lexicographic order. Useful
/// for partitioning a search across workers: the union over all valid
/// prefixes of one depth equals the unpartitioned enumeration.
pub fn enumerate_from_prefix(k: u32, m: u32, prefix: &Walk) -> Result<Vec<Walk>, OracleError> {
    check_k(k)?;
    let mut searcher = Searcher::new(k, None);
    searcher.push_prefix(prefix)?;
    let mut out = Vec::new();
    enumerate_into(&mut searcher, m.min(MAX_DEPTH), false, &mut |w| out.push(w));
    Ok(out)
}

/// Partitioned enumeration: fixes the first `prefix_depth` steps, hands each
/// viable prefix to a worker thread, and concatenates results in prefix
/// order. Output is identical to [`enumerate_all`].
pub fn enumerate_all_parallel(
    k: u32,
    m: u32,
    north_first: bool,
    prefix_depth: u32,
    threads: usize,
) -> Result<Vec<Walk>, OracleError> {
    check_k(k)?;
    let depth = prefix_depth.min(m);
    let prefixes = enumerate_all(k, depth, north_first)?;
    if depth >= m || threads <= 1 || prefixes.len() <= 1 {
        return enumerate_all(k, m, north_first);
    }
    let mut results: Vec<Vec<Walk>> = Vec::new();
    std::thread::scope(|scope| -> Result<(), OracleError> {
        let mut handles = Vec::new();
        for chunk in prefixes.chunks(prefixes.len().div_ceil(threads)) {
            handles.push(scope.spawn(move || -> Result<Vec<Walk>, OracleError> {
                let mut acc = Vec::new();
                for prefix in chunk {
                    acc.extend(enumerate_from_prefix(k, m, prefix)?);
                }
                Ok(acc)
            }));
        }
        for handle in handles {
            results.push(handle.join().expect("worker panicked")?);
        }
        Ok(())
    })?;
    Ok(results.into_iter().flatten().collect())
}

fn enumerate_into(
    searcher: &mut Searcher,
    m: u32,
    north_first: bool,
    emit: &mut impl FnMut(Walk),
) {
    if searcher.depth() == m {
        emit(searcher.current_walk());
        return;
    }
    for step in [Step::North, Step::East] {
        if north_first && searcher.depth() == 0 && step == Step::East {
            continue;
        }
        if searcher.try_push(step) {
            enumerate_into(searcher, m, north_first, emit);
            searcher.pop();
        }
    }
}

/// Walk counts per lattice point, over normal-form walks only.
#[derive(Clone, Debug, Default)]
pub struct PointCounts {
    /// Normal-form walks ending at each point, over all lengths.
    pub ending: BTreeMap<Point, u64>,
    /// Normal-form walks passing through each point.
    pub visits: BTreeMap<Point, u64>,
}

impl PointCounts {
    pub fn ending_at(&self, p: Point) -> u64 {
        self.ending.get(&p).copied().unwrap_or(0)
    }
}

/// Lexicographically-least test for a step slice: no strictly smaller member
/// among reverse and reversed complement. The complement of a north-first
/// walk starts east and is always larger.
fn is_normal_form(steps: &[Step]) -> bool {
    let len = steps.len();
    // against reverse: bit(i) vs bit(len-1-i)
    for i in 0..len {
        let a = steps[i];
        let b = steps[len - 1 - i];
        if a != b {
            if b == Step::North {
                return false; // reverse is smaller
            }
            break;
        }
    }
    // against reversed complement: bit(i) vs !bit(len-1-i)
    for i in 0..len {
        let a = steps[i];
        let b = steps[len - 1 - i].complement();
        if a != b {
            if b == Step::North {
                return false;
            }
            break;
        }
    }
    true
}

/// Count normal-form GR(k) walks ending at and passing through each point by
/// exhaustive search. Feasible for k <= 6; the k=6 run takes on the order of
/// an hour.
pub fn point_counts(k: u32) -> Result<PointCounts, OracleError> {
    check_k(k)?;
    if k > 6 {
        return Err(OracleError::KTooLarge(k));
    }
    let mut counts = PointCounts::default();
    // the empty walk is its own normal form
    counts.ending.insert(Point::new(0, 0), 1);
    counts.visits.insert(Point::new(0, 0), 1);
    let mut searcher = Searcher::new(k, None);

    fn dfs(s: &mut Searcher, counts: &mut PointCounts) {
        if s.depth() > 0 && is_normal_form(&s.steps) {
            let end = *s.pts.last().expect("nonempty");
            *counts.ending.entry(end).or_insert(0) += 1;
            for &p in &s.pts {
                *counts.visits.entry(p).or_insert(0) += 1;
            }
        }
        for step in [Step::North, Step::East] {
            if s.depth() == 0 && step == Step::East {
                continue; // normal forms start north
            }
            if s.try_push(step) {
                dfs(s, counts);
                s.pop();
            }
        }
    }
    dfs(&mut searcher, &mut counts);
    Ok(counts)
}

/// Whether some GR(k) walk of exactly `x + y` steps ends at the point.
pub fn reachable(k: u32, target: Point, north_first: bool) -> Result<bool, OracleError> {
    check_k(k)?;
    let mut searcher = Searcher::new(k, None);

    fn dfs(s: &mut Searcher, target: Point, north_first: bool) -> bool {
        let here = *s.pts.last().expect("origin");
        if here == target {
            return true;
        }
        for step in [Step::North, Step::East] {
            if north_first && s.depth() == 0 && step == Step::East {
                continue;
            }
            let next = match step {
                Step::North => Point::new(here.x, here.y + 1),
                Step::East => Point::new(here.x + 1, here.y),
            };
            if next.x > target.x || next.y > target.y {
                continue;
            }
            if s.try_push(step) {
                let found = dfs(s, target, north_first);
                s.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }
    Ok(dfs(&mut searcher, target, north_first))
}

/// CSV export with header `x,y,count`, rows sorted by (x, y).
pub fn write_heatmap_csv(
    counts: &BTreeMap<Point, u64>,
    writer: &mut impl Write,
) -> io::Result<()> {
    writeln!(writer, "x,y,count")?;
    for (p, count) in counts {
        writeln!(writer, "{},{},{count}", p.x, p.y)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::dedup;

    #[test]
    fn a3_is_four() {
        let outcome = search_max(3, SearchBudget::unlimited()).unwrap();
        assert_eq!(outcome.a_value(), Some(4));
        assert_eq!(outcome.longest, 3);
        let forms = dedup(outcome.witnesses);
        assert_eq!(forms.len(), 1);
        assert!(forms.contains(&"NEN".parse().unwrap()));
    }

    #[test]
    fn a4_is_nine_with_two_classes() {
        let outcome = search_max(4, SearchBudget::unlimited()).unwrap();
        assert_eq!(outcome.a_value(), Some(9));
        assert_eq!(dedup(outcome.witnesses).len(), 2);
    }

    #[test]
    fn a5_is_twentynine_with_one_class() {
        let outcome = search_max(5, SearchBudget::unlimited()).unwrap();
        assert_eq!(outcome.a_value(), Some(29));
        let forms = dedup(outcome.witnesses);
        assert_eq!(forms.len(), 1);
        let unique = forms.first().unwrap();
        assert_eq!(unique.len(), 28);
        assert!(unique.validate(5).unwrap().is_empty());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let outcome = search_max(5, SearchBudget::steps(10)).unwrap();
        assert_eq!(outcome.longest, 10);
        assert!(!outcome.exhausted);
        assert_eq!(outcome.a_value(), None);

        let outcome = search_max(3, SearchBudget::steps(10)).unwrap();
        assert!(outcome.exhausted); // tree dies at depth 3, under budget
    }

    #[test]
    fn enumerate_k3_m3() {
        let walks = enumerate_all(3, 3, false).unwrap();
        let strings: Vec<String> = walks.iter().map(|w| w.to_string()).collect();
        assert_eq!(strings, vec!["NEN", "ENE"]);
        assert_eq!(dedup(walks).len(), 1);
    }

    #[test]
    fn enumerate_agrees_with_unpruned_validation() {
        // pruning soundness: compare against validating every walk
        for (k, m) in [(3, 6), (4, 9), (4, 12)] {
            let pruned = enumerate_all(k, m, false).unwrap();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << m) {
                let steps: Vec<Step> = (0..m)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Step::East
                        } else {
                            Step::North
                        }
                    })
                    .collect();
                let w = Walk::new(steps);
                if w.validate(k).unwrap().is_empty() {
                    brute.push(w);
                }
            }
            brute.sort();
            let mut pruned_sorted = pruned.clone();
            pruned_sorted.sort();
            assert_eq!(pruned_sorted, brute, "k={k} m={m}");
        }
    }

    #[test]
    fn maximal_census_via_enumeration() {
        assert_eq!(dedup(enumerate_all(4, 8, false).unwrap()).len(), 2);
        assert_eq!(dedup(enumerate_all(5, 28, false).unwrap()).len(), 1);
        assert!(enumerate_all(4, 9, false).unwrap().is_empty());
    }

    #[test]
    fn prefix_partition_reassembles_enumeration() {
        let whole = enumerate_all(4, 8, true).unwrap();
        for depth in [1u32, 2, 3] {
            let mut reassembled = Vec::new();
            for prefix in enumerate_all(4, depth, true).unwrap() {
                reassembled.extend(enumerate_from_prefix(4, 8, &prefix).unwrap());
            }
            assert_eq!(reassembled, whole, "depth={depth}");
        }
        let parallel = enumerate_all_parallel(4, 8, true, 3, 4).unwrap();
        assert_eq!(parallel, whole);
    }

    #[test]
    fn invalid_prefix_rejected() {
        let err = enumerate_from_prefix(3, 5, &"NN".parse().unwrap()).unwrap_err();
        assert_eq!(err, OracleError::InvalidPrefix(2));
    }

    #[test]
    fn incremental_counts_match_full_recount() {
        // counter exactness: spot-check against Walk::validate on every node
        // of the k=4 tree to depth 7
        let mut searcher = Searcher::new(4, None);
        fn dfs(s: &mut Searcher, depth: u32) {
            let walk = s.current_walk();
            let report = walk.validate(4).unwrap();
            assert!(report.is_empty(), "searcher kept an invalid prefix {walk}");
            if depth == 0 {
                return;
            }
            for step in [Step::North, Step::East] {
                let pushed = s.try_push(step);
                let mut extended = walk.steps().to_vec();
                extended.push(step);
                let fresh = Walk::new(extended).validate(4).unwrap().is_empty();
                assert_eq!(pushed, fresh, "push disagrees with validation");
                if pushed {
                    dfs(s, depth - 1);
                    s.pop();
                }
            }
        }
        dfs(&mut searcher, 7);
    }

    #[test]
    fn reachable_examples() {
        assert!(reachable(3, Point::new(1, 2), true).unwrap());
        assert!(!reachable(3, Point::new(0, 3), true).unwrap());
        assert!(!reachable(3, Point::new(2, 1), true).unwrap());
        assert!(reachable(3, Point::new(2, 1), false).unwrap());
        assert!(reachable(5, Point::new(8, 4), true).unwrap());
    }

    #[test]
    fn point_counts_k5_normal_form_asymmetry() {
        let counts = point_counts(5).unwrap();
        assert_eq!(counts.ending_at(Point::new(8, 4)), 0);
        assert!(counts.ending_at(Point::new(4, 8)) > 0);
        assert!(counts.ending_at(Point::new(9, 4)) > 0);
        assert_eq!(counts.ending_at(Point::new(9, 3)), 0);
    }

    #[test]
    fn point_counts_k4_match_direct_enumeration() {
        let counts = point_counts(4).unwrap();
        let mut expect: BTreeMap<Point, u64> = BTreeMap::new();
        expect.insert(Point::new(0, 0), 1);
        for m in 1..9 {
            for w in enumerate_all(4, m, true).unwrap() {
                if w.is_normal_form() {
                    *expect.entry(w.endpoint()).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(counts.ending, expect);
    }

    #[test]
    fn heatmap_csv_shape() {
        let mut counts = BTreeMap::new();
        counts.insert(Point::new(0, 0), 1u64);
        counts.insert(Point::new(1, 2), 7u64);
        let mut out = Vec::new();
        write_heatmap_csv(&counts, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x,y,count\n0,0,1\n1,2,7\n");
    }

    #[test]
    fn is_normal_form_matches_walk_method() {
        for m in 0..10u32 {
            for mask in 0u32..(1 << m) {
                let steps: Vec<Step> = (0..m)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Step::East
                        } else {
                            Step::North
                        }
                    })
                    .collect();
                let w = Walk::new(steps.clone());
                if w.steps().first() == Some(&Step::East) {
                    continue; // helper is only used on north-first walks
                }
                assert_eq!(is_normal_form(&steps), w.is_normal_form(), "{w}");
            }
        }
    }
}
