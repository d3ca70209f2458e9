//! Abstract constraint system asserting the existence of a GR(k) walk with
//! `n` points: path constraints, non-collinearity cardinality constraints,
//! symmetry breaking, extremal blocking, unreachability clauses, streamlining,
//! endpoint pins, and the subpath-extension gadget.
//!
//! An [`Instance`] stores plain clauses grouped by origin (so serialization
//! order is deterministic) plus cardinality constraints in abstract form;
//! lowering to CNF happens in [`crate::formats`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::{self, Line, Point};
use crate::walk::{Step, Walk};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error("point ({x}, {y}) is outside the {n}-point region")]
    OutOfRegion { x: u32, y: u32, n: u32 },
    #[error("variable {0} is not a point variable of the {1}-point region")]
    UnknownVariable(Var, u32),
    #[error("cardinality literals must be distinct and nonzero")]
    MalformedCardinality,
    #[error("cardinality bound {bound} exceeds literal count {len}")]
    BoundTooLarge { bound: u32, len: usize },
    #[error("subpath of {len} steps does not fit a walk of {max} steps")]
    SubpathTooLong { len: usize, max: u32 },
    #[error("unreachability set was computed for k={set_k}, instance has k={k}")]
    MismatchedK { set_k: u32, k: u32 },
    #[error("clause references variable {var} beyond the declared range {max}")]
    VariableCollision { var: Var, max: Var },
}

/// Positive variable identifier.
pub type Var = u32;
/// DIMACS-style literal: the variable id, negated for negative polarity.
pub type Lit = i32;
pub type Clause = Vec<Lit>;

pub fn lit_var(lit: Lit) -> Var {
    lit.unsigned_abs()
}

/// Bijection between region points and variable ids `1..=n(n+1)/2`, numbered
/// along antidiagonals with y increasing within each antidiagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarMap {
    n: u32,
}

impl VarMap {
    pub fn new(n: u32) -> Self {
        VarMap { n }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of point variables, `n(n+1)/2`.
    pub fn count(&self) -> u32 {
        self.n * (self.n + 1) / 2
    }

    pub fn var(&self, p: Point) -> Result<Var, EncodeError> {
        if !p.in_region(self.n) {
            return Err(EncodeError::OutOfRegion {
                x: p.x,
                y: p.y,
                n: self.n,
            });
        }
        let d = p.antidiagonal();
        Ok(d * (d + 1) / 2 + p.y + 1)
    }

    pub fn lit(&self, p: Point) -> Result<Lit, EncodeError> {
        Ok(self.var(p)? as Lit)
    }

    pub fn point(&self, var: Var) -> Result<Point, EncodeError> {
        if var == 0 || var > self.count() {
            return Err(EncodeError::UnknownVariable(var, self.n));
        }
        // largest d with d(d+1)/2 < var
        let mut d = (((8.0 * (var as f64 - 1.0) + 1.0).sqrt() - 1.0) / 2.0) as u32;
        while (d + 1) * (d + 2) / 2 < var {
            d += 1;
        }
        while d * (d + 1) / 2 >= var {
            d -= 1;
        }
        let y = var - d * (d + 1) / 2 - 1;
        Ok(Point::new(d - y, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CardSense {
    AtMost,
    AtLeast,
}

/// A cardinality constraint over distinct literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityConstraint {
    lits: Vec<Lit>,
    bound: u32,
    sense: CardSense,
}

impl CardinalityConstraint {
    pub fn new(lits: Vec<Lit>, bound: u32, sense: CardSense) -> Result<Self, EncodeError> {
        if bound as usize > lits.len() {
            return Err(EncodeError::BoundTooLarge {
                bound,
                len: lits.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for &lit in &lits {
            if lit == 0 || !seen.insert(lit) {
                return Err(EncodeError::MalformedCardinality);
            }
        }
        Ok(CardinalityConstraint { lits, bound, sense })
    }

    pub fn at_most(lits: Vec<Lit>, bound: u32) -> Result<Self, EncodeError> {
        Self::new(lits, bound, CardSense::AtMost)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn sense(&self) -> CardSense {
        self.sense
    }

    /// Equivalent at-most form; at-least-b over L becomes
    /// at-most-(|L|-b) over the negated literals.
    pub fn to_at_most(&self) -> CardinalityConstraint {
        match self.sense {
            CardSense::AtMost => self.clone(),
            CardSense::AtLeast => CardinalityConstraint {
                lits: self.lits.iter().map(|l| -l).collect(),
                bound: self.lits.len() as u32 - self.bound,
                sense: CardSense::AtMost,
            },
        }
    }

    /// Equivalent at-least form, the native shape of a KNF klause.
    pub fn to_at_least(&self) -> CardinalityConstraint {
        match self.sense {
            CardSense::AtLeast => self.clone(),
            CardSense::AtMost => CardinalityConstraint {
                lits: self.lits.iter().map(|l| -l).collect(),
                bound: self.lits.len() as u32 - self.bound,
                sense: CardSense::AtLeast,
            },
        }
    }

    /// True when every assignment satisfies the constraint.
    pub fn is_vacuous(&self) -> bool {
        match self.sense {
            CardSense::AtMost => self.bound as usize >= self.lits.len(),
            CardSense::AtLeast => self.bound == 0,
        }
    }

    pub fn satisfied_by(&self, assignment: &dyn Fn(Var) -> bool) -> bool {
        let true_count = self
            .lits
            .iter()
            .filter(|&&lit| assignment(lit_var(lit)) == (lit > 0))
            .count() as u32;
        match self.sense {
            CardSense::AtMost => true_count <= self.bound,
            CardSense::AtLeast => true_count >= self.bound,
        }
    }
}

/// Clauses forcing the true point variables to form a monotone path from the
/// origin to the final antidiagonal: the origin unit, forward and backward
/// successor clauses, and the anti-split binary clauses.
pub fn build_path_constraints(n: u32) -> Vec<Clause> {
    let vm = VarMap::new(n);
    let v = |x, y| vm.lit(Point::new(x, y)).expect("in region");
    let m = n - 1;
    let mut clauses = vec![vec![v(0, 0)]];
    for p in geometry::region_points(n) {
        let (x, y) = (p.x, p.y);
        if p.antidiagonal() != m {
            clauses.push(vec![-v(x, y), v(x + 1, y), v(x, y + 1)]);
            clauses.push(vec![-v(x + 1, y), -v(x, y + 1)]);
        }
        match (x, y) {
            (0, 0) => {}
            (0, y) => clauses.push(vec![-v(0, y), v(0, y - 1)]),
            (x, 0) => clauses.push(vec![-v(x, 0), v(x - 1, 0)]),
            (x, y) => clauses.push(vec![-v(x, y), v(x - 1, y), v(x, y - 1)]),
        }
    }
    clauses
}

/// Non-collinearity constraints: at-most-(k-1) cardinality constraints for
/// sloped lines and binary clauses for horizontal/vertical lines.
///
/// With `threshold` set to `t`, sloped lines with at most `t` region points
/// are skipped. Dropping constraints preserves unsatisfiability verdicts but
/// satisfying assignments must be re-validated.
pub fn build_noncollinearity(
    k: u32,
    n: u32,
    threshold: Option<u32>,
    use_prop1: bool,
) -> Result<(Vec<CardinalityConstraint>, Vec<Clause>), EncodeError> {
    let vm = VarMap::new(n);
    let min_points = threshold.map_or(k, |t| k.max(t + 1));
    let mut cards = Vec::new();
    if n >= k {
        for line in geometry::enumerate_lines(k, n, use_prop1, min_points)? {
            let lits = line
                .points(n)
                .into_iter()
                .map(|p| vm.lit(p))
                .collect::<Result<Vec<_>, _>>()?;
            cards.push(CardinalityConstraint::at_most(lits, k - 1)?);
        }
    }
    // k vertical points require k-1 consecutive north steps, so blocking the
    // pair (i, j), (i, j+k-1) is exact; same for horizontal lines.
    let mut binary = Vec::new();
    let v = |x, y| vm.lit(Point::new(x, y)).expect("in region");
    for i in 0..n {
        for j in 0..(n - i).saturating_sub(k - 1) {
            binary.push(vec![-v(i, j), -v(i, j + k - 1)]);
        }
    }
    for j in 0..n {
        for i in 0..(n - j).saturating_sub(k - 1) {
            binary.push(vec![-v(i, j), -v(i + k - 1, j)]);
        }
    }
    Ok((cards, binary))
}

/// Complementation symmetry is broken by forcing the first step north; empty
/// for n < 2 where no first step exists.
pub fn build_symmetry_breaking(n: u32) -> Vec<Clause> {
    if n < 2 {
        return Vec::new();
    }
    let vm = VarMap::new(n);
    vec![vec![vm.lit(Point::new(0, 1)).expect("in region")]]
}

/// Unit clauses blocking points no GR(k) walk with a north first step can
/// visit: the lattice points on `y = (k-2)x + (k-1)` and on
/// `y = (x-1)/(k-2)` that lie in the region.
pub fn build_extremal_blocking(k: u32, n: u32) -> Vec<Clause> {
    let vm = VarMap::new(n);
    let mut units = Vec::new();
    let mut x = 0u32;
    loop {
        let y = (k - 2) * x + (k - 1);
        let p = Point::new(x, y);
        if !p.in_region(n) {
            break;
        }
        units.push(vec![-vm.lit(p).expect("in region")]);
        x += 1;
    }
    let mut y = 0u32;
    loop {
        let x = (k - 2) * y + 1;
        let p = Point::new(x, y);
        if !p.in_region(n) {
            break;
        }
        units.push(vec![-vm.lit(p).expect("in region")]);
        y += 1;
    }
    units
}

/// Points established as unreachable under the north-first-step convention.
/// `mirror_complete` holds the points whose mirror image is also known
/// unreachable; only those support translated blocking clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnreachabilitySet {
    k: u32,
    unreachable: BTreeSet<Point>,
    mirror_complete: BTreeSet<Point>,
}

impl UnreachabilitySet {
    pub fn new(k: u32, unreachable: BTreeSet<Point>) -> Self {
        let mirror_complete = unreachable
            .iter()
            .filter(|p| unreachable.contains(&Point::new(p.y, p.x)))
            .copied()
            .collect();
        UnreachabilitySet {
            k,
            unreachable,
            mirror_complete,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn unreachable(&self) -> &BTreeSet<Point> {
        &self.unreachable
    }

    pub fn mirror_complete(&self) -> &BTreeSet<Point> {
        &self.mirror_complete
    }
}

/// Unit clauses for unreachable points plus, for mirror-complete points,
/// binary clauses forbidding the same offset from any intermediate point:
/// `v(x0,y0) -> not v(x0+x, y0+y)`.
pub fn build_unreachability(
    set: &UnreachabilitySet,
    k: u32,
    n: u32,
) -> Result<(Vec<Clause>, Vec<Clause>), EncodeError> {
    if set.k != k {
        return Err(EncodeError::MismatchedK { set_k: set.k, k });
    }
    let vm = VarMap::new(n);
    let mut units = Vec::new();
    for &p in &set.unreachable {
        if p.in_region(n) {
            units.push(vec![-vm.lit(p)?]);
        }
    }
    let mut binaries = Vec::new();
    for &p in &set.mirror_complete {
        let offset = p.antidiagonal();
        if offset + 1 >= n {
            continue;
        }
        for origin in geometry::region_points(n) {
            // the origin unit already covers (x0, y0) = (0, 0)
            if origin == Point::new(0, 0) || origin.antidiagonal() + offset >= n {
                continue;
            }
            let target = Point::new(origin.x + p.x, origin.y + p.y);
            binaries.push(vec![-vm.lit(origin)?, -vm.lit(target)?]);
        }
    }
    Ok((units, binaries))
}

/// Unit clauses blocking every point farther than `2w` from the midline
/// `y = x + 1`, measured as `|y - x - 1|`; a walk then meets each
/// antidiagonal within `w` lattice points of the midline's crossing.
pub fn build_streamline_band(n: u32, w: u32) -> Vec<Clause> {
    let vm = VarMap::new(n);
    geometry::region_points(n)
        .filter(|p| (i64::from(p.y) - i64::from(p.x) - 1).unsigned_abs() > u64::from(2 * w))
        .map(|p| vec![-vm.lit(p).expect("in region")])
        .collect()
}

/// Unit clause forcing a point onto the walk.
pub fn pin_endpoint(p: Point, n: u32) -> Result<Clause, EncodeError> {
    let vm = VarMap::new(n);
    Ok(vec![vm.lit(p)?])
}

/// Step variables and placement clauses forcing a fixed step string to occur
/// somewhere in the walk.
///
/// Variable `r_i` (for `1 <= i < n`) holds when the i-th step of the walk is
/// east; `s_i` (for `0 <= i <= n-1-len`) holds when the subpath occupies
/// steps `i+1 ..= i+len`. Ids follow the point variables: `r_i` is
/// `T(n) + i` and `s_i` is `T(n) + (n-1) + i + 1`.
#[derive(Clone, Debug)]
pub struct SubpathExtension {
    pub r_count: u32,
    pub s_count: u32,
    pub clauses: Vec<Clause>,
}

pub fn build_subpath_extension(subpath: &Walk, n: u32) -> Result<SubpathExtension, EncodeError> {
    let len = subpath.len() as u32;
    if len > n - 1 {
        return Err(EncodeError::SubpathTooLong {
            len: subpath.len(),
            max: n - 1,
        });
    }
    let vm = VarMap::new(n);
    let base = vm.count();
    let r_count = n - 1;
    let s_count = n - len;
    let r = |i: u32| (base + i) as Lit; // 1 <= i <= n-1
    let s = |i: u32| (base + r_count + i + 1) as Lit; // 0 <= i < s_count
    let v = |p: Point| vm.lit(p).expect("in region");

    let mut clauses = Vec::new();
    // step-linking clauses tying r_(x+y) to the points of each antidiagonal
    for p in geometry::region_points(n) {
        let d = p.antidiagonal();
        if d == 0 || d >= n {
            continue;
        }
        if p.x > 0 {
            let west = Point::new(p.x - 1, p.y);
            clauses.push(vec![-v(west), -v(p), r(d)]);
            clauses.push(vec![-v(p), -r(d), v(west)]);
        }
        if p.y > 0 {
            let south = Point::new(p.x, p.y - 1);
            clauses.push(vec![-v(south), -v(p), -r(d)]);
            clauses.push(vec![-v(p), r(d), v(south)]);
        }
    }
    // s_i fixes the steps it covers to match the subpath
    for i in 0..s_count {
        for (j, step) in subpath.steps().iter().enumerate() {
            let step_lit = r(i + j as u32 + 1);
            clauses.push(match step {
                Step::East => vec![-s(i), step_lit],
                Step::North => vec![-s(i), -step_lit],
            });
        }
    }
    // the subpath must start somewhere
    clauses.push((0..s_count).map(s).collect());
    Ok(SubpathExtension {
        r_count,
        s_count,
        clauses,
    })
}

/// Instance construction options, mirroring what went into an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub k: u32,
    pub n: u32,
    pub symmetry: bool,
    pub extremal: bool,
    pub use_prop1: bool,
    pub threshold: Option<u32>,
    pub streamline_halfwidth: Option<u32>,
    pub pinned: Option<Point>,
    pub subpath: Option<String>,
    pub unreachable_points: usize,
}

/// The abstract constraint set for one (k, n) configuration. Clauses are kept
/// grouped by origin; serialization emits groups in a fixed order.
#[derive(Clone, Debug)]
pub struct Instance {
    k: u32,
    n: u32,
    varmap: VarMap,
    path: Vec<Clause>,
    symmetry: Vec<Clause>,
    extremal: Vec<Clause>,
    unreach_units: Vec<Clause>,
    unreach_binaries: Vec<Clause>,
    hv: Vec<Clause>,
    cards: Vec<CardinalityConstraint>,
    extension: Vec<Clause>,
    streamline: Vec<Clause>,
    pins: Vec<Clause>,
    extra: Vec<Clause>,
    r_count: u32,
    s_count: u32,
    provenance: Provenance,
}

impl Instance {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn varmap(&self) -> &VarMap {
        &self.varmap
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Declared variables: point variables followed by step/placement
    /// variables. Lowering auxiliaries are allocated past this.
    pub fn var_count(&self) -> u32 {
        self.varmap.count() + self.r_count + self.s_count
    }

    /// First free id for auxiliary variables introduced by lowering.
    pub fn aux_var_base(&self) -> Var {
        self.var_count() + 1
    }

    pub fn cards(&self) -> &[CardinalityConstraint] {
        &self.cards
    }

    /// Plain clauses before the cardinality block, in serialization order.
    pub fn clauses_before_cards(&self) -> impl Iterator<Item = &Clause> {
        self.path
            .iter()
            .chain(&self.symmetry)
            .chain(&self.extremal)
            .chain(&self.unreach_units)
            .chain(&self.unreach_binaries)
            .chain(&self.hv)
    }

    /// Plain clauses after the cardinality block, in serialization order.
    pub fn clauses_after_cards(&self) -> impl Iterator<Item = &Clause> {
        self.extension
            .iter()
            .chain(&self.streamline)
            .chain(&self.pins)
            .chain(&self.extra)
    }

    pub fn all_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses_before_cards().chain(self.clauses_after_cards())
    }

    pub fn clause_count(&self) -> usize {
        self.all_clauses().count()
    }

    /// Negative unit literals, i.e. variables fixed false in this instance.
    pub fn blocked_vars(&self) -> BTreeSet<Var> {
        self.all_clauses()
            .filter(|c| c.len() == 1 && c[0] < 0)
            .map(|c| lit_var(c[0]))
            .collect()
    }

    /// Append extra cardinality constraints (deterministically at the end of
    /// the cardinality block). Used to restore heuristically dropped lines.
    pub fn push_cards(&mut self, cards: impl IntoIterator<Item = CardinalityConstraint>) {
        self.cards.extend(cards);
    }

    /// Append plain clauses at the very end of the instance. Used for
    /// solution blocking during all-solutions enumeration.
    pub fn push_extra_clauses(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        self.extra.extend(clauses);
    }

    /// Lines whose at-most constraint is already present.
    pub fn constrained_lines(&self) -> BTreeSet<Line> {
        let mut lines = BTreeSet::new();
        for card in &self.cards {
            let pts: Vec<Point> = card
                .lits()
                .iter()
                .filter_map(|&l| self.varmap.point(lit_var(l)).ok())
                .collect();
            if pts.len() >= 2 {
                if let Some(line) = Line::through(pts[0], pts[1]) {
                    lines.insert(line);
                }
            }
        }
        lines
    }

    /// A walk satisfies the instance when its induced point assignment
    /// satisfies every clause and every cardinality constraint. Walks longer
    /// or shorter than n-1 steps never satisfy the path constraints.
    pub fn satisfied_by_walk(&self, walk: &Walk) -> bool {
        if walk.len() as u32 != self.n - 1 {
            return false;
        }
        let true_vars: BTreeSet<Var> = walk
            .points()
            .into_iter()
            .map(|p| self.varmap.var(p).expect("walk point in region"))
            .collect();
        // step variables r_i derived from the walk; s_i from subpath matching
        let mut assignment = vec![false; self.var_count() as usize + 1];
        for &v in &true_vars {
            assignment[v as usize] = true;
        }
        let base = self.varmap.count() as usize;
        for (i, step) in walk.steps().iter().enumerate() {
            if self.r_count > 0 {
                assignment[base + i + 1] = *step == Step::East;
            }
        }
        if self.s_count > 0 {
            let subpath: Vec<Step> = self
                .provenance
                .subpath
                .as_deref()
                .unwrap_or("")
                .parse::<Walk>()
                .map(|w| w.steps().to_vec())
                .unwrap_or_default();
            for i in 0..self.s_count as usize {
                let window = &walk.steps()[i..i + subpath.len()];
                assignment[base + self.r_count as usize + i + 1] = window == subpath.as_slice();
            }
        }
        let assign = |v: Var| assignment.get(v as usize).copied().unwrap_or(false);
        self.all_clauses()
            .all(|c| c.iter().any(|&l| assign(lit_var(l)) == (l > 0)))
            && self.cards.iter().all(|card| card.satisfied_by(&assign))
    }

    /// Every literal must reference a declared variable.
    fn check_well_formed(&self) -> Result<(), EncodeError> {
        let max = self.var_count();
        for clause in self.all_clauses() {
            for &lit in clause {
                let var = lit_var(lit);
                if var == 0 || var > max {
                    return Err(EncodeError::VariableCollision { var, max });
                }
            }
        }
        for card in &self.cards {
            for &lit in card.lits() {
                let var = lit_var(lit);
                if var == 0 || var > max {
                    return Err(EncodeError::VariableCollision { var, max });
                }
            }
        }
        Ok(())
    }
}

/// Assembles instances. Defaults: symmetry breaking and extremal blocking on,
/// the Proposition-1 slope filter on, no heuristic threshold, no streamlining,
/// no pinned endpoint, no subpath.
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    k: u32,
    n: u32,
    symmetry: bool,
    extremal: bool,
    use_prop1: bool,
    threshold: Option<u32>,
    streamline_halfwidth: Option<u32>,
    pinned: Option<Point>,
    subpath: Option<Walk>,
    unreachability: Option<UnreachabilitySet>,
}

impl InstanceBuilder {
    pub fn new(k: u32, n: u32) -> Self {
        InstanceBuilder {
            k,
            n,
            symmetry: true,
            extremal: true,
            use_prop1: true,
            threshold: None,
            streamline_halfwidth: None,
            pinned: None,
            subpath: None,
            unreachability: None,
        }
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn extremal(mut self, on: bool) -> Self {
        self.extremal = on;
        self
    }

    pub fn use_prop1(mut self, on: bool) -> Self {
        self.use_prop1 = on;
        self
    }

    pub fn threshold(mut self, t: Option<u32>) -> Self {
        self.threshold = t;
        self
    }

    pub fn streamline(mut self, halfwidth: Option<u32>) -> Self {
        self.streamline_halfwidth = halfwidth;
        self
    }

    pub fn pin(mut self, p: Point) -> Self {
        self.pinned = Some(p);
        self
    }

    pub fn subpath(mut self, b: Walk) -> Self {
        self.subpath = Some(b);
        self
    }

    pub fn unreachability(mut self, set: UnreachabilitySet) -> Self {
        self.unreachability = Some(set);
        self
    }

    pub fn build(self) -> Result<Instance, EncodeError> {
        if self.k < 3 || self.n == 0 {
            return Err(EncodeError::Geometry(
                geometry::GeometryError::InvalidRegion { k: self.k, n: self.n },
            ));
        }
        let (k, n) = (self.k, self.n);
        // n < k yields path constraints only; useful for harness smoke tests
        let (cards, hv) = if n >= k {
            build_noncollinearity(k, n, self.threshold, self.use_prop1)?
        } else {
            (Vec::new(), Vec::new())
        };
        let (unreach_units, unreach_binaries) = match &self.unreachability {
            Some(set) => build_unreachability(set, k, n)?,
            None => (Vec::new(), Vec::new()),
        };
        let (extension, r_count, s_count) = match &self.subpath {
            Some(b) => {
                let ext = build_subpath_extension(b, n)?;
                (ext.clauses, ext.r_count, ext.s_count)
            }
            None => (Vec::new(), 0, 0),
        };
        let pins = match self.pinned {
            Some(p) => vec![pin_endpoint(p, n)?],
            None => Vec::new(),
        };
        let instance = Instance {
            k,
            n,
            varmap: VarMap::new(n),
            path: build_path_constraints(n),
            symmetry: if self.symmetry {
                build_symmetry_breaking(n)
            } else {
                Vec::new()
            },
            extremal: if self.extremal && n >= k {
                build_extremal_blocking(k, n)
            } else {
                Vec::new()
            },
            unreach_units,
            unreach_binaries,
            hv,
            cards,
            extension,
            streamline: match self.streamline_halfwidth {
                Some(w) => build_streamline_band(n, w),
                None => Vec::new(),
            },
            pins,
            extra: Vec::new(),
            r_count,
            s_count,
            provenance: Provenance {
                k,
                n,
                symmetry: self.symmetry,
                extremal: self.extremal,
                use_prop1: self.use_prop1,
                threshold: self.threshold,
                streamline_halfwidth: self.streamline_halfwidth,
                pinned: self.pinned,
                subpath: self.subpath.as_ref().map(|w| w.to_string()),
                unreachable_points: self
                    .unreachability
                    .as_ref()
                    .map_or(0, |s| s.unreachable().len()),
            },
        };
        instance.check_well_formed()?;
        Ok(instance)
    }
}

/// Heuristic threshold the experiments settled on: none for small k, 13 for
/// the final k=6 unsatisfiability check, 16 for k=7 at n >= 150.
pub fn recommended_threshold(k: u32, n: u32, final_unsat_check: bool) -> Option<u32> {
    match k {
        0..=5 => None,
        6 if final_unsat_check => Some(13),
        6 => None,
        _ => (n >= 150).then_some(16),
    }
}
