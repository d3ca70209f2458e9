//! North-east walks: parsing, validation against the k-collinearity rule,
//! the symmetry group (complement, reverse), normal forms, and corpus I/O.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{Line, Point};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid step character {0:?}; expected 'N' or 'E'")]
    InvalidStep(char),
    #[error("k must be at least 3, got {0}")]
    InvalidK(u32),
    #[error("corpus line {line}: {source}")]
    Corpus {
        line: usize,
        #[source]
        source: Box<WalkError>,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Step {
    North,
    East,
}

impl Step {
    pub fn complement(self) -> Step {
        match self {
            Step::North => Step::East,
            Step::East => Step::North,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Step::North => 'N',
            Step::East => 'E',
        }
    }

    /// Binary form: north is 0, east is 1.
    pub fn to_bit(self) -> char {
        match self {
            Step::North => '0',
            Step::East => '1',
        }
    }
}

/// A north-east walk starting at the origin. Ordering is lexicographic with
/// north before east, which matches ordering by binary string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Walk {
    steps: Vec<Step>,
}

impl Walk {
    pub fn new(steps: Vec<Step>) -> Self {
        Walk { steps }
    }

    pub fn empty() -> Self {
        Walk::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The walk's point sequence, starting at the origin; one point per
    /// antidiagonal.
    pub fn points(&self) -> Vec<Point> {
        points_of(&self.steps)
    }

    pub fn endpoint(&self) -> Point {
        let east = self.steps.iter().filter(|s| **s == Step::East).count() as u32;
        Point::new(east, self.steps.len() as u32 - east)
    }

    pub fn starts_north(&self) -> bool {
        self.steps.first().is_none_or(|s| *s == Step::North)
    }

    /// Swap north and east steps elementwise.
    pub fn complement(&self) -> Walk {
        Walk::new(self.steps.iter().map(|s| s.complement()).collect())
    }

    /// Reverse the step sequence.
    pub fn reverse(&self) -> Walk {
        Walk::new(self.steps.iter().rev().copied().collect())
    }

    /// Lexicographically least walk (north as 0, east as 1) among this walk,
    /// its complement, its reverse, and its reversed complement.
    pub fn normal_form(&self) -> Walk {
        let mut best = self.clone();
        for candidate in [
            self.complement(),
            self.reverse(),
            self.reverse().complement(),
        ] {
            if candidate < best {
                best = candidate;
            }
        }
        best
    }

    pub fn is_normal_form(&self) -> bool {
        *self == self.normal_form()
    }

    /// Binary string form, north as '0' and east as '1'.
    pub fn encode_bits(&self) -> String {
        self.steps.iter().map(|s| s.to_bit()).collect()
    }

    /// Every line containing at least k walk points, with its point count.
    /// The walk avoids k collinear points iff the report is empty.
    pub fn validate(&self, k: u32) -> Result<ViolationReport, WalkError> {
        if k < 3 {
            return Err(WalkError::InvalidK(k));
        }
        let pts = self.points();
        let mut pair_counts: BTreeMap<Line, u64> = BTreeMap::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let line = Line::through(pts[i], pts[j])
                    .expect("two points of a monotone walk always span a nonnegative slope");
                *pair_counts.entry(line).or_insert(0) += 1;
            }
        }
        let violations = pair_counts
            .into_iter()
            .filter_map(|(line, pairs)| {
                // t points on a line produce t*(t-1)/2 pairs
                let t = ((1.0 + (1.0 + 8.0 * pairs as f64).sqrt()) / 2.0).round() as u32;
                debug_assert_eq!(u64::from(t) * u64::from(t - 1) / 2, pairs);
                (t >= k).then_some((line, t))
            })
            .collect();
        Ok(ViolationReport { violations })
    }
}

/// Point sequence for a step slice without constructing a `Walk`.
pub fn points_of(steps: &[Step]) -> Vec<Point> {
    let mut pts = Vec::with_capacity(steps.len() + 1);
    let mut p = Point::new(0, 0);
    pts.push(p);
    for step in steps {
        p = match step {
            Step::North => Point::new(p.x, p.y + 1),
            Step::East => Point::new(p.x + 1, p.y),
        };
        pts.push(p);
    }
    pts
}

impl FromStr for Walk {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                'N' | 'n' => Ok(Step::North),
                'E' | 'e' => Ok(Step::East),
                other => Err(WalkError::InvalidStep(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Walk::new)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            write!(f, "{}", step.to_char())?;
        }
        Ok(())
    }
}

/// Lines with at least k points on a walk.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    violations: Vec<(Line, u32)>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[(Line, u32)] {
        &self.violations
    }

    pub fn lines(&self) -> impl Iterator<Item = &Line> {
        self.violations.iter().map(|(line, _)| line)
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (i, (line, count)) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "line {line} carries {count} walk points")?;
        }
        Ok(())
    }
}

/// Normal forms of the given walks with duplicates removed; the result size
/// is the number of equivalence classes.
pub fn dedup<I: IntoIterator<Item = Walk>>(walks: I) -> std::collections::BTreeSet<Walk> {
    walks.into_iter().map(|w| w.normal_form()).collect()
}

/// Read a walk corpus: one walk per line, `#`-prefixed lines are comments.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<Walk>, WalkError> {
    let mut walks = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let walk = trimmed.parse().map_err(|e| WalkError::Corpus {
            line: idx + 1,
            source: Box::new(e),
        })?;
        walks.push(walk);
    }
    Ok(walks)
}

pub fn write_corpus<'a, W: Write, I: IntoIterator<Item = &'a Walk>>(
    mut writer: W,
    walks: I,
) -> Result<(), WalkError> {
    for walk in walks {
        writeln!(writer, "{walk}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn walk(s: &str) -> Walk {
        s.parse().unwrap()
    }

    #[test]
    fn steps_to_points_examples() {
        assert_eq!(
            walk("NEN").points(),
            vec![
                Point::new(0, 0),
                Point::new(0, 1),
                Point::new(1, 1),
                Point::new(1, 2)
            ]
        );
        assert_eq!(walk("").points(), vec![Point::new(0, 0)]);
        assert_eq!(
            walk("EE").points(),
            vec![Point::new(0, 0), Point::new(1, 0), Point::new(2, 0)]
        );
    }

    #[test]
    fn validate_examples() {
        let report = walk("NN").validate(3).unwrap();
        assert_eq!(report.violations(), &[(Line::Vertical { x: 0 }, 3)]);

        assert!(walk("NEN").validate(3).unwrap().is_empty());
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(walk("NEN").complement(), walk("ENE"));
        assert_eq!(walk("NNE").reverse(), walk("ENN"));
        assert_eq!(walk("NE").reverse().complement(), walk("NE"));
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(walk("E").normal_form(), walk("N"));
        assert_eq!(walk("EN").normal_form(), walk("NE"));
        assert_eq!(walk("NEN").normal_form(), walk("NEN"));
    }

    #[test]
    fn dedup_examples() {
        let set = dedup([walk("NE"), walk("EN")]);
        assert_eq!(set.len(), 1);
        assert!(set.contains(&walk("NE")));
    }

    #[test]
    fn encode_bits_examples() {
        assert_eq!(walk("NEN").encode_bits(), "010");
        assert_eq!(walk("").encode_bits(), "");
        assert_eq!(walk("EEN").encode_bits(), "110");
    }

    #[test]
    fn corpus_roundtrip_with_comments() {
        let text = "# maximal walks\nNEN\n\nENE\n";
        let walks = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(walks, vec![walk("NEN"), walk("ENE")]);
        let mut out = Vec::new();
        write_corpus(&mut out, &walks).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "NEN\nENE\n");
    }

    #[test]
    fn corpus_rejects_bad_step() {
        let err = read_corpus("NEX\n".as_bytes()).unwrap_err();
        assert!(matches!(err, WalkError::Corpus { line: 1, .. }));
    }

    #[test]
    fn empty_walk_is_valid_for_all_k() {
        for k in 3..8 {
            assert!(walk("").validate(k).unwrap().is_empty());
        }
    }

    #[test]
    fn endpoint_matches_points() {
        let w = walk("NENNEE");
        assert_eq!(w.endpoint(), *w.points().last().unwrap());
        assert_eq!(w.endpoint(), Point::new(3, 3));
    }

    fn arb_walk(max_len: usize) -> impl Strategy<Value = Walk> {
        prop::collection::vec(prop::bool::ANY, 0..max_len).prop_map(|bits| {
            Walk::new(
                bits.into_iter()
                    .map(|b| if b { Step::East } else { Step::North })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn normal_form_is_idempotent(w in arb_walk(24)) {
            let nf = w.normal_form();
            prop_assert_eq!(nf.normal_form(), nf);
        }

        #[test]
        fn normal_form_constant_on_orbit(w in arb_walk(24)) {
            let nf = w.normal_form();
            prop_assert_eq!(w.complement().normal_form(), nf.clone());
            prop_assert_eq!(w.reverse().normal_form(), nf.clone());
            prop_assert_eq!(w.reverse().complement().normal_form(), nf);
        }

        #[test]
        fn orbit_size_at_most_four(w in arb_walk(16)) {
            let orbit: std::collections::BTreeSet<Walk> = [
                w.clone(), w.complement(), w.reverse(), w.reverse().complement()
            ].into_iter().collect();
            prop_assert!(orbit.len() <= 4);
        }

        #[test]
        fn validity_invariant_under_symmetry(w in arb_walk(16), k in 3u32..6) {
            let valid = w.validate(k).unwrap().is_empty();
            for g in [w.complement(), w.reverse(), w.reverse().complement()] {
                prop_assert_eq!(g.validate(k).unwrap().is_empty(), valid);
            }
        }

        #[test]
        fn one_point_per_antidiagonal(w in arb_walk(24)) {
            let pts = w.points();
            prop_assert_eq!(pts.len(), w.len() + 1);
            for (c, p) in pts.iter().enumerate() {
                prop_assert_eq!(p.antidiagonal() as usize, c);
            }
        }

        #[test]
        fn k3_walks_long_or_repetitive(w in arb_walk(12)) {
            let report = w.validate(3).unwrap();
            if w.len() >= 4 {
                // every walk of four or more steps has three collinear points
                prop_assert!(!report.is_empty());
            } else if w.steps().windows(2).all(|p| p[0] != p[1]) {
                // short alternating walks are GR(3)
                prop_assert!(report.is_empty());
            }
        }
    }
}
