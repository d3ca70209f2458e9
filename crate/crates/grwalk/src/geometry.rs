//! Lattice-region geometry: points of the triangular region, canonical lines,
//! slope bounds, and the closed-form length bounds for GR(k) walks.
//!
//! The region for an `n`-point walk is `{(x, y) : x, y >= 0, x + y <= n - 1}`.
//! All arithmetic is exact; lines are stored in a canonical integer form so
//! they can be used as hash/set keys.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("k must be at least 3, got {0}")]
    InvalidK(u32),
    #[error("need n >= k >= 3, got n={n}, k={k}")]
    InvalidRegion { k: u32, n: u32 },
    #[error("min_points must be at least k, got min_points={min_points}, k={k}")]
    InvalidMinPoints { k: u32, min_points: u32 },
    #[error("point ({0}, {1}) outside the {2}-point region")]
    OutOfRegion(u32, u32, u32),
    #[error("length bound overflows for k={0}")]
    BoundOverflow(u32),
}

/// A lattice point with nonnegative coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub const fn new(x: u32, y: u32) -> Self {
        Point { x, y }
    }

    /// Index of the antidiagonal `x + y` this point lies on.
    pub const fn antidiagonal(self) -> u32 {
        self.x + self.y
    }

    pub const fn in_region(self, n: u32) -> bool {
        self.x + self.y < n
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Iterator over all region points in antidiagonal-major order, i.e. the
/// variable-numbering order used by the encoder.
pub fn region_points(n: u32) -> impl Iterator<Item = Point> {
    (0..n).flat_map(move |d| (0..=d).map(move |y| Point::new(d - y, y)))
}

/// A lattice line that can contain two or more points of a north-east walk.
///
/// Any two distinct points of a monotone walk determine a line of nonnegative
/// rational slope (or a vertical line), so negative slopes never occur here.
/// Sloped lines satisfy `y * run = rise * x + alpha` with `run >= 1`,
/// `rise >= 0` and `gcd(rise, run) = 1`; horizontal lines are the `rise = 0`
/// case. The representation is unique per point set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Line {
    Vertical { x: u32 },
    Sloped { rise: u32, run: u32, alpha: i64 },
}

impl Line {
    /// Canonical line through two distinct points. Returns `None` when the
    /// slope is negative, since no monotone walk has two points on such a
    /// line.
    pub fn through(p: Point, q: Point) -> Option<Line> {
        debug_assert_ne!(p, q);
        let dx = i64::from(q.x) - i64::from(p.x);
        let dy = i64::from(q.y) - i64::from(p.y);
        if dx == 0 {
            return Some(Line::Vertical { x: p.x });
        }
        let (dx, dy) = if dx < 0 { (-dx, -dy) } else { (dx, dy) };
        if dy < 0 {
            return None;
        }
        let g = gcd(dy as u64, dx as u64) as i64;
        let (rise, run) = (dy / g, dx / g);
        Some(Line::Sloped {
            rise: rise as u32,
            run: run as u32,
            alpha: i64::from(p.y) * run - rise * i64::from(p.x),
        })
    }

    pub fn is_horizontal(&self) -> bool {
        matches!(self, Line::Sloped { rise: 0, .. })
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self, Line::Vertical { .. })
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Line::Vertical { x } => p.x == x,
            Line::Sloped { rise, run, alpha } => {
                i64::from(p.y) * i64::from(run) == i64::from(rise) * i64::from(p.x) + alpha
            }
        }
    }

    /// The region points on this line, ordered by increasing x (increasing y
    /// for vertical lines).
    pub fn points(&self, n: u32) -> Vec<Point> {
        match *self {
            Line::Vertical { x } => {
                if x >= n {
                    return Vec::new();
                }
                (0..n - x).map(|y| Point::new(x, y)).collect()
            }
            Line::Sloped { rise, run, alpha } => match sloped_range(rise, run, alpha, n) {
                None => Vec::new(),
                Some((x_min, count)) => (0..count)
                    .map(|t| {
                        let x = x_min + i64::from(t) * i64::from(run);
                        let y = (i64::from(rise) * x + alpha) / i64::from(run);
                        Point::new(x as u32, y as u32)
                    })
                    .collect(),
            },
        }
    }

    /// Number of region points on the line, without materializing them.
    pub fn point_count(&self, n: u32) -> u32 {
        match *self {
            Line::Vertical { x } => n.saturating_sub(x),
            Line::Sloped { rise, run, alpha } => {
                sloped_range(rise, run, alpha, n).map_or(0, |(_, c)| c)
            }
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Line::Vertical { x } => write!(f, "x={x}"),
            Line::Sloped { rise: 0, alpha, .. } => write!(f, "y={alpha}"),
            Line::Sloped { rise, run: 1, alpha } => {
                if alpha == 0 {
                    write!(f, "y={rise}x")
                } else {
                    write!(f, "y={}x{}{}", rise, if alpha < 0 { "-" } else { "+" }, alpha.abs())
                }
            }
            Line::Sloped { rise, run, alpha } => write!(f, "{run}y={rise}x{}{}", if alpha < 0 { "-" } else { "+" }, alpha.abs()),
        }
    }
}

/// Lattice points on `y*run = rise*x + alpha` within the `n`-point region form
/// an arithmetic progression with step `(run, rise)`. Returns the first x and
/// the number of points, or `None` if the line misses the region.
fn sloped_range(rise: u32, run: u32, alpha: i64, n: u32) -> Option<(i64, u32)> {
    let (rise, run) = (i64::from(rise), i64::from(run));
    let m = i64::from(n) - 1;
    // x ≡ x0 (mod run) with rise*x + alpha ≡ 0 (mod run)
    let x0 = if run == 1 {
        0
    } else {
        let inv = mod_inverse(rise.rem_euclid(run), run)?;
        (-alpha).rem_euclid(run) * inv % run
    };
    // smallest admissible x: x >= 0 and y >= 0
    let mut x_min = if alpha >= 0 {
        x0
    } else if rise == 0 {
        return None; // horizontal with negative alpha has y < 0
    } else {
        let lo = (-alpha + rise - 1) / rise; // ceil(-alpha / rise)
        lo + (x0 - lo).rem_euclid(run)
    };
    if x_min < 0 {
        x_min += ((-x_min + run - 1) / run) * run;
    }
    // largest admissible x: x + y <= m, i.e. x*(rise+run) <= run*m - alpha
    let num = run * m - alpha;
    if num < 0 {
        return None;
    }
    let x_max = num / (rise + run);
    if x_max < x_min {
        return None;
    }
    Some((x_min, ((x_max - x_min) / run + 1) as u32))
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    // extended Euclid; m >= 2, returns a^{-1} mod m when gcd(a, m) = 1
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inclusive slope interval `[1/(k-2), k-2]`; non-collinearity constraints for
/// lines with slopes outside it are provably unnecessary for walks that never
/// take `k-1` consecutive equal steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlopeInterval {
    k: u32,
}

impl SlopeInterval {
    /// Lower endpoint as (rise, run).
    pub fn lo(&self) -> (u32, u32) {
        (1, self.k - 2)
    }

    /// Upper endpoint as (rise, run).
    pub fn hi(&self) -> (u32, u32) {
        (self.k - 2, 1)
    }

    /// Whether the positive slope rise/run lies within the interval.
    pub fn contains(&self, rise: u32, run: u32) -> bool {
        let (rise, run, k2) = (u64::from(rise), u64::from(run), u64::from(self.k - 2));
        rise * k2 >= run && rise <= k2 * run
    }
}

impl fmt::Display for SlopeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[1/{}, {}]", self.k - 2, self.k - 2)
    }
}

/// Slope interval outside which non-collinearity constraints can be dropped.
pub fn prop1_slope_bounds(k: u32) -> Result<SlopeInterval, GeometryError> {
    if k < 3 {
        return Err(GeometryError::InvalidK(k));
    }
    Ok(SlopeInterval { k })
}

/// Every sloped (non-horizontal, non-vertical) lattice line with at least
/// `min_points` points in the `n`-point region, optionally restricted to
/// slopes within the Proposition-1 interval. Horizontal and vertical lines
/// are always excluded; the encoder handles those with binary clauses.
///
/// Lines are returned in canonical `(rise, run, alpha)` order.
pub fn enumerate_lines(
    k: u32,
    n: u32,
    use_prop1: bool,
    min_points: u32,
) -> Result<Vec<Line>, GeometryError> {
    if k < 3 || n < k {
        return Err(GeometryError::InvalidRegion { k, n });
    }
    if min_points < k {
        return Err(GeometryError::InvalidMinPoints { k, min_points });
    }
    let bounds = prop1_slope_bounds(k)?;
    let mut out = Vec::new();
    // min_points points span (min_points-1) steps of (run, rise), so
    // rise + run <= (n-1)/(min_points-1) for a line to qualify.
    let limit = (n - 1) / (min_points - 1);
    for run in 1..=limit {
        for rise in 1..=limit.saturating_sub(run) {
            if gcd(u64::from(rise), u64::from(run)) != 1 {
                continue;
            }
            if use_prop1 && !bounds.contains(rise, run) {
                continue;
            }
            let m = i64::from(n) - 1;
            let (lo, hi) = (-i64::from(rise) * m, i64::from(run) * m);
            for alpha in lo..=hi {
                let line = Line::Sloped { rise, run, alpha };
                if line.point_count(n) >= min_points {
                    out.push(line);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The region points on `line`, sorted by x (by y for vertical lines).
pub fn line_points(line: &Line, n: u32) -> Vec<Point> {
    line.points(n)
}

/// Closed-form length bounds for the k-collinearity problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthBounds {
    pub upper: UpperBound,
    /// Raw value of the lower-bound expression
    /// `(32 * (k-1)^(2*log2(k-1) - 7))^(1/18)`.
    pub lower_value: f64,
    /// Smallest integer step count strictly greater than `lower_value`; a walk
    /// of this many steps avoiding k collinear points is guaranteed to exist.
    pub lower_steps: u64,
}

/// Walk length at which k collinear points become unavoidable:
/// `(k-1) * 2^(8192 * (k-1)^4)`, reported exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperBound {
    /// `k-1` is a power of two, so the whole bound is `2^exponent`.
    PowerOfTwo { exponent: u128 },
    /// `factor * 2^exponent` with `factor = k-1` not a power of two.
    Product { factor: u64, exponent: u128 },
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            UpperBound::PowerOfTwo { exponent } => write!(f, "2^{exponent}"),
            UpperBound::Product { factor, exponent } => write!(f, "{factor} * 2^{exponent}"),
        }
    }
}

pub fn theoretical_bounds(k: u32) -> Result<LengthBounds, GeometryError> {
    if k < 3 {
        return Err(GeometryError::InvalidK(k));
    }
    let base = u128::from(k) - 1;
    let exponent = base
        .checked_pow(4)
        .and_then(|p| p.checked_mul(1 << 13))
        .ok_or(GeometryError::BoundOverflow(k))?;
    let upper = if base.is_power_of_two() {
        UpperBound::PowerOfTwo {
            exponent: exponent + u128::from(base.trailing_zeros()),
        }
    } else {
        UpperBound::Product {
            factor: (k - 1) as u64,
            exponent,
        }
    };
    let km1 = f64::from(k - 1);
    let lower_value = ((32f64.ln() + (2.0 * km1.log2() - 7.0) * km1.ln()) / 18.0).exp();
    let lower_steps = lower_value.floor() as u64 + 1;
    Ok(LengthBounds {
        upper,
        lower_value,
        lower_steps,
    })
}
