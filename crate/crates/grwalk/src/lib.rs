//! Toolkit for the k-collinearity problem on north-east lattice walks:
//! encode walk-existence questions as CNF/KNF instances for external SAT
//! solvers, and independently enumerate, validate, canonicalize, and count
//! the walks with a native backtracking search.
//!
//! A *GR(k) walk* is a lattice path with steps north `(0,1)` and east `(1,0)`
//! containing no k collinear points; `a(k)` is the smallest length at which
//! k collinear points become unavoidable. The crate covers both sides of the
//! hunt for `a(k)`:
//!
//! - [`oracle`] performs exhaustive backtracking search, exact for small k.
//! - [`encoding`] builds the constraint system for a chosen walk length and
//!   [`formats`] lowers it to DIMACS CNF, KNF, and iCNF cube files.
//! - [`driver`] orchestrates external solver processes: validation with
//!   constraint-restoring retries, all-solutions enumeration, incremental
//!   a(k) search, reachability frontiers, and parallel campaigns.
//! - [`geometry`] and [`walk`] supply the exact-arithmetic substrate.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod driver;
pub mod encoding;
pub mod formats;
pub mod geometry;
pub mod oracle;
pub mod walk;

pub use encoding::{Instance, InstanceBuilder, VarMap};
pub use geometry::{Line, Point};
pub use walk::{Step, Walk};
