//! Mixed-integer linear programming layer.
//!
//! [`MilpModel`] holds a minimisation problem with typed, bounded variables and
//! named rows. Models can be written to and read from LP text, solved with
//! HiGHS, checked against an assignment, or solved exhaustively by
//! [`brute_force_solve`] for cross-checking.

mod brute_force;
mod check;
mod error;
mod lp_format;
mod model;
pub mod simplex;
mod solution;
mod solver;

pub use brute_force::{brute_force_solve, BruteForceGrid, ContinuousMode};
pub use check::{check_feasibility, FeasibilityReport, Violation, ViolationKind};
pub use error::MilpError;
pub use lp_format::{parse_lp, write_lp};
pub use model::{Constraint, LinExpr, MilpModel, Sense, VarId, VarKind, Variable};
pub use solution::{MilpSolution, SolveStatus};
pub use solver::{solve, solve_with_limits, Backend, SolverOptions, BACKEND_ENV};

/// Margin used to encode strict `<` rows as `<=`.
pub const STRICT_EPSILON: f64 = 1e-6;
