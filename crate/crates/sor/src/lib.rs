//! Near-optimal solving of binary-continuous sum-of-ratios programs.
//!
//! The pipeline: represent an instance over binary selections y and
//! box-bounded continuous levels x ([`problem`]), discretize every component
//! function onto a shared K-piece grid ([`pwla`]), then either solve the
//! discretized problem exactly in-process ([`solve`], [`oracle`]) or emit a
//! mixed-integer reformulation for an external solver ([`model`]).
//! [`bounds`] certifies how far the grid optimum can sit from the true one,
//! and [`apps`] builds the two flagship instance families.

pub mod apps;
pub mod bounds;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod problem;
pub mod pwla;
pub mod solve;

pub use error::{Error, Result};
pub use problem::{
    A2Status, AssumptionReport, BudgetRow, ConstraintSet, Family, LinearRow, Objective, RatioSense,
    RatioTerm, SorProblem, UnivariateFn,
};
pub use pwla::{
    approx_objective, eval_approx, levels_from_x, snap, snap_gap_bound, x_from_levels,
    Discretization, LevelAssignment,
};
pub use solve::{bb_solve, oa_solve, BnbConfig, BranchOrder, Solution, SolveStatus};
