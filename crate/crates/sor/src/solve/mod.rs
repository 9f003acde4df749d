//! Exact solvers for the discretized problem: a level-based branch-and-bound
//! over item states, and a multicut outer-approximation loop for capture-form
//! instances whose discretized objective is concave in the binaries.

mod bnb;
mod oa;

pub use bnb::bb_solve;
pub use oa::{oa_solve, subgradient_cut, Cut};

pub(crate) use bnb::{search, ItemState, NodeCaps, SearchObjective};

use serde::Serialize;

/// Item branching order. `CanonicalIndex` fixes items 0..m-1 in turn;
/// `MaxRange` fixes items in decreasing order of their numerator-value
/// spread (ties by index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchOrder {
    CanonicalIndex,
    MaxRange,
}

/// Search controls. Ties between equal-valued incumbents always keep the
/// first one found, which with the fixed state order selects the lowest
/// on-index.
#[derive(Debug, Clone)]
pub struct BnbConfig {
    pub rel_gap_tol: f64,
    pub node_limit: Option<u64>,
    pub time_limit_seconds: Option<f64>,
    pub branch_order: BranchOrder,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            rel_gap_tol: 1e-9,
            node_limit: None,
            time_limit_seconds: None,
            branch_order: BranchOrder::CanonicalIndex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    GapLimit,
    NodeLimit,
    TimeLimit,
    Infeasible,
}

/// Incumbent and certificate returned by the solvers. `objective` is the
/// solved objective (offset and sense applied); `upper_bound` is a valid
/// bound on the best attainable value. A limit hit before any feasible leaf
/// leaves `objective` at negative infinity with placeholder coordinates.
#[derive(Debug, Clone)]
pub struct Solution {
    pub y: Vec<bool>,
    pub level: Vec<usize>,
    pub x: Vec<f64>,
    pub objective: f64,
    pub upper_bound: f64,
    pub status: SolveStatus,
    pub nodes_explored: u64,
    pub cuts_added: u64,
}
