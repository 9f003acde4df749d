//! Independent ground truth for tests: exhaustive enumeration of the
//! discretized problem and central finite differences.

use crate::error::{Error, Result};
use crate::problem::SorProblem;
use crate::pwla::{approx_objective, x_from_levels, Discretization, LevelAssignment};
use crate::solve::{Solution, SolveStatus};

#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_enumeration: u64,
    pub tolerance: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_enumeration: 50_000_000,
            tolerance: 1e-9,
        }
    }
}

/// Enumerate every linked assignment (off items merged with level 0, so
/// K + 2 states per item), keep the feasible maximum of the solved
/// objective. Exact and deterministic.
pub fn brute_force_solve(
    problem: &SorProblem,
    disc: &Discretization,
    budget: &OracleBudget,
) -> Result<Solution> {
    problem.validate()?;
    let m = problem.m;
    let states_per_item = (disc.k + 2) as f64;
    let states = states_per_item.powi(m as i32);
    if states > budget.max_enumeration as f64 {
        return Err(Error::BudgetExceeded {
            states,
            budget: budget.max_enumeration as f64,
        });
    }
    let mut best: Option<(f64, Vec<bool>, Vec<usize>)> = None;
    let mut y = vec![false; m];
    let mut level = vec![0usize; m];
    // odometer over states 0..K+1 per item: state K+1 encodes "off"
    let mut digits = vec![0usize; m];
    let off = disc.k + 1;
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        for i in 0..m {
            if digits[i] == off {
                y[i] = false;
                level[i] = 0;
            } else {
                y[i] = true;
                level[i] = digits[i];
            }
        }
        let assign = LevelAssignment::new(y.clone(), level.clone());
        let x = x_from_levels(disc, &assign);
        if problem.is_feasible(&y, &x)? {
            let v = approx_objective(problem, disc, &assign)?;
            let better = match &best {
                Some((b, _, _)) => v > *b,
                None => true,
            };
            if better {
                best = Some((v, y.clone(), level.clone()));
            }
        }
        // advance the odometer
        let mut i = 0;
        loop {
            if i == m {
                let out = match best {
                    Some((v, y, level)) => {
                        let x =
                            x_from_levels(disc, &LevelAssignment::new(y.clone(), level.clone()));
                        Solution {
                            y,
                            level,
                            x,
                            objective: v,
                            upper_bound: v,
                            status: SolveStatus::Optimal,
                            nodes_explored: nodes,
                            cuts_added: 0,
                        }
                    }
                    None => Solution {
                        y: vec![false; m],
                        level: vec![0; m],
                        x: problem.lower.clone(),
                        objective: f64::NEG_INFINITY,
                        upper_bound: f64::NEG_INFINITY,
                        status: SolveStatus::Infeasible,
                        nodes_explored: nodes,
                        cuts_added: 0,
                    },
                };
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] <= off {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Central finite differences (f(x + h e_i) - f(x - h e_i)) / (2h).
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, at: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(at.len());
    let mut probe = at.to_vec();
    for i in 0..at.len() {
        probe[i] = at[i] + h;
        let fp = f(&probe);
        probe[i] = at[i] - h;
        let fm = f(&probe);
        probe[i] = at[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFinite(format!("stencil at coordinate {i}")));
        }
        out.push((fp - fm) / (2.0 * h));
    }
    Ok(out)
}
