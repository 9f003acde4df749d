//! Approximation-error machinery: the objective's sup-norm sensitivity
//! constant, the O(1/K) optimality bound, the grid size needed for a target
//! accuracy, and the sample/grid sizes for the two-level sampling-plus-
//! discretization scheme.

use crate::error::{Error, Result};
use crate::problem::SorProblem;
use serde::Serialize;

/// Per-ratio interval data feeding the sensitivity constant.
#[derive(Debug, Clone, Serialize)]
pub struct PerRatio {
    pub ratio_upper: f64,
    pub denom_lower: f64,
    pub sum_lip_g: f64,
    pub sum_lip_h: f64,
}

/// Sensitivity constant and the resulting optimality bound at a given grid.
/// The interval quantities over-approximate their exact counterparts, so
/// every derived bound stays valid.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBoundReport {
    pub c: f64,
    pub per_t: Vec<PerRatio>,
    pub max_range: f64,
    pub gap_bound: f64,
    pub k_used: usize,
}

/// Sample and grid sizes guaranteeing epsilon-accuracy with probability
/// 1 - gamma for the sampled stochastic form.
#[derive(Debug, Clone, Serialize)]
pub struct SaaSizing {
    pub epsilon: f64,
    pub gamma: f64,
    pub psi: f64,
    pub c_star: f64,
    pub t_required: u64,
    pub k_required: u64,
}

/// C = sum_t (sum_i L_g + ratio_upper_t * sum_i L_h) / denom_lower_t.
/// A sup-norm perturbation of x by eps moves the objective by at most eps*C.
pub fn compute_c(problem: &SorProblem) -> Result<ErrorBoundReport> {
    let report = problem.check_assumptions();
    let mut c = 0.0;
    let mut per_t = Vec::with_capacity(problem.t);
    for t in 0..problem.t {
        if report.denom_lower[t] <= 0.0 {
            return Err(Error::NonPositiveDenominator(t));
        }
        let sum_lip_g: f64 = report.lip_g[t].iter().sum();
        let sum_lip_h: f64 = report.lip_h[t].iter().sum();
        c += (sum_lip_g + report.ratio_upper[t] * sum_lip_h) / report.denom_lower[t];
        per_t.push(PerRatio {
            ratio_upper: report.ratio_upper[t],
            denom_lower: report.denom_lower[t],
            sum_lip_g,
            sum_lip_h,
        });
    }
    let max_range = (0..problem.m)
        .map(|i| problem.upper[i] - problem.lower[i])
        .fold(0.0f64, f64::max);
    Ok(ErrorBoundReport {
        c,
        per_t,
        max_range,
        gap_bound: f64::NAN,
        k_used: 0,
    })
}

/// Full report with the optimality bound for grid size K.
pub fn error_bound_report(problem: &SorProblem, k: usize) -> Result<ErrorBoundReport> {
    let mut rep = compute_c(problem)?;
    rep.k_used = k;
    rep.gap_bound = optimality_gap_bound(rep.c, k, rep.max_range);
    Ok(rep)
}

/// Optimality gap bound of the K-grid optimum: 2*C*max_range/K.
pub fn optimality_gap_bound(c: f64, k: usize, max_range: f64) -> f64 {
    2.0 * c * max_range / k as f64
}

/// Smallest K whose bound is below epsilon, clamped to at least 1.
pub fn required_k(c: f64, max_range: f64, epsilon: f64) -> u64 {
    assert!(epsilon > 0.0);
    ((2.0 * c * max_range / epsilon).ceil() as u64).max(1)
}

/// T >= 25*Psi*ln(6/gamma)/(2*eps^2) and K >= 5*T*C*max_range/eps, both
/// ceiled and clamped to at least 1.
pub fn saa_sizes(epsilon: f64, gamma: f64, psi: f64, c_star: f64, max_range: f64) -> SaaSizing {
    assert!(epsilon > 0.0 && epsilon < 1.0);
    assert!(gamma > 0.0 && gamma < 1.0);
    assert!(psi >= 0.0 && c_star >= 0.0);
    let t_raw = 25.0 * psi * (6.0 / gamma).ln() / (2.0 * epsilon * epsilon);
    let t_required = (t_raw.ceil() as u64).max(1);
    let k_raw = 5.0 * t_required as f64 * c_star * max_range / epsilon;
    let k_required = (k_raw.ceil() as u64).max(1);
    SaaSizing {
        epsilon,
        gamma,
        psi,
        c_star,
        t_required,
        k_required,
    }
}

/// Interval-derived spread of the per-sample ratio values, usable as the
/// Psi input when no external estimate is supplied.
pub fn psi_interval(problem: &SorProblem) -> Result<f64> {
    let report = problem.check_assumptions();
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for t in 0..problem.t {
        if report.denom_lower[t] <= 0.0 {
            return Err(Error::NonPositiveDenominator(t));
        }
        hi = hi.max(report.ratio_upper[t]);
        lo = lo.min(-report.ratio_upper[t]);
    }
    Ok(hi - lo)
}
