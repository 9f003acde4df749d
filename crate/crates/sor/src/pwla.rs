//! Uniform-grid discretization: chord slopes over K equal subintervals per
//! item, the downward snap operator, level/coordinate conversions, and
//! evaluation of the discretized objective.

use crate::error::{Error, Result};
use crate::problem::SorProblem;

/// Relative slop used to identify grid points under floating-point noise.
const GRID_SLOP: f64 = 1e-9;

/// Chord data of every component function on the shared K-piece grid.
///
/// `slope_g[t][i][k-1]` is the chord slope of the t-th numerator function of
/// item i over its k-th subinterval; `cum_g[t][i][lvl]` caches the anchored
/// partial sums g_i(l_i) + delta_i * sum_{k<=lvl} slope, so the value of the
/// discretized function at grid level `lvl` is an O(1) lookup.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub k: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub delta: Vec<f64>,
    pub slope_g: Vec<Vec<Vec<f64>>>,
    pub slope_h: Vec<Vec<Vec<f64>>>,
    pub g_at_l: Vec<Vec<f64>>,
    pub h_at_l: Vec<Vec<f64>>,
    cum_g: Vec<Vec<Vec<f64>>>,
    cum_h: Vec<Vec<Vec<f64>>>,
}

impl Discretization {
    pub fn new(problem: &SorProblem, k: usize) -> Self {
        assert!(k >= 1, "need at least one piece");
        let (m, t) = (problem.m, problem.t);
        let delta: Vec<f64> = (0..m)
            .map(|i| (problem.upper[i] - problem.lower[i]) / k as f64)
            .collect();
        let mut slope_g = vec![vec![vec![0.0; k]; m]; t];
        let mut slope_h = vec![vec![vec![0.0; k]; m]; t];
        let mut g_at_l = vec![vec![0.0; m]; t];
        let mut h_at_l = vec![vec![0.0; m]; t];
        let mut cum_g = vec![vec![vec![0.0; k + 1]; m]; t];
        let mut cum_h = vec![vec![vec![0.0; k + 1]; m]; t];
        for ti in 0..t {
            let term = &problem.terms[ti];
            for i in 0..m {
                let l = problem.lower[i];
                let d = delta[i];
                g_at_l[ti][i] = term.g[i].eval(l);
                h_at_l[ti][i] = term.h[i].eval(l);
                cum_g[ti][i][0] = g_at_l[ti][i];
                cum_h[ti][i][0] = h_at_l[ti][i];
                let mut gprev = g_at_l[ti][i];
                let mut hprev = h_at_l[ti][i];
                for kk in 1..=k {
                    let xk = l + d * kk as f64;
                    let gk = term.g[i].eval(xk);
                    let hk = term.h[i].eval(xk);
                    slope_g[ti][i][kk - 1] = (gk - gprev) / d;
                    slope_h[ti][i][kk - 1] = (hk - hprev) / d;
                    cum_g[ti][i][kk] = cum_g[ti][i][kk - 1] + d * slope_g[ti][i][kk - 1];
                    cum_h[ti][i][kk] = cum_h[ti][i][kk - 1] + d * slope_h[ti][i][kk - 1];
                    gprev = gk;
                    hprev = hk;
                }
            }
        }
        Discretization {
            k,
            lower: problem.lower.clone(),
            upper: problem.upper.clone(),
            delta,
            slope_g,
            slope_h,
            g_at_l,
            h_at_l,
            cum_g,
            cum_h,
        }
    }

    /// Grid coordinate of item i at the given level.
    pub fn grid_x(&self, i: usize, level: usize) -> f64 {
        if level == self.k {
            self.upper[i]
        } else {
            self.lower[i] + self.delta[i] * level as f64
        }
    }

    /// Value of the discretized numerator function of (t, i) at a level.
    pub fn g_value(&self, t: usize, i: usize, level: usize) -> f64 {
        self.cum_g[t][i][level]
    }

    /// Value of the discretized denominator function of (t, i) at a level.
    pub fn h_value(&self, t: usize, i: usize, level: usize) -> f64 {
        self.cum_h[t][i][level]
    }
}

/// Downward snap of x onto the K-point grid over [l, u]: l + delta*floor((x-l)/delta),
/// with x = u mapping to u so the grid includes both endpoints.
pub fn snap(x: f64, l: f64, u: f64, k: usize) -> Result<f64> {
    if x < l || x > u {
        return Err(Error::OutOfBounds {
            value: x,
            lo: l,
            hi: u,
        });
    }
    let delta = (u - l) / k as f64;
    let level = level_of(x, l, delta, k);
    Ok(if level == k {
        u
    } else {
        l + delta * level as f64
    })
}

fn level_of(x: f64, l: f64, delta: f64, k: usize) -> usize {
    let t = (x - l) / delta;
    let mut lvl = t.floor();
    // identify grid points despite rounding noise in (x - l) / delta
    if t - lvl > 1.0 - GRID_SLOP {
        lvl += 1.0;
    }
    (lvl.max(0.0) as usize).min(k)
}

/// A point of the discretized problem: selection y, per-item grid level in
/// {0..K}, and an optional sub-grid residual carried by the mixed form. The
/// residual shifts x for constraint purposes but never enters the objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelAssignment {
    pub y: Vec<bool>,
    pub level: Vec<usize>,
    pub residual: Option<Vec<f64>>,
}

impl LevelAssignment {
    pub fn new(y: Vec<bool>, level: Vec<usize>) -> Self {
        LevelAssignment {
            y,
            level,
            residual: None,
        }
    }
}

/// Levels of the grid points directly below each coordinate.
pub fn levels_from_x(disc: &Discretization, x: &[f64]) -> Result<Vec<usize>> {
    if x.len() != disc.lower.len() {
        return Err(Error::DimensionMismatch("x vs discretization".into()));
    }
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        if x[i] < disc.lower[i] || x[i] > disc.upper[i] {
            return Err(Error::OutOfBounds {
                value: x[i],
                lo: disc.lower[i],
                hi: disc.upper[i],
            });
        }
        out.push(level_of(x[i], disc.lower[i], disc.delta[i], disc.k));
    }
    Ok(out)
}

/// Coordinates implied by an assignment: l_i + delta_i * level_i (+ residual).
pub fn x_from_levels(disc: &Discretization, assign: &LevelAssignment) -> Vec<f64> {
    let mut x: Vec<f64> = (0..assign.level.len())
        .map(|i| disc.grid_x(i, assign.level[i]))
        .collect();
    if let Some(r) = &assign.residual {
        for i in 0..x.len() {
            x[i] += r[i];
        }
    }
    x
}

/// The discretized ratio sum at an assignment. Items with y_i = 0 contribute
/// nothing regardless of their level, which covers both the product-form and
/// the linked-form semantics; residuals never enter.
pub fn eval_approx(
    problem: &SorProblem,
    disc: &Discretization,
    assign: &LevelAssignment,
) -> Result<f64> {
    if assign.y.len() != problem.m || assign.level.len() != problem.m {
        return Err(Error::DimensionMismatch("assignment vs m".into()));
    }
    if assign.level.iter().any(|&l| l > disc.k) {
        return Err(Error::OutOfBounds {
            value: 0.0,
            lo: 0.0,
            hi: disc.k as f64,
        });
    }
    let mut total = 0.0;
    for t in 0..problem.t {
        let term = &problem.terms[t];
        let mut num = term.a;
        let mut den = term.b;
        for i in 0..problem.m {
            if assign.y[i] {
                num += disc.g_value(t, i, assign.level[i]);
                den += disc.h_value(t, i, assign.level[i]);
            }
        }
        if den <= 0.0 {
            return Err(Error::NonPositiveDenominator(t));
        }
        total += num / den;
    }
    Ok(total)
}

/// The solved objective `offset + sense * eval_approx` at an assignment.
pub fn approx_objective(
    problem: &SorProblem,
    disc: &Discretization,
    assign: &LevelAssignment,
) -> Result<f64> {
    Ok(problem.objective.offset
        + problem.objective.sense.factor() * eval_approx(problem, disc, assign)?)
}

/// Worst-case gap between a function and its snapped value: L * delta.
pub fn snap_gap_bound(lipschitz: f64, delta: f64) -> f64 {
    lipschitz * delta
}
