//! Multicut outer approximation for capture-form instances. With all-zero
//! numerator functions the discretized objective is `offset - sum_t a_t /
//! den_t(y, z)` with den affine in (y, z), so each reciprocal term is convex
//! and admits globally valid subgradient cuts. The master problem maximizes
//! `offset - sum_t a_t * theta_t` over the same linked assignments, with
//! theta_t floored at zero and pushed up by the cuts; it is solved exactly by
//! the shared level branch-and-bound.

use crate::error::{Error, Result};
use crate::problem::{RatioSense, SorProblem, UnivariateFn};
use crate::pwla::{approx_objective, Discretization, LevelAssignment};
use crate::solve::{
    search, BnbConfig, ItemState, NodeCaps, SearchObjective, Solution, SolveStatus,
};

/// Hard cap on outer-approximation iterations.
const MAX_ITERATIONS: usize = 10_000;

/// A supporting hyperplane of one reciprocal term: cut(y, z) = constant +
/// coeff_y . y + sum_ik `coeff_z[i][k]` z_ik, valid as a lower estimate of
/// 1/den wherever den > 0.
#[derive(Debug, Clone)]
pub struct Cut {
    pub constant: f64,
    pub coeff_y: Vec<f64>,
    pub coeff_z: Vec<Vec<f64>>,
    /// prefix[i][lvl] = sum of coeff_z[i][..lvl]
    prefix: Vec<Vec<f64>>,
    /// per item, min contribution over linked states
    state_min: Vec<f64>,
}

impl Cut {
    fn finalize(constant: f64, coeff_y: Vec<f64>, coeff_z: Vec<Vec<f64>>) -> Self {
        let m = coeff_y.len();
        let mut prefix = Vec::with_capacity(m);
        let mut state_min = Vec::with_capacity(m);
        for i in 0..m {
            let k = coeff_z[i].len();
            let mut pref = Vec::with_capacity(k + 1);
            pref.push(0.0);
            let mut acc = 0.0;
            let mut pmin = 0.0f64;
            for kk in 0..k {
                acc += coeff_z[i][kk];
                pref.push(acc);
                pmin = pmin.min(acc);
            }
            prefix.push(pref);
            state_min.push((coeff_y[i] + pmin).min(0.0));
        }
        Cut {
            constant,
            coeff_y,
            coeff_z,
            prefix,
            state_min,
        }
    }

    /// Cut value at a linked assignment (off items sit at level 0).
    pub fn value_at(&self, y: &[bool], level: &[usize]) -> f64 {
        let mut v = self.constant;
        for i in 0..y.len() {
            if y[i] {
                v += self.coeff_y[i];
            }
            v += self.prefix[i][level[i]];
        }
        v
    }

    fn item_contrib(&self, i: usize, state: ItemState) -> f64 {
        match state {
            ItemState::Off => 0.0,
            ItemState::On(lvl) => self.coeff_y[i] + self.prefix[i][lvl],
        }
    }
}

/// First-order cut of the reciprocal of ratio t's denominator at the given
/// assignment. The gradient of 1/den in (y, z) is -h_i(l_i)/den^2 for y_i
/// and -delta_i * `slope_h[t][i][k]` / den^2 for z_ik.
pub fn subgradient_cut(
    problem: &SorProblem,
    disc: &Discretization,
    t: usize,
    at: &LevelAssignment,
) -> Result<Cut> {
    let m = problem.m;
    let mut den = problem.terms[t].b;
    for i in 0..m {
        if at.y[i] {
            den += disc.h_value(t, i, at.level[i]);
        }
    }
    if den <= 0.0 {
        return Err(Error::NonPositiveDenominator(t));
    }
    let g0 = 1.0 / den;
    let d2 = den * den;
    let mut coeff_y = Vec::with_capacity(m);
    let mut coeff_z = Vec::with_capacity(m);
    let mut constant = g0;
    for i in 0..m {
        let cy = -disc.h_at_l[t][i] / d2;
        coeff_y.push(cy);
        if at.y[i] {
            constant -= cy;
        }
        let mut cz = Vec::with_capacity(disc.k);
        for k in 0..disc.k {
            let c = -disc.delta[i] * disc.slope_h[t][i][k] / d2;
            cz.push(c);
            if at.y[i] && k < at.level[i] {
                constant -= c;
            }
        }
        coeff_z.push(cz);
    }
    Ok(Cut::finalize(constant, coeff_y, coeff_z))
}

/// Master objective: offset - sum_t a_t * theta_t with theta_t = max(0, max
/// over cuts). Bounds use per-cut minima over free items; the max over cuts
/// of those minima under-estimates every completion's theta.
struct MasterObjective<'a> {
    offset: f64,
    a: Vec<f64>,
    cuts: &'a [Vec<Cut>],
    /// fixed[t][c]: constant + contributions of fixed items for cut c of t
    fixed: Vec<Vec<f64>>,
}

impl<'a> MasterObjective<'a> {
    fn new(offset: f64, a: Vec<f64>, cuts: &'a [Vec<Cut>]) -> Self {
        let fixed = cuts
            .iter()
            .map(|cs| cs.iter().map(|c| c.constant).collect())
            .collect();
        MasterObjective {
            offset,
            a,
            cuts,
            fixed,
        }
    }

    fn theta_floor(&self, t: usize, free: &[usize]) -> f64 {
        let mut theta = 0.0f64;
        for (c, cut) in self.cuts[t].iter().enumerate() {
            let mut v = self.fixed[t][c];
            for &i in free {
                v += cut.state_min[i];
            }
            theta = theta.max(v);
        }
        theta
    }
}

impl SearchObjective for MasterObjective<'_> {
    fn push(&mut self, item: usize, state: ItemState) {
        for t in 0..self.cuts.len() {
            for (c, cut) in self.cuts[t].iter().enumerate() {
                self.fixed[t][c] += cut.item_contrib(item, state);
            }
        }
    }

    fn pop(&mut self, item: usize, state: ItemState) {
        for t in 0..self.cuts.len() {
            for (c, cut) in self.cuts[t].iter().enumerate() {
                self.fixed[t][c] -= cut.item_contrib(item, state);
            }
        }
    }

    fn bound(&self, free: &[usize], _caps: &NodeCaps) -> Result<f64> {
        let mut v = self.offset;
        for t in 0..self.a.len() {
            v -= self.a[t] * self.theta_floor(t, free);
        }
        Ok(v)
    }

    fn leaf_value(&self, _y: &[bool], _level: &[usize]) -> Result<f64> {
        let mut v = self.offset;
        for t in 0..self.a.len() {
            v -= self.a[t] * self.theta_floor(t, &[]);
        }
        Ok(v)
    }
}

fn require_capture_form(problem: &SorProblem) -> Result<()> {
    if problem.objective.sense != RatioSense::Minus {
        return Err(Error::NotMcpForm);
    }
    for term in &problem.terms {
        if term.a < 0.0 {
            return Err(Error::NotMcpForm);
        }
        if term.g.iter().any(|g| !matches!(g, UnivariateFn::Zero)) {
            return Err(Error::NotMcpForm);
        }
    }
    Ok(())
}

/// Outer-approximation solve. Iterates master solves, adding a cut for every
/// ratio whose true reciprocal exceeds its master estimate by more than
/// `epsilon`; terminates when every estimate is within `epsilon`, which is
/// guaranteed after finitely many iterations over the finite assignment set.
pub fn oa_solve(
    problem: &SorProblem,
    disc: &Discretization,
    epsilon: f64,
    cfg: &BnbConfig,
) -> Result<Solution> {
    require_capture_form(problem)?;
    let a: Vec<f64> = problem.terms.iter().map(|term| term.a).collect();
    let offset = problem.objective.offset;
    let mut cuts: Vec<Vec<Cut>> = vec![Vec::new(); problem.t];
    let mut total_nodes = 0u64;
    let mut cuts_added = 0u64;
    let mut best: Option<(f64, Vec<bool>, Vec<usize>)> = None;

    for _iter in 0..MAX_ITERATIONS {
        let master = {
            let mut obj = MasterObjective::new(offset, a.clone(), &cuts);
            search(problem, disc, cfg, &mut obj)?
        };
        total_nodes += master.nodes_explored;
        match master.status {
            SolveStatus::Infeasible => {
                return Ok(Solution {
                    nodes_explored: total_nodes,
                    cuts_added,
                    ..master
                })
            }
            SolveStatus::NodeLimit | SolveStatus::TimeLimit => {
                let mut out = master;
                out.nodes_explored = total_nodes;
                out.cuts_added = cuts_added;
                if let Some((v, y, lvl)) = &best {
                    out.objective = *v;
                    out.y = y.clone();
                    out.level = lvl.clone();
                    out.x = crate::pwla::x_from_levels(
                        disc,
                        &LevelAssignment::new(y.clone(), lvl.clone()),
                    );
                }
                return Ok(out);
            }
            _ => {}
        }
        let assign = LevelAssignment::new(master.y.clone(), master.level.clone());
        let true_value = approx_objective(problem, disc, &assign)?;
        if best.as_ref().is_none_or(|(v, _, _)| true_value > *v) {
            best = Some((true_value, master.y.clone(), master.level.clone()));
        }
        let mut converged = true;
        for t in 0..problem.t {
            let mut den = problem.terms[t].b;
            for i in 0..problem.m {
                if master.y[i] {
                    den += disc.h_value(t, i, master.level[i]);
                }
            }
            if den <= 0.0 {
                return Err(Error::NonPositiveDenominator(t));
            }
            let g_true = 1.0 / den;
            let theta = cuts[t]
                .iter()
                .map(|c| c.value_at(&master.y, &master.level))
                .fold(0.0f64, f64::max);
            if g_true - theta > epsilon {
                converged = false;
                cuts[t].push(subgradient_cut(problem, disc, t, &assign)?);
                cuts_added += 1;
            }
        }
        if converged {
            let (value, y, level) = best.unwrap();
            let x =
                crate::pwla::x_from_levels(disc, &LevelAssignment::new(y.clone(), level.clone()));
            return Ok(Solution {
                y,
                level,
                x,
                objective: value,
                upper_bound: master.objective.max(value),
                status: SolveStatus::Optimal,
                nodes_explored: total_nodes,
                cuts_added,
            });
        }
    }
    Err(Error::InvariantViolated(format!(
        "outer approximation did not converge in {MAX_ITERATIONS} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Objective, RatioTerm, SorProblem};
    use crate::solve::bb_solve;

    fn capture_problem(m: usize, t: usize) -> SorProblem {
        let terms: Vec<RatioTerm> = (0..t)
            .map(|ti| RatioTerm {
                a: 2.0 + ti as f64,
                b: 2.0 + ti as f64,
                g: vec![UnivariateFn::Zero; m],
                h: (0..m)
                    .map(|i| UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: 0.5 + 0.2 * ((i + ti) % 3) as f64,
                        kappa: -0.5 + 0.3 * (i % 2) as f64,
                    })
                    .collect(),
            })
            .collect();
        let offset = t as f64;
        let mut p = SorProblem::new(vec![0.0; m], vec![1.5; m], terms);
        p.objective = Objective {
            offset,
            sense: RatioSense::Minus,
        };
        p
    }

    #[test]
    fn single_location_converges_quickly() {
        let p = capture_problem(1, 1);
        let d = Discretization::new(&p, 1);
        let s = oa_solve(&p, &d, 1e-9, &BnbConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        // enumerate the three linked states by hand
        let mut best = f64::NEG_INFINITY;
        for (y, lvl) in [(false, 0usize), (true, 0), (true, 1)] {
            let a = LevelAssignment::new(vec![y], vec![lvl]);
            best = best.max(approx_objective(&p, &d, &a).unwrap());
        }
        assert!((s.objective - best).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_branch_and_bound() {
        let p = capture_problem(4, 2);
        let d = Discretization::new(&p, 5);
        let cfg = BnbConfig::default();
        let bb = bb_solve(&p, &d, &cfg).unwrap();
        let oa = oa_solve(&p, &d, 1e-7, &cfg).unwrap();
        assert!((bb.objective - oa.objective).abs() <= 1e-6);
    }

    #[test]
    fn huge_epsilon_stops_after_one_iteration() {
        let p = capture_problem(3, 2);
        let d = Discretization::new(&p, 3);
        let s = oa_solve(&p, &d, 1e9, &BnbConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.cuts_added, 0);
        // the returned objective is still the true value at the incumbent
        let a = LevelAssignment::new(s.y.clone(), s.level.clone());
        let v = approx_objective(&p, &d, &a).unwrap();
        assert!((s.objective - v).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_capture_instances() {
        let mut p = capture_problem(2, 1);
        p.objective.sense = RatioSense::Plus;
        let d = Discretization::new(&p, 2);
        assert!(matches!(
            oa_solve(&p, &d, 1e-7, &BnbConfig::default()),
            Err(Error::NotMcpForm)
        ));
    }

    #[test]
    fn cut_is_exact_at_expansion_point() {
        let p = capture_problem(3, 2);
        let d = Discretization::new(&p, 4);
        let at = LevelAssignment::new(vec![true, false, true], vec![2, 0, 4]);
        for t in 0..p.t {
            let cut = subgradient_cut(&p, &d, t, &at).unwrap();
            let mut den = p.terms[t].b;
            for i in 0..p.m {
                if at.y[i] {
                    den += d.h_value(t, i, at.level[i]);
                }
            }
            let diff = cut.value_at(&at.y, &at.level) - 1.0 / den;
            assert!(diff.abs() < 1e-14, "cut off by {diff} at its own point");
        }
    }

    #[test]
    fn cuts_underestimate_everywhere() {
        // exhaustive over all (y, z) with staircase z, including unlinked
        // combinations where an off item carries a positive level
        let p = capture_problem(2, 1);
        let d = Discretization::new(&p, 2);
        let at = LevelAssignment::new(vec![true, true], vec![1, 2]);
        let cut = subgradient_cut(&p, &d, 0, &at).unwrap();
        for ybits in 0..4u32 {
            let y = [(ybits & 1) != 0, (ybits & 2) != 0];
            for l0 in 0..=2usize {
                for l1 in 0..=2usize {
                    // affine denominator in (y, z): z contributes regardless of y
                    let mut den = p.terms[0].b;
                    for (i, lvl) in [(0usize, l0), (1usize, l1)] {
                        if y[i] {
                            den += d.h_at_l[0][i];
                        }
                        den += d.h_value(0, i, lvl) - d.h_at_l[0][i];
                    }
                    if den <= 0.0 {
                        continue;
                    }
                    let mut cv = cut.constant;
                    for (i, lvl) in [(0usize, l0), (1usize, l1)] {
                        if y[i] {
                            cv += cut.coeff_y[i];
                        }
                        cv += cut.prefix[i][lvl];
                    }
                    assert!(cv <= 1.0 / den + 1e-12, "cut {cv} above {}", 1.0 / den);
                }
            }
        }
    }
}
