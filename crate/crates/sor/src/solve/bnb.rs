//! Depth-first branch-and-bound over per-item states. Each item is either
//! off (y = 0, level 0) or on at a grid level in {0..K}; the linked form
//! forces level 0 when an item is off, so these states are the whole search
//! space. Bounds are separable interval bounds sharpened by cardinality and
//! budget caps.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::problem::{SorProblem, FEAS_TOL};
use crate::pwla::{x_from_levels, Discretization, LevelAssignment};
use crate::solve::{BnbConfig, BranchOrder, Solution, SolveStatus};

/// State of one item at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ItemState {
    Off,
    On(usize),
}

/// Objective plugged into the shared driver. Implementations keep their own
/// incremental fixed sums; `bound` must over-estimate the value of every
/// completion of the current node.
pub(crate) trait SearchObjective {
    fn push(&mut self, item: usize, state: ItemState);
    fn pop(&mut self, item: usize, state: ItemState);
    fn bound(&self, free: &[usize], caps: &NodeCaps) -> Result<f64>;
    fn leaf_value(&self, y: &[bool], level: &[usize]) -> Result<f64>;
}

/// Per-node state restrictions derived from the constraint rows: a limit on
/// how many free items can still be switched on, and per-item level caps.
pub(crate) struct NodeCaps {
    /// Max number of free items that any completion can have on.
    pub on_cap: usize,
    /// Per item: None if the item cannot be on in any completion, otherwise
    /// the highest level budget rows allow.
    pub level_cap: Vec<Option<usize>>,
}

struct LinRowData {
    coeff_x: Vec<f64>,
    coeff_y: Vec<f64>,
    rhs: f64,
    /// Per item: min contribution over its states.
    item_min: Vec<f64>,
    /// Some(c) when the row is 0*x + c*sum(y) <= rhs with c > 0.
    uniform_y: Option<f64>,
}

struct BudgetRowData {
    alpha: Vec<f64>,
    rhs: f64,
}

/// Shared search machinery: feasibility bookkeeping, branching order, limits,
/// incumbent management.
pub(crate) struct Driver<'a> {
    problem: &'a SorProblem,
    disc: &'a Discretization,
    cfg: &'a BnbConfig,
    perm: Vec<usize>,
    lin: Vec<LinRowData>,
    bud: Vec<BudgetRowData>,
    nonneg_box: bool,
    // search state
    y: Vec<bool>,
    level: Vec<usize>,
    fixed_lin: Vec<f64>,
    fixed_bud: Vec<f64>,
    incumbent: Option<(f64, Vec<bool>, Vec<usize>)>,
    nodes: u64,
    aborted: Option<SolveStatus>,
    open_bound: f64,
    started: Instant,
}

impl<'a> Driver<'a> {
    pub fn new(problem: &'a SorProblem, disc: &'a Discretization, cfg: &'a BnbConfig) -> Self {
        let m = problem.m;
        let perm = match cfg.branch_order {
            BranchOrder::CanonicalIndex => (0..m).collect(),
            BranchOrder::MaxRange => {
                let mut spread: Vec<(f64, usize)> = (0..m)
                    .map(|i| {
                        let mut s = 0.0f64;
                        for t in 0..problem.t {
                            let mut lo = f64::INFINITY;
                            let mut hi = f64::NEG_INFINITY;
                            for lvl in 0..=disc.k {
                                let v = disc.g_value(t, i, lvl);
                                lo = lo.min(v);
                                hi = hi.max(v);
                            }
                            s = s.max(hi - lo);
                        }
                        (s, i)
                    })
                    .collect();
                spread.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
                spread.into_iter().map(|(_, i)| i).collect()
            }
        };
        let lin = problem
            .constraints
            .linear_rows
            .iter()
            .map(|row| {
                let item_min = (0..m)
                    .map(|i| {
                        let off = row.coeff_x[i] * problem.lower[i];
                        let on = (row.coeff_x[i] * problem.lower[i])
                            .min(row.coeff_x[i] * problem.upper[i])
                            + row.coeff_y[i];
                        off.min(on)
                    })
                    .collect();
                let pure_y = row.coeff_x.iter().all(|&c| c == 0.0);
                let uniform_y = if pure_y
                    && row.coeff_y[0] > 0.0
                    && row.coeff_y.iter().all(|&c| c == row.coeff_y[0])
                {
                    Some(row.coeff_y[0])
                } else {
                    None
                };
                LinRowData {
                    coeff_x: row.coeff_x.clone(),
                    coeff_y: row.coeff_y.clone(),
                    rhs: row.rhs,
                    item_min,
                    uniform_y,
                }
            })
            .collect();
        let bud = problem
            .constraints
            .bilinear_budget_rows
            .iter()
            .map(|row| BudgetRowData {
                alpha: row.alpha.clone(),
                rhs: row.rhs,
            })
            .collect();
        let nonneg_box = problem.lower.iter().all(|&l| l >= 0.0);
        Driver {
            problem,
            disc,
            cfg,
            perm,
            lin,
            bud,
            nonneg_box,
            y: vec![false; m],
            level: vec![0; m],
            fixed_lin: vec![0.0; problem.constraints.linear_rows.len()],
            fixed_bud: vec![0.0; problem.constraints.bilinear_budget_rows.len()],
            incumbent: None,
            nodes: 0,
            aborted: None,
            open_bound: f64::NEG_INFINITY,
            started: Instant::now(),
        }
    }

    fn state_x(&self, i: usize, state: ItemState) -> f64 {
        match state {
            ItemState::Off => self.disc.lower[i],
            ItemState::On(lvl) => self.disc.grid_x(i, lvl),
        }
    }

    fn apply(&mut self, i: usize, state: ItemState, sign: f64) {
        let x = self.state_x(i, state);
        let on = matches!(state, ItemState::On(_));
        for (r, row) in self.lin.iter().enumerate() {
            let mut c = row.coeff_x[i] * x;
            if on {
                c += row.coeff_y[i];
            }
            self.fixed_lin[r] += sign * c;
        }
        if on {
            for (r, row) in self.bud.iter().enumerate() {
                self.fixed_bud[r] += sign * row.alpha[i] * x;
            }
        }
    }

    /// Interval feasibility of the current node: the minimal attainable LHS
    /// of every row (free items at their cheapest state) must fit.
    fn node_feasible(&self, free: &[usize]) -> bool {
        for (r, row) in self.lin.iter().enumerate() {
            let mut min_lhs = self.fixed_lin[r];
            for &i in free {
                min_lhs += row.item_min[i];
            }
            if min_lhs > row.rhs + FEAS_TOL {
                return false;
            }
        }
        for (r, row) in self.bud.iter().enumerate() {
            let mut min_lhs = self.fixed_bud[r];
            for &i in free {
                min_lhs += (row.alpha[i] * self.problem.lower[i]).min(0.0);
            }
            if min_lhs > row.rhs + FEAS_TOL {
                return false;
            }
        }
        true
    }

    fn caps(&self, free: &[usize]) -> NodeCaps {
        let mut on_cap = usize::MAX;
        for (r, row) in self.lin.iter().enumerate() {
            if let Some(c) = row.uniform_y {
                let slack = row.rhs + FEAS_TOL
                    - self.fixed_lin[r]
                    - free.iter().map(|&i| row.item_min[i]).sum::<f64>();
                let cap = (slack / c).floor().max(0.0) as usize;
                on_cap = on_cap.min(cap);
            }
        }
        let mut level_cap = vec![None; self.problem.m];
        for &i in free {
            let mut cap = Some(self.disc.k);
            if self.nonneg_box {
                for (r, row) in self.bud.iter().enumerate() {
                    if row.alpha[i] <= 0.0 {
                        continue;
                    }
                    let slack = row.rhs + FEAS_TOL - self.fixed_bud[r];
                    // highest level with alpha*(l + delta*level) <= slack
                    let reach = slack / row.alpha[i] - self.problem.lower[i];
                    if reach < 0.0 {
                        cap = None;
                        break;
                    }
                    let lvl = if self.disc.delta[i] > 0.0 {
                        ((reach / self.disc.delta[i]).floor() as usize).min(self.disc.k)
                    } else {
                        self.disc.k
                    };
                    cap = Some(cap.unwrap().min(lvl));
                }
            }
            level_cap[i] = cap;
        }
        NodeCaps { on_cap, level_cap }
    }

    fn hit_limit(&self) -> Option<SolveStatus> {
        if let Some(nl) = self.cfg.node_limit {
            if self.nodes >= nl {
                return Some(SolveStatus::NodeLimit);
            }
        }
        if let Some(tl) = self.cfg.time_limit_seconds {
            if self.started.elapsed().as_secs_f64() >= tl {
                return Some(SolveStatus::TimeLimit);
            }
        }
        None
    }

    fn dfs<O: SearchObjective>(&mut self, depth: usize, obj: &mut O) -> Result<()> {
        if self.aborted.is_some() {
            return Ok(());
        }
        if let Some(status) = self.hit_limit() {
            self.aborted = Some(status);
            return Ok(());
        }
        self.nodes += 1;
        let free = &self.perm[depth..];
        if !self.node_feasible(free) {
            return Ok(());
        }
        if depth == self.problem.m {
            // leaf: exact feasibility and exact objective
            let x = x_from_levels(
                self.disc,
                &LevelAssignment::new(self.y.clone(), self.level.clone()),
            );
            if !self.problem.is_feasible(&self.y, &x)? {
                return Ok(());
            }
            let value = obj.leaf_value(&self.y, &self.level)?;
            let better = match &self.incumbent {
                Some((best, _, _)) => value > *best,
                None => true,
            };
            if better {
                self.incumbent = Some((value, self.y.clone(), self.level.clone()));
            }
            return Ok(());
        }
        let caps = self.caps(free);
        let bound = obj.bound(free, &caps)?;
        if let Some((best, _, _)) = &self.incumbent {
            if bound <= best + self.cfg.rel_gap_tol * best.abs().max(1.0) {
                return Ok(());
            }
        }
        let item = self.perm[depth];
        let mut states: Vec<ItemState> = Vec::with_capacity(self.disc.k + 2);
        if caps.on_cap > 0 {
            if let Some(cap) = caps.level_cap[item] {
                for lvl in (0..=cap).rev() {
                    states.push(ItemState::On(lvl));
                }
            }
        }
        states.push(ItemState::Off);
        for state in states {
            self.y[item] = matches!(state, ItemState::On(_));
            self.level[item] = match state {
                ItemState::On(lvl) => lvl,
                ItemState::Off => 0,
            };
            self.apply(item, state, 1.0);
            obj.push(item, state);
            let res = self.dfs(depth + 1, obj);
            obj.pop(item, state);
            self.apply(item, state, -1.0);
            res?;
            if self.aborted.is_some() {
                // node cut short: its own bound covers the unexplored siblings
                self.open_bound = self.open_bound.max(bound);
                break;
            }
        }
        self.y[item] = false;
        self.level[item] = 0;
        Ok(())
    }

    fn finish(self) -> Solution {
        let m = self.problem.m;
        match self.incumbent {
            Some((value, y, level)) => {
                let x = x_from_levels(self.disc, &LevelAssignment::new(y.clone(), level.clone()));
                let (status, upper) = match self.aborted {
                    Some(s) => (s, self.open_bound.max(value)),
                    None => (SolveStatus::Optimal, value),
                };
                Solution {
                    y,
                    level,
                    x,
                    objective: value,
                    upper_bound: upper,
                    status,
                    nodes_explored: self.nodes,
                    cuts_added: 0,
                }
            }
            None => {
                let status = self.aborted.unwrap_or(SolveStatus::Infeasible);
                Solution {
                    y: vec![false; m],
                    level: vec![0; m],
                    x: self.problem.lower.clone(),
                    objective: f64::NEG_INFINITY,
                    upper_bound: if self.aborted.is_some() {
                        self.open_bound
                    } else {
                        f64::NEG_INFINITY
                    },
                    status,
                    nodes_explored: self.nodes,
                    cuts_added: 0,
                }
            }
        }
    }
}

/// Run the driver with an objective: seeds the all-off incumbent when
/// feasible, then explores depth-first. States are tried highest level
/// first, then off.
pub(crate) fn search<O: SearchObjective>(
    problem: &SorProblem,
    disc: &Discretization,
    cfg: &BnbConfig,
    obj: &mut O,
) -> Result<Solution> {
    problem.validate()?;
    let mut driver = Driver::new(problem, disc, cfg);
    let zero_y = vec![false; problem.m];
    let zero_lvl = vec![0usize; problem.m];
    let x0 = x_from_levels(
        disc,
        &LevelAssignment::new(zero_y.clone(), zero_lvl.clone()),
    );
    if problem.is_feasible(&zero_y, &x0)? {
        let v = obj.leaf_value(&zero_y, &zero_lvl)?;
        driver.incumbent = Some((v, zero_y, zero_lvl));
    }
    driver.dfs(0, obj)?;
    Ok(driver.finish())
}

/// Ratio-sum objective with signed numerators; bounds each term by capped
/// separable extremes of the numerator and denominator.
struct RatioObjective<'a> {
    problem: &'a SorProblem,
    disc: &'a Discretization,
    sign: f64,
    /// Fallback denominator lower bounds from the interval certification.
    denom_floor: Vec<f64>,
    // cum_signed_g[t][i][lvl], running extremes over levels 0..=lvl
    runmax_g: Vec<Vec<Vec<f64>>>,
    runmin_h: Vec<Vec<Vec<f64>>>,
    runmax_h: Vec<Vec<Vec<f64>>>,
    fixed_num: Vec<f64>,
    fixed_den: Vec<f64>,
    scratch: std::cell::RefCell<Vec<f64>>,
}

impl<'a> RatioObjective<'a> {
    fn new(problem: &'a SorProblem, disc: &'a Discretization, denom_floor: Vec<f64>) -> Self {
        let (t, m, k) = (problem.t, problem.m, disc.k);
        let sign = problem.objective.sense.factor();
        let mut runmax_g = vec![vec![vec![0.0; k + 1]; m]; t];
        let mut runmin_h = vec![vec![vec![0.0; k + 1]; m]; t];
        let mut runmax_h = vec![vec![vec![0.0; k + 1]; m]; t];
        for ti in 0..t {
            for i in 0..m {
                let mut mx_g = f64::NEG_INFINITY;
                let mut mn_h = f64::INFINITY;
                let mut mx_h = f64::NEG_INFINITY;
                for lvl in 0..=k {
                    mx_g = mx_g.max(sign * disc.g_value(ti, i, lvl));
                    mn_h = mn_h.min(disc.h_value(ti, i, lvl));
                    mx_h = mx_h.max(disc.h_value(ti, i, lvl));
                    runmax_g[ti][i][lvl] = mx_g;
                    runmin_h[ti][i][lvl] = mn_h;
                    runmax_h[ti][i][lvl] = mx_h;
                }
            }
        }
        let fixed_num = problem.terms.iter().map(|term| sign * term.a).collect();
        let fixed_den = problem.terms.iter().map(|term| term.b).collect();
        RatioObjective {
            problem,
            disc,
            sign,
            denom_floor,
            runmax_g,
            runmin_h,
            runmax_h,
            fixed_num,
            fixed_den,
            scratch: std::cell::RefCell::new(Vec::new()),
        }
    }

    /// Sum of the `cap` largest positive entries.
    fn capped_pos_sum(&self, values: &mut [f64], cap: usize) -> f64 {
        if values.len() <= cap {
            return values.iter().sum();
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        values[..cap].iter().sum()
    }

    /// Sum of the `cap` most negative entries.
    fn capped_neg_sum(&self, values: &mut [f64], cap: usize) -> f64 {
        if values.len() <= cap {
            return values.iter().sum();
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values[..cap].iter().sum()
    }
}

impl SearchObjective for RatioObjective<'_> {
    fn push(&mut self, item: usize, state: ItemState) {
        if let ItemState::On(lvl) = state {
            for t in 0..self.problem.t {
                self.fixed_num[t] += self.sign * self.disc.g_value(t, item, lvl);
                self.fixed_den[t] += self.disc.h_value(t, item, lvl);
            }
        }
    }

    fn pop(&mut self, item: usize, state: ItemState) {
        if let ItemState::On(lvl) = state {
            for t in 0..self.problem.t {
                self.fixed_num[t] -= self.sign * self.disc.g_value(t, item, lvl);
                self.fixed_den[t] -= self.disc.h_value(t, item, lvl);
            }
        }
    }

    fn bound(&self, free: &[usize], caps: &NodeCaps) -> Result<f64> {
        let mut total = self.problem.objective.offset;
        let mut buf = self.scratch.borrow_mut();
        for t in 0..self.problem.t {
            let cap = caps.on_cap.min(free.len());
            buf.clear();
            for &i in free {
                if let Some(kc) = caps.level_cap[i] {
                    let v = self.runmax_g[t][i][kc].max(0.0);
                    if v > 0.0 {
                        buf.push(v);
                    }
                }
            }
            let num_hi = self.fixed_num[t] + self.capped_pos_sum(&mut buf, cap);
            buf.clear();
            for &i in free {
                if let Some(kc) = caps.level_cap[i] {
                    let v = self.runmin_h[t][i][kc].min(0.0);
                    if v < 0.0 {
                        buf.push(v);
                    }
                }
            }
            let mut den_lo = self.fixed_den[t] + self.capped_neg_sum(&mut buf, cap);
            if den_lo <= 0.0 {
                den_lo = self.denom_floor[t];
                if den_lo <= 0.0 {
                    return Err(Error::BoundDenominatorNonPositive(t));
                }
            }
            if num_hi >= 0.0 {
                total += num_hi / den_lo;
            } else {
                buf.clear();
                for &i in free {
                    if let Some(kc) = caps.level_cap[i] {
                        let v = self.runmax_h[t][i][kc].max(0.0);
                        if v > 0.0 {
                            buf.push(v);
                        }
                    }
                }
                let den_hi = self.fixed_den[t] + self.capped_pos_sum(&mut buf, cap);
                total += num_hi / den_hi.max(den_lo);
            }
        }
        Ok(total)
    }

    fn leaf_value(&self, y: &[bool], level: &[usize]) -> Result<f64> {
        crate::pwla::approx_objective(
            self.problem,
            self.disc,
            &LevelAssignment::new(y.to_vec(), level.to_vec()),
        )
    }
}

/// Exact maximization of the discretized objective over linked assignments.
/// Deterministic given the configuration; single-threaded reference
/// semantics.
pub fn bb_solve(problem: &SorProblem, disc: &Discretization, cfg: &BnbConfig) -> Result<Solution> {
    let report = problem.check_assumptions();
    let mut obj = RatioObjective::new(problem, disc, report.denom_lower);
    search(problem, disc, cfg, &mut obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BudgetRow, LinearRow, RatioTerm, UnivariateFn};

    fn tiny(g: UnivariateFn, h: UnivariateFn) -> SorProblem {
        let term = RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![g],
            h: vec![h],
        };
        SorProblem::new(vec![0.0], vec![1.0], vec![term])
    }

    #[test]
    fn monotone_numerator_picks_top_level() {
        let p = tiny(
            UnivariateFn::Affine { a0: 0.0, a1: 1.0 },
            UnivariateFn::Affine { a0: 0.5, a1: 0.0 },
        );
        let d = Discretization::new(&p, 1);
        let s = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.y, vec![true]);
        assert_eq!(s.level, vec![1]);
        assert!((s.objective - 1.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn cardinality_tie_breaks_to_lowest_index() {
        let term = RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![UnivariateFn::Affine { a0: 1.0, a1: 0.0 }; 2],
            h: vec![UnivariateFn::Affine { a0: 1.0, a1: 0.0 }; 2],
        };
        let mut p = SorProblem::new(vec![0.0; 2], vec![1.0; 2], vec![term]);
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![0.0, 0.0],
            coeff_y: vec![1.0, 1.0],
            rhs: 1.0,
        });
        let d = Discretization::new(&p, 2);
        let s = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.y, vec![true, false]);
    }

    #[test]
    fn budget_row_prunes_joint_spending() {
        let term = RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![UnivariateFn::Affine { a0: 0.0, a1: 1.0 }; 2],
            h: vec![UnivariateFn::Affine { a0: 1.0, a1: 0.0 }; 2],
        };
        let mut p = SorProblem::new(vec![0.0; 2], vec![1.0; 2], vec![term]);
        p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![1.0, 1.0],
            rhs: 1.0,
        });
        let d = Discretization::new(&p, 4);
        let s = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        // one item at full spend beats both splitting it: 1/2 > (x1+x2)/3
        let spend: f64 =
            s.y.iter()
                .zip(&s.x)
                .map(|(&on, &x)| if on { x } else { 0.0 })
                .sum();
        assert!(spend <= 1.0 + 1e-9);
        assert!(
            (s.objective - 0.5).abs() < 1e-12,
            "objective {}",
            s.objective
        );
    }

    #[test]
    fn infeasible_when_rows_conflict() {
        let term = RatioTerm {
            a: 1.0,
            b: 1.0,
            g: vec![UnivariateFn::Zero],
            h: vec![UnivariateFn::Zero],
        };
        let mut p = SorProblem::new(vec![0.0], vec![1.0], vec![term]);
        // y_0 must be on (-y <= -1) but cardinality forbids any on
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![0.0],
            coeff_y: vec![-1.0],
            rhs: -1.0,
        });
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![0.0],
            coeff_y: vec![1.0],
            rhs: 0.0,
        });
        let d = Discretization::new(&p, 1);
        let s = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn node_limit_reports_limit_status() {
        let terms: Vec<RatioTerm> = vec![RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![UnivariateFn::Affine { a0: 0.0, a1: 1.0 }; 4],
            h: vec![UnivariateFn::Affine { a0: 1.0, a1: 0.0 }; 4],
        }];
        let p = SorProblem::new(vec![0.0; 4], vec![1.0; 4], terms);
        let d = Discretization::new(&p, 4);
        let cfg = BnbConfig {
            node_limit: Some(3),
            ..BnbConfig::default()
        };
        let s = bb_solve(&p, &d, &cfg).unwrap();
        assert_eq!(s.status, SolveStatus::NodeLimit);
        assert!(s.nodes_explored <= 4);
        assert!(s.upper_bound >= s.objective - 1e-12);
    }

    #[test]
    fn deterministic_node_counts() {
        let terms: Vec<RatioTerm> = (0..2)
            .map(|t| RatioTerm {
                a: 0.2,
                b: 1.0,
                g: (0..3)
                    .map(|i| UnivariateFn::LinExpAffine {
                        eta: -0.6 - 0.1 * (t + i) as f64,
                        kappa: 0.4,
                    })
                    .collect(),
                h: (0..3)
                    .map(|i| UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: -0.6 - 0.1 * (t + i) as f64,
                        kappa: 0.4,
                    })
                    .collect(),
            })
            .collect();
        let mut p = SorProblem::new(vec![0.0; 3], vec![2.0; 3], terms);
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![0.0; 3],
            coeff_y: vec![1.0; 3],
            rhs: 2.0,
        });
        p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![0.7; 3],
            rhs: 2.5,
        });
        let d = Discretization::new(&p, 5);
        let a = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        let b = bb_solve(&p, &d, &BnbConfig::default()).unwrap();
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.y, b.y);
        assert_eq!(a.level, b.level);
        // a different branch order must reach the same optimum value
        let cfg2 = BnbConfig {
            branch_order: BranchOrder::MaxRange,
            ..BnbConfig::default()
        };
        let c = bb_solve(&p, &d, &cfg2).unwrap();
        assert!((c.objective - a.objective).abs() <= 1e-9 * a.objective.abs().max(1.0));
    }
}
