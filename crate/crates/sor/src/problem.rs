//! Problem instances: univariate component functions, ratio terms, constraint
//! rows, and the assumption checks that every downstream builder and solver
//! relies on.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute per-row feasibility tolerance. Instance data is O(1)-O(1e3).
pub const FEAS_TOL: f64 = 1e-9;

/// Closed family of univariate component functions. Arbitrary shapes enter as
/// tabulated piecewise-linear functions, which keeps Lipschitz and range
/// certification exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum UnivariateFn {
    /// f(x) = 0
    Zero,
    /// f(x) = a0 + a1*x
    Affine { a0: f64, a1: f64 },
    /// f(x) = c * exp(eta*x + kappa)
    ExpAffine { c: f64, eta: f64, kappa: f64 },
    /// f(x) = x * exp(eta*x + kappa)
    LinExpAffine { eta: f64, kappa: f64 },
    /// Linear interpolation through strictly increasing breakpoints.
    /// Evaluation clamps to the tabulated span; instance validation requires
    /// the span to cover the queried box.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
}

impl UnivariateFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            UnivariateFn::Zero => 0.0,
            UnivariateFn::Affine { a0, a1 } => a0 + a1 * x,
            UnivariateFn::ExpAffine { c, eta, kappa } => c * (eta * x + kappa).exp(),
            UnivariateFn::LinExpAffine { eta, kappa } => x * (eta * x + kappa).exp(),
            UnivariateFn::PiecewiseLinear { breakpoints } => {
                let pts = breakpoints;
                if pts.is_empty() {
                    return 0.0;
                }
                let x = x.clamp(pts[0].0, pts[pts.len() - 1].0);
                let idx = pts.partition_point(|p| p.0 <= x);
                if idx == 0 {
                    return pts[0].1;
                }
                if idx == pts.len() {
                    return pts[pts.len() - 1].1;
                }
                let (x0, v0) = pts[idx - 1];
                let (x1, v1) = pts[idx];
                v0 + (v1 - v0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// A Lipschitz constant valid on [l, u], from the closed form of each
    /// variant (exact, not sampled).
    pub fn lipschitz_on(&self, l: f64, u: f64) -> f64 {
        match self {
            UnivariateFn::Zero => 0.0,
            UnivariateFn::Affine { a1, .. } => a1.abs(),
            UnivariateFn::ExpAffine { c, eta, kappa } => {
                // |f'| = |c*eta| * exp(eta*x + kappa), monotone in x
                (c * eta).abs() * ((eta * l).max(eta * u) + kappa).exp()
            }
            UnivariateFn::LinExpAffine { eta, kappa } => {
                // f'(x) = (1 + eta*x) * exp(eta*x + kappa);
                // |f'| attains its max at an endpoint or at x = -2/eta.
                let d = |x: f64| ((1.0 + eta * x) * (eta * x + kappa).exp()).abs();
                let mut best = d(l).max(d(u));
                if *eta != 0.0 {
                    let xc = -2.0 / eta;
                    if xc > l && xc < u {
                        best = best.max(d(xc));
                    }
                }
                best
            }
            UnivariateFn::PiecewiseLinear { breakpoints } => {
                let pts = breakpoints;
                let mut best = 0.0f64;
                for w in pts.windows(2) {
                    let (x0, v0) = w[0];
                    let (x1, v1) = w[1];
                    if x1 <= l || x0 >= u {
                        continue;
                    }
                    best = best.max(((v1 - v0) / (x1 - x0)).abs());
                }
                best
            }
        }
    }

    /// Exact range [lo, hi] of the function over [l, u].
    pub fn range_on(&self, l: f64, u: f64) -> (f64, f64) {
        match self {
            UnivariateFn::Zero => (0.0, 0.0),
            UnivariateFn::Affine { .. } | UnivariateFn::ExpAffine { .. } => {
                // both are monotone on any interval
                let (a, b) = (self.eval(l), self.eval(u));
                (a.min(b), a.max(b))
            }
            UnivariateFn::LinExpAffine { eta, .. } => {
                let mut lo = self.eval(l).min(self.eval(u));
                let mut hi = self.eval(l).max(self.eval(u));
                if *eta != 0.0 {
                    let xc = -1.0 / eta; // f'(xc) = 0
                    if xc > l && xc < u {
                        let v = self.eval(xc);
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                (lo, hi)
            }
            UnivariateFn::PiecewiseLinear { breakpoints } => {
                let mut lo = self.eval(l).min(self.eval(u));
                let mut hi = self.eval(l).max(self.eval(u));
                for &(x, v) in breakpoints {
                    if x > l && x < u {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                (lo, hi)
            }
        }
    }

    fn validate(&self, l: f64, u: f64) -> Result<()> {
        match self {
            UnivariateFn::PiecewiseLinear { breakpoints } => {
                if breakpoints.len() < 2 {
                    return Err(Error::InvariantViolated(
                        "piecewise-linear function needs at least two breakpoints".into(),
                    ));
                }
                for w in breakpoints.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::InvariantViolated(
                            "piecewise-linear breakpoints must be strictly increasing".into(),
                        ));
                    }
                }
                let span = (breakpoints[0].0, breakpoints[breakpoints.len() - 1].0);
                if span.0 > l + FEAS_TOL || span.1 < u - FEAS_TOL {
                    return Err(Error::InvariantViolated(format!(
                        "tabulated span [{}, {}] does not cover [{l}, {u}]",
                        span.0, span.1
                    )));
                }
                Ok(())
            }
            _ => {
                if self.eval(l).is_finite() && self.eval(u).is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonFinite("component function on its box".into()))
                }
            }
        }
    }
}

/// One fractional term: (a + sum_i y_i g_i(x_i)) / (b + sum_i y_i h_i(x_i)).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioTerm {
    pub a: f64,
    pub b: f64,
    pub g: Vec<UnivariateFn>,
    pub h: Vec<UnivariateFn>,
}

/// A row of the linear system: coeff_x . x + coeff_y . y <= rhs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRow {
    pub coeff_x: Vec<f64>,
    pub coeff_y: Vec<f64>,
    pub rhs: f64,
}

/// A coupled budget row: sum_i alpha_i * y_i * x_i <= rhs, with alpha_i >= 0.
/// Kept in product form; internal solvers check it directly while model
/// builders substitute the grid expression for y_i * x_i.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetRow {
    pub alpha: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSet {
    #[serde(default)]
    pub linear_rows: Vec<LinearRow>,
    #[serde(default)]
    pub bilinear_budget_rows: Vec<BudgetRow>,
}

/// Contribution direction of the ratio sum in the solved objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSense {
    Plus,
    Minus,
}

impl RatioSense {
    pub fn factor(self) -> f64 {
        match self {
            RatioSense::Plus => 1.0,
            RatioSense::Minus => -1.0,
        }
    }
}

/// The solved objective is `offset + sense * (sum of ratios)`, maximized.
/// Capture-form instances use (sum of segment weights, Minus) so that all
/// solvers and builders maximize captured demand directly.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Objective {
    pub offset: f64,
    pub sense: RatioSense,
}

impl Default for Objective {
    fn default() -> Self {
        Objective {
            offset: 0.0,
            sense: RatioSense::Plus,
        }
    }
}

/// Instance family tag. Used to pick size-parity layouts in model builders
/// and to recover application parameters from an instance file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Generic,
    Mcp,
    Ap,
}

/// A full sum-of-ratios instance over binary y and box-bounded continuous x.
#[derive(Debug, Clone)]
pub struct SorProblem {
    pub m: usize,
    pub t: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub terms: Vec<RatioTerm>,
    pub constraints: ConstraintSet,
    pub objective: Objective,
    pub family: Family,
}

/// Tri-state outcome of the box-monotonicity check: `Holds` is certified by
/// the sufficient sign condition, `Violated` by a found counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A2Status {
    Holds,
    Violated,
    Unknown,
}

/// Certified interval data for the instance: denominator lower bounds,
/// Lipschitz constants, ratio magnitude bounds, and the monotone-feasibility
/// status.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    /// Lower bound of b_t + sum_i y_i h_i(x_i) over the box and all y.
    pub denom_lower: Vec<f64>,
    pub a1_positive: bool,
    pub lip_g: Vec<Vec<f64>>,
    pub lip_h: Vec<Vec<f64>>,
    pub a2_sufficient: A2Status,
    /// Upper bound of |ratio_t| over the box and all y (infinite when the
    /// denominator bound is non-positive).
    pub ratio_upper: Vec<f64>,
}

impl SorProblem {
    /// Box-only instance with default (zero-offset, plus) objective.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, terms: Vec<RatioTerm>) -> Self {
        let m = lower.len();
        let t = terms.len();
        SorProblem {
            m,
            t,
            lower,
            upper,
            terms,
            constraints: ConstraintSet::default(),
            objective: Objective::default(),
            family: Family::Generic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.t == 0 {
            return Err(Error::InvariantViolated("need m >= 1 and T >= 1".into()));
        }
        if self.lower.len() != self.m || self.upper.len() != self.m {
            return Err(Error::DimensionMismatch("bounds vs m".into()));
        }
        if self.terms.len() != self.t {
            return Err(Error::DimensionMismatch("terms vs T".into()));
        }
        for i in 0..self.m {
            let ordered = matches!(
                self.lower[i].partial_cmp(&self.upper[i]),
                Some(std::cmp::Ordering::Less)
            );
            if !ordered {
                return Err(Error::InvariantViolated(format!(
                    "need lower < upper for item {i}"
                )));
            }
        }
        for (t, term) in self.terms.iter().enumerate() {
            if term.g.len() != self.m || term.h.len() != self.m {
                return Err(Error::DimensionMismatch(format!("term {t} functions vs m")));
            }
            for i in 0..self.m {
                term.g[i].validate(self.lower[i], self.upper[i])?;
                term.h[i].validate(self.lower[i], self.upper[i])?;
            }
        }
        for row in &self.constraints.linear_rows {
            if row.coeff_x.len() != self.m || row.coeff_y.len() != self.m {
                return Err(Error::DimensionMismatch("linear row vs m".into()));
            }
        }
        for row in &self.constraints.bilinear_budget_rows {
            if row.alpha.len() != self.m {
                return Err(Error::DimensionMismatch("budget row vs m".into()));
            }
            if row.alpha.iter().any(|&a| a < 0.0) {
                return Err(Error::InvariantViolated(
                    "budget row weights must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    fn check_dims(&self, y: &[bool], x: &[f64]) -> Result<()> {
        if y.len() != self.m || x.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "point has |y| = {}, |x| = {}, expected {}",
                y.len(),
                x.len(),
                self.m
            )));
        }
        Ok(())
    }

    /// Denominator of ratio t at (y, x).
    pub fn denominator(&self, t: usize, y: &[bool], x: &[f64]) -> f64 {
        let term = &self.terms[t];
        let mut den = term.b;
        for i in 0..self.m {
            if y[i] {
                den += term.h[i].eval(x[i]);
            }
        }
        den
    }

    /// The raw ratio sum f(y, x) = sum_t (a_t + sum y g) / (b_t + sum y h).
    /// Does not check the linear rows; feasibility is a separate query.
    pub fn eval_ratios(&self, y: &[bool], x: &[f64]) -> Result<f64> {
        self.check_dims(y, x)?;
        let mut total = 0.0;
        for (t, term) in self.terms.iter().enumerate() {
            let mut num = term.a;
            let mut den = term.b;
            for i in 0..self.m {
                if y[i] {
                    num += term.g[i].eval(x[i]);
                    den += term.h[i].eval(x[i]);
                }
            }
            if den <= 0.0 {
                return Err(Error::NonPositiveDenominator(t));
            }
            total += num / den;
        }
        Ok(total)
    }

    /// The solved objective `offset + sense * f(y, x)`.
    pub fn objective_value(&self, y: &[bool], x: &[f64]) -> Result<f64> {
        Ok(self.objective.offset + self.objective.sense.factor() * self.eval_ratios(y, x)?)
    }

    /// True iff x is in the box, every linear row holds, and every budget row
    /// holds, all with absolute tolerance `FEAS_TOL` per row.
    pub fn is_feasible(&self, y: &[bool], x: &[f64]) -> Result<bool> {
        self.check_dims(y, x)?;
        for i in 0..self.m {
            if x[i] < self.lower[i] - FEAS_TOL || x[i] > self.upper[i] + FEAS_TOL {
                return Ok(false);
            }
        }
        for row in &self.constraints.linear_rows {
            let mut lhs = 0.0;
            for i in 0..self.m {
                lhs += row.coeff_x[i] * x[i];
                if y[i] {
                    lhs += row.coeff_y[i];
                }
            }
            if lhs > row.rhs + FEAS_TOL {
                return Ok(false);
            }
        }
        for row in &self.constraints.bilinear_budget_rows {
            let mut usage = 0.0;
            for i in 0..self.m {
                if y[i] {
                    usage += row.alpha[i] * x[i];
                }
            }
            if usage > row.rhs + FEAS_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Interval certification of the standing assumptions. Never fails:
    /// a non-positive denominator bound is reported, not raised.
    pub fn check_assumptions(&self) -> AssumptionReport {
        let mut denom_lower = Vec::with_capacity(self.t);
        let mut ratio_upper = Vec::with_capacity(self.t);
        let mut lip_g = Vec::with_capacity(self.t);
        let mut lip_h = Vec::with_capacity(self.t);
        for term in &self.terms {
            let mut dl = term.b;
            let mut num_lo = term.a;
            let mut num_hi = term.a;
            let mut lg = Vec::with_capacity(self.m);
            let mut lh = Vec::with_capacity(self.m);
            for i in 0..self.m {
                let (l, u) = (self.lower[i], self.upper[i]);
                let (hlo, _hhi) = term.h[i].range_on(l, u);
                dl += hlo.min(0.0); // y_i is free in {0, 1}
                let (glo, ghi) = term.g[i].range_on(l, u);
                num_lo += glo.min(0.0);
                num_hi += ghi.max(0.0);
                lg.push(term.g[i].lipschitz_on(l, u));
                lh.push(term.h[i].lipschitz_on(l, u));
            }
            denom_lower.push(dl);
            let num_abs = num_lo.abs().max(num_hi.abs());
            ratio_upper.push(if dl > 0.0 {
                num_abs / dl
            } else {
                f64::INFINITY
            });
            lip_g.push(lg);
            lip_h.push(lh);
        }
        let a1_positive = denom_lower.iter().all(|&d| d > 0.0);
        AssumptionReport {
            denom_lower,
            a1_positive,
            lip_g,
            lip_h,
            a2_sufficient: self.a2_status(),
            ratio_upper,
        }
    }

    /// Sufficient condition: non-negative x-coefficients everywhere, so
    /// decreasing any x coordinate preserves feasibility. When the condition
    /// fails, a randomized descent search looks for a counterexample;
    /// `Unknown` is reported if none is found.
    fn a2_status(&self) -> A2Status {
        let sufficient = self
            .constraints
            .linear_rows
            .iter()
            .all(|r| r.coeff_x.iter().all(|&c| c >= 0.0));
        // budget weights are >= 0 by the type invariant
        if sufficient {
            return A2Status::Holds;
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xA2);
        for _ in 0..1000 {
            let y: Vec<bool> = (0..self.m).map(|_| rng.gen_bool(0.5)).collect();
            let x: Vec<f64> = (0..self.m)
                .map(|i| rng.gen_range(self.lower[i]..=self.upper[i]))
                .collect();
            if !self.is_feasible(&y, &x).unwrap_or(false) {
                continue;
            }
            let x2: Vec<f64> = (0..self.m)
                .map(|i| rng.gen_range(self.lower[i]..=x[i]))
                .collect();
            if !self.is_feasible(&y, &x2).unwrap_or(true) {
                return A2Status::Violated;
            }
        }
        A2Status::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn single_ratio_direct_substitution() {
        let term = RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![UnivariateFn::Affine { a0: 0.0, a1: 1.0 }],
            h: vec![UnivariateFn::Affine { a0: 0.0, a1: 1.0 }],
        };
        let p = SorProblem::new(vec![0.0], vec![2.0], vec![term]);
        let v = p.eval_ratios(&[true], &[1.0]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn capture_form_empty_selection() {
        // all-zero numerator functions, a_t = q_t * Uc, b_t = Uc
        let t = 3;
        let terms: Vec<RatioTerm> = (0..t)
            .map(|k| RatioTerm {
                a: (1.0 / t as f64) * (2.0 + k as f64),
                b: 2.0 + k as f64,
                g: vec![UnivariateFn::Zero; 2],
                h: vec![
                    UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: 1.0,
                        kappa: 0.0
                    };
                    2
                ],
            })
            .collect();
        let mut p = SorProblem::new(vec![0.0, 0.0], vec![1.0, 1.0], terms);
        p.objective = Objective {
            offset: 1.0,
            sense: RatioSense::Minus,
        };
        // empty selection: f = sum q_t, captured demand = offset - f = 0
        let f = p.eval_ratios(&[false, false], &[0.0, 0.0]).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        let captured = p.objective_value(&[false, false], &[0.0, 0.0]).unwrap();
        assert!(captured.abs() < 1e-15);
    }

    #[test]
    fn matches_independent_straight_line_evaluator() {
        // m=3, T=2 with exponential-affine terms, checked against a from-scratch
        // evaluation of the same raw parameters.
        let c = [[1.0, 0.5, 2.0], [0.3, 1.5, 0.7]];
        let eta = [[0.4, -0.3, 0.8], [1.1, 0.2, -0.6]];
        let kap = [[0.1, 0.9, -0.2], [0.0, -0.5, 0.3]];
        let terms: Vec<RatioTerm> = (0..2)
            .map(|t| RatioTerm {
                a: 0.2 + t as f64,
                b: 1.0 + t as f64,
                g: (0..3)
                    .map(|i| UnivariateFn::ExpAffine {
                        c: c[t][i],
                        eta: eta[t][i],
                        kappa: kap[t][i],
                    })
                    .collect(),
                h: (0..3)
                    .map(|i| UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: eta[t][i],
                        kappa: kap[t][i],
                    })
                    .collect(),
            })
            .collect();
        let p = SorProblem::new(vec![0.0; 3], vec![1.5; 3], terms);
        let y = [true, false, true];
        let x = [0.3, 1.2, 0.7];
        let got = p.eval_ratios(&y, &x).unwrap();
        let mut want = 0.0;
        for t in 0..2 {
            let mut num = 0.2 + t as f64;
            let mut den = 1.0 + t as f64;
            for i in 0..3 {
                if y[i] {
                    num += c[t][i] * (eta[t][i] * x[i] + kap[t][i]).exp();
                    den += (eta[t][i] * x[i] + kap[t][i]).exp();
                }
            }
            want += num / den;
        }
        assert!(close(got, want, 1e-12), "got {got}, want {want}");
    }

    #[test]
    fn feasibility_of_corners_and_budget() {
        let term = RatioTerm {
            a: 0.0,
            b: 1.0,
            g: vec![UnivariateFn::Zero; 2],
            h: vec![UnivariateFn::Zero; 2],
        };
        let mut p = SorProblem::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![term]);
        // lower corner is always inside the box
        assert!(p.is_feasible(&[true, false], &[0.0, 0.0]).unwrap());
        // coupled budget: 0.6 + 0.6 > 1
        p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![1.0, 1.0],
            rhs: 1.0,
        });
        assert!(!p.is_feasible(&[true, true], &[0.6, 0.6]).unwrap());
        assert!(p.is_feasible(&[true, false], &[0.6, 0.6]).unwrap());
        // cardinality as a linear row: y_1 + y_2 <= 1
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![0.0, 0.0],
            coeff_y: vec![1.0, 1.0],
            rhs: 1.0,
        });
        assert!(!p.is_feasible(&[true, true], &[0.2, 0.2]).unwrap());
    }

    #[test]
    fn exp_affine_lipschitz_constant() {
        let f = UnivariateFn::ExpAffine {
            c: 1.0,
            eta: 1.0,
            kappa: 0.0,
        };
        let lip = f.lipschitz_on(0.0, 1.0);
        assert!(close(lip, std::f64::consts::E, 1e-15));
    }

    #[test]
    fn assumption_report_on_capture_instance() {
        let terms: Vec<RatioTerm> = (0..2)
            .map(|_| RatioTerm {
                a: 10.0,
                b: 10.0,
                g: vec![UnivariateFn::Zero; 2],
                h: vec![
                    UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: 1.0,
                        kappa: 0.0
                    };
                    2
                ],
            })
            .collect();
        let mut p = SorProblem::new(vec![0.0, 0.0], vec![1.0, 1.0], terms);
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![1.0, 1.0],
            coeff_y: vec![0.0, 0.0],
            rhs: 1.5,
        });
        p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![0.7, 0.9],
            rhs: 1.0,
        });
        let rep = p.check_assumptions();
        // h >= 0, so the denominator minimum is at the empty selection
        assert_eq!(rep.denom_lower, vec![10.0, 10.0]);
        assert!(rep.a1_positive);
        assert_eq!(rep.a2_sufficient, A2Status::Holds);
        for t in 0..2 {
            for i in 0..2 {
                assert!(close(rep.lip_h[t][i], std::f64::consts::E, 1e-15));
                assert_eq!(rep.lip_g[t][i], 0.0);
            }
        }
    }

    #[test]
    fn lipschitz_bound_holds_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fns = [
            UnivariateFn::Zero,
            UnivariateFn::Affine { a0: 0.5, a1: -2.0 },
            UnivariateFn::ExpAffine {
                c: 1.3,
                eta: -0.8,
                kappa: 0.4,
            },
            UnivariateFn::ExpAffine {
                c: -0.7,
                eta: 1.2,
                kappa: -0.1,
            },
            UnivariateFn::LinExpAffine {
                eta: -1.1,
                kappa: 0.6,
            },
            UnivariateFn::LinExpAffine {
                eta: 0.9,
                kappa: -0.3,
            },
            UnivariateFn::PiecewiseLinear {
                breakpoints: vec![(0.0, 1.0), (0.4, -0.5), (1.1, 2.0), (2.0, 1.9)],
            },
        ];
        let (l, u) = (0.0, 2.0);
        for f in &fns {
            let lip = f.lipschitz_on(l, u);
            let (lo, hi) = f.range_on(l, u);
            for _ in 0..1000 {
                let x1 = rng.gen_range(l..=u);
                let x2 = rng.gen_range(l..=u);
                let gap = (f.eval(x1) - f.eval(x2)).abs();
                assert!(
                    gap <= lip * (x1 - x2).abs() + 1e-12,
                    "Lipschitz violated for {f:?} at {x1}, {x2}"
                );
                let v = f.eval(x1);
                assert!(
                    v >= lo - 1e-12 && v <= hi + 1e-12,
                    "range violated for {f:?}"
                );
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let terms: Vec<RatioTerm> = (0..2)
            .map(|t| RatioTerm {
                a: 0.5,
                b: 1.5,
                g: (0..3)
                    .map(|i| UnivariateFn::Affine {
                        a0: i as f64,
                        a1: 1.0 + t as f64,
                    })
                    .collect(),
                h: (0..3)
                    .map(|i| UnivariateFn::ExpAffine {
                        c: 1.0,
                        eta: 0.2 * (i + 1) as f64,
                        kappa: 0.0,
                    })
                    .collect(),
            })
            .collect();
        let p = SorProblem::new(vec![0.0, 0.1, 0.2], vec![1.0, 1.1, 1.2], terms.clone());
        let perm = [2usize, 0, 1];
        let terms_p: Vec<RatioTerm> = terms
            .iter()
            .map(|t| RatioTerm {
                a: t.a,
                b: t.b,
                g: perm.iter().map(|&i| t.g[i].clone()).collect(),
                h: perm.iter().map(|&i| t.h[i].clone()).collect(),
            })
            .collect();
        let pp = SorProblem::new(
            perm.iter().map(|&i| p.lower[i]).collect(),
            perm.iter().map(|&i| p.upper[i]).collect(),
            terms_p,
        );
        let y = [true, true, false];
        let x = [0.5, 0.8, 1.0];
        let yp: Vec<bool> = perm.iter().map(|&i| y[i]).collect();
        let xp: Vec<f64> = perm.iter().map(|&i| x[i]).collect();
        let a = p.eval_ratios(&y, &x).unwrap();
        let b = pp.eval_ratios(&yp, &xp).unwrap();
        assert!(close(a, b, 1e-14));
    }

    #[test]
    fn a2_descent_property() {
        use rand::{Rng, SeedableRng};
        // non-negative coefficients: any componentwise decrease stays feasible
        let term = RatioTerm {
            a: 1.0,
            b: 1.0,
            g: vec![UnivariateFn::Zero; 2],
            h: vec![UnivariateFn::Zero; 2],
        };
        let mut p = SorProblem::new(vec![0.0, 0.0], vec![2.0, 2.0], vec![term]);
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![1.0, 2.0],
            coeff_y: vec![0.5, 0.0],
            rhs: 3.0,
        });
        p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![1.0, 0.3],
            rhs: 2.0,
        });
        assert_eq!(p.check_assumptions().a2_sufficient, A2Status::Holds);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let y: Vec<bool> = (0..2).map(|_| rng.gen_bool(0.5)).collect();
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..=2.0)).collect();
            if !p.is_feasible(&y, &x).unwrap() {
                continue;
            }
            let x2: Vec<f64> = x.iter().map(|&v| rng.gen_range(0.0..=v)).collect();
            assert!(p.is_feasible(&y, &x2).unwrap());
        }
    }

    #[test]
    fn positive_denominator_bound_means_evaluation_never_fails() {
        use rand::{Rng, SeedableRng};
        let terms: Vec<RatioTerm> = (0..2)
            .map(|t| RatioTerm {
                a: 0.1,
                b: 0.4,
                g: vec![UnivariateFn::Affine { a0: 0.0, a1: 1.0 }; 3],
                // mixed-sign values, but never enough to sink the denominator
                h: vec![
                    UnivariateFn::Affine { a0: -0.1, a1: 0.05 * (t + 1) as f64 },
                    UnivariateFn::ExpAffine { c: 0.2, eta: -1.0, kappa: 0.0 },
                    UnivariateFn::PiecewiseLinear {
                        breakpoints: vec![(0.0, -0.05), (0.6, 0.3), (1.0, 0.1)],
                    },
                ],
            })
            .collect();
        let p = SorProblem::new(vec![0.0; 3], vec![1.0; 3], terms);
        let rep = p.check_assumptions();
        assert!(rep.a1_positive, "denom_lower = {:?}", rep.denom_lower);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xA1);
        for _ in 0..5000 {
            let y: Vec<bool> = (0..3).map(|_| rng.gen_bool(0.5)).collect();
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..=1.0)).collect();
            assert!(p.eval_ratios(&y, &x).is_ok());
        }
    }

    #[test]
    fn a2_violated_when_descent_breaks_feasibility() {
        // row -x_1 <= -1 forces x_1 >= 1; decreasing x_1 breaks it
        let term = RatioTerm {
            a: 1.0,
            b: 1.0,
            g: vec![UnivariateFn::Zero],
            h: vec![UnivariateFn::Zero],
        };
        let mut p = SorProblem::new(vec![0.0], vec![2.0], vec![term]);
        p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![-1.0],
            coeff_y: vec![0.0],
            rhs: -1.0,
        });
        assert_eq!(p.check_assumptions().a2_sufficient, A2Status::Violated);
    }
}
