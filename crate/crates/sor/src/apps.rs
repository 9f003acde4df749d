//! The two application families: competitive facility location with cost
//! optimization (capture form) and joint assortment and pricing, plus random
//! instance generation in the benchmark shapes and i.i.d. parameter sampling
//! for the stochastic mixed-logit form.

use crate::error::{Error, Result};
use crate::problem::{
    BudgetRow, Family, LinearRow, Objective, RatioSense, RatioTerm, SorProblem, UnivariateFn,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How the total-cost budget couples to the selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetMode {
    /// sum_i y_i * x_i <= C (spend only on opened facilities)
    Coupled,
    /// sum_i x_i <= C
    Plain,
}

/// Facility location with cost optimization: maximize expected captured
/// demand over segments t with competitor utility `uc[t]` and per-location
/// cost utilities exp(eta*x + kappa).
#[derive(Debug, Clone)]
pub struct McpInstance {
    pub m: usize,
    pub t: usize,
    pub q: Vec<f64>,
    pub uc: Vec<f64>,
    pub eta: Vec<Vec<f64>>,
    pub kappa: Vec<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub budget: f64,
    pub budget_mode: BudgetMode,
    pub cardinality: usize,
}

/// Joint assortment and pricing: maximize expected revenue, prices in
/// [lower, upper], negative price sensitivities, weighted bundle budget.
#[derive(Debug, Clone)]
pub struct ApInstance {
    pub m: usize,
    pub t: usize,
    pub eta: Vec<Vec<f64>>,
    pub kappa: Vec<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: Vec<f64>,
    pub budget: f64,
    pub cardinality: usize,
}

impl McpInstance {
    pub fn validate(&self) -> Result<()> {
        if self.q.len() != self.t || self.uc.len() != self.t {
            return Err(Error::DimensionMismatch("q/uc vs T".into()));
        }
        if self.q.iter().any(|&v| v <= 0.0) || self.uc.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvariantViolated("need q_t > 0 and uc_t > 0".into()));
        }
        for t in 0..self.t {
            if self.eta[t].len() != self.m || self.kappa[t].len() != self.m {
                return Err(Error::DimensionMismatch("eta/kappa vs m".into()));
            }
            if self.eta[t].iter().any(|&e| e <= 0.0) {
                return Err(Error::InvariantViolated(
                    "cost sensitivities must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

impl ApInstance {
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.t {
            if self.eta[t].len() != self.m || self.kappa[t].len() != self.m {
                return Err(Error::DimensionMismatch("eta/kappa vs m".into()));
            }
            if self.eta[t].iter().any(|&e| e >= 0.0) {
                return Err(Error::InvariantViolated(
                    "price sensitivities must be negative".into(),
                ));
            }
        }
        if self.alpha.len() != self.m {
            return Err(Error::DimensionMismatch("alpha vs m".into()));
        }
        if self.alpha.iter().any(|&a| !(0.0..=1.0).contains(&a)) {
            return Err(Error::InvariantViolated(
                "budget weights must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Capture instance in ratio form: zero numerator functions, a_t = q_t*uc_t,
/// b_t = uc_t, unit exponential denominators; the solved objective is the
/// captured demand sum(q) - f.
pub fn mcp_to_sor(inst: &McpInstance) -> Result<SorProblem> {
    inst.validate()?;
    let terms: Vec<RatioTerm> = (0..inst.t)
        .map(|t| RatioTerm {
            a: inst.q[t] * inst.uc[t],
            b: inst.uc[t],
            g: vec![UnivariateFn::Zero; inst.m],
            h: (0..inst.m)
                .map(|i| UnivariateFn::ExpAffine {
                    c: 1.0,
                    eta: inst.eta[t][i],
                    kappa: inst.kappa[t][i],
                })
                .collect(),
        })
        .collect();
    let mut p = SorProblem::new(inst.lower.clone(), inst.upper.clone(), terms);
    p.objective = Objective {
        offset: inst.q.iter().sum(),
        sense: RatioSense::Minus,
    };
    p.family = Family::Mcp;
    p.constraints.linear_rows.push(LinearRow {
        coeff_x: vec![0.0; inst.m],
        coeff_y: vec![1.0; inst.m],
        rhs: inst.cardinality as f64,
    });
    match inst.budget_mode {
        BudgetMode::Coupled => p.constraints.bilinear_budget_rows.push(BudgetRow {
            alpha: vec![1.0; inst.m],
            rhs: inst.budget,
        }),
        BudgetMode::Plain => p.constraints.linear_rows.push(LinearRow {
            coeff_x: vec![1.0; inst.m],
            coeff_y: vec![0.0; inst.m],
            rhs: inst.budget,
        }),
    }
    p.validate()?;
    Ok(p)
}

/// Assortment instance in ratio form: numerators x*exp(eta*x+kappa),
/// denominators exp(eta*x+kappa), no-purchase constant 1.
pub fn ap_to_sor(inst: &ApInstance) -> Result<SorProblem> {
    inst.validate()?;
    let terms: Vec<RatioTerm> = (0..inst.t)
        .map(|t| RatioTerm {
            a: 0.0,
            b: 1.0,
            g: (0..inst.m)
                .map(|i| UnivariateFn::LinExpAffine {
                    eta: inst.eta[t][i],
                    kappa: inst.kappa[t][i],
                })
                .collect(),
            h: (0..inst.m)
                .map(|i| UnivariateFn::ExpAffine {
                    c: 1.0,
                    eta: inst.eta[t][i],
                    kappa: inst.kappa[t][i],
                })
                .collect(),
        })
        .collect();
    let mut p = SorProblem::new(inst.lower.clone(), inst.upper.clone(), terms);
    p.family = Family::Ap;
    p.constraints.linear_rows.push(LinearRow {
        coeff_x: vec![0.0; inst.m],
        coeff_y: vec![1.0; inst.m],
        rhs: inst.cardinality as f64,
    });
    p.constraints.bilinear_budget_rows.push(BudgetRow {
        alpha: inst.alpha.clone(),
        rhs: inst.budget,
    });
    p.validate()?;
    Ok(p)
}

/// Benchmark-shaped random capture instance: eta ~ U(0.5, 1.5), kappa ~
/// U(-1, 1), competitor utilities U(2, 10), uniform segment shares, cost
/// bounds [0, 2C/M], coupled budget. The distributions are repository
/// conventions chosen to produce nondegenerate interior optima.
pub fn gen_mcp(t: usize, m: usize, budget: f64, cardinality: usize, seed: u64) -> McpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = (0..t)
        .map(|_| (0..m).map(|_| rng.gen_range(0.5..1.5)).collect())
        .collect();
    let kappa = (0..t)
        .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let uc = (0..t).map(|_| rng.gen_range(2.0..10.0)).collect();
    let ub = 2.0 * budget / cardinality.max(1) as f64;
    McpInstance {
        m,
        t,
        q: vec![1.0 / t as f64; t],
        uc,
        eta,
        kappa,
        lower: vec![0.0; m],
        upper: vec![ub; m],
        budget,
        budget_mode: BudgetMode::Coupled,
        cardinality,
    }
}

/// Benchmark-shaped random assortment instance: eta ~ U(-1.5, -0.5), kappa ~
/// U(0, 2), price bounds [0, 3], budget weights U(0.5, 1).
pub fn gen_ap(t: usize, m: usize, budget: f64, cardinality: usize, seed: u64) -> ApInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = (0..t)
        .map(|_| (0..m).map(|_| rng.gen_range(-1.5..-0.5)).collect())
        .collect();
    let kappa = (0..t)
        .map(|_| (0..m).map(|_| rng.gen_range(0.0..2.0)).collect())
        .collect();
    let alpha = (0..m).map(|_| rng.gen_range(0.5..1.0)).collect();
    ApInstance {
        m,
        t,
        eta,
        kappa,
        lower: vec![0.0; m],
        upper: vec![3.0; m],
        alpha,
        budget,
        cardinality,
    }
}

/// Parameter distribution for sampled instances.
#[derive(Debug, Clone, Copy)]
pub enum Dist {
    Uniform { a: f64, b: f64 },
    Normal { mu: f64, sigma: f64 },
}

impl Dist {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Dist::Uniform { a, b } => rng.gen_range(a..b),
            Dist::Normal { mu, sigma } => {
                // Box-Muller keeps the dependency surface small
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                mu + sigma * (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            }
        }
    }
}

/// Sampling recipe for the stochastic form: draw i.i.d. (eta, kappa) pairs
/// per ratio, rejecting draws that violate the family's sign constraint.
#[derive(Debug, Clone)]
pub struct StochasticSpec {
    pub family: Family,
    pub m: usize,
    pub eta: Dist,
    pub kappa: Dist,
    /// competitor utility draw, capture family only
    pub uc: Option<Dist>,
    pub lower: f64,
    pub upper: f64,
    pub budget: f64,
    pub cardinality: usize,
    /// scale per-sample weights by 1/T instead of the plain sum
    pub averaged: bool,
}

const MAX_REJECTIONS: u64 = 1_000_000;

fn sample_signed(dist: &Dist, want_positive: bool, rng: &mut ChaCha8Rng) -> Result<f64> {
    for _ in 0..MAX_REJECTIONS {
        let v = dist.sample(rng);
        if (want_positive && v > 0.0) || (!want_positive && v < 0.0) {
            return Ok(v);
        }
    }
    Err(Error::RejectionOverflow(MAX_REJECTIONS))
}

/// One sampled instance with `t` i.i.d. parameter vectors. Deterministic
/// given the seed.
pub enum SampledInstance {
    Mcp(McpInstance),
    Ap(ApInstance),
}

pub fn saa_sample(spec: &StochasticSpec, t: usize, seed: u64) -> Result<SampledInstance> {
    assert!(t >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = spec.m;
    let mut eta = vec![vec![0.0; m]; t];
    let mut kappa = vec![vec![0.0; m]; t];
    let positive = match spec.family {
        Family::Mcp => true,
        Family::Ap => false,
        Family::Generic => return Err(Error::UnsupportedFamily("generic sampling".into())),
    };
    for ti in 0..t {
        for i in 0..m {
            eta[ti][i] = sample_signed(&spec.eta, positive, &mut rng)?;
            kappa[ti][i] = spec.kappa.sample(&mut rng);
        }
    }
    let weight = if spec.averaged { 1.0 / t as f64 } else { 1.0 };
    match spec.family {
        Family::Mcp => {
            let uc_dist = spec.uc.unwrap_or(Dist::Uniform { a: 2.0, b: 10.0 });
            let mut uc = Vec::with_capacity(t);
            for _ in 0..t {
                let v = sample_signed(&uc_dist, true, &mut rng)?;
                uc.push(v);
            }
            Ok(SampledInstance::Mcp(McpInstance {
                m,
                t,
                q: vec![weight; t],
                uc,
                eta,
                kappa,
                lower: vec![spec.lower; m],
                upper: vec![spec.upper; m],
                budget: spec.budget,
                budget_mode: BudgetMode::Coupled,
                cardinality: spec.cardinality,
            }))
        }
        Family::Ap => Ok(SampledInstance::Ap(ApInstance {
            m,
            t,
            eta,
            kappa,
            lower: vec![spec.lower; m],
            upper: vec![spec.upper; m],
            alpha: vec![1.0; m],
            budget: spec.budget,
            cardinality: spec.cardinality,
        })),
        Family::Generic => unreachable!(),
    }
}

/// Named benchmark groups. Capture groups span T x m x C x M with C = 0.4m
/// and M in {m/3, m/2}; assortment groups use T in {2, 5} with the same C
/// and M pattern.
pub fn presets() -> Vec<(String, Family, usize, usize, f64, usize)> {
    let mut out = Vec::new();
    let mut push = |family: Family, t: usize, m: usize, c: f64, card: usize| {
        let tag = match family {
            Family::Mcp => "mcp",
            Family::Ap => "ap",
            Family::Generic => unreachable!(),
        };
        out.push((
            format!("{tag}-T{t}-m{m}-C{}-M{card}", c as u64),
            family,
            t,
            m,
            c,
            card,
        ));
    };
    for &t in &[5usize, 10, 100] {
        for &m in &[50usize, 100] {
            for &c in &[0.4 * m as f64, 0.6 * m as f64] {
                for &card in &[m / 3, m / 2] {
                    push(Family::Mcp, t, m, c, card);
                }
            }
        }
    }
    for &m in &[200usize, 500, 1000] {
        for &c in &[0.4 * m as f64, 0.6 * m as f64] {
            for &card in &[m / 3, m / 2] {
                push(Family::Mcp, 10, m, c, card);
            }
        }
    }
    for &t in &[2usize, 5] {
        for &m in &[10usize, 20, 50, 70, 100, 200] {
            for &c in &[0.4 * m as f64, 0.6 * m as f64] {
                for &card in &[m / 3, m / 2] {
                    push(Family::Ap, t, m, c, card);
                }
            }
        }
    }
    out
}

/// Look up a preset by its group name.
pub fn preset(name: &str) -> Option<(Family, usize, usize, f64, usize)> {
    presets()
        .into_iter()
        .find(|(n, ..)| n == name)
        .map(|(_, f, t, m, c, card)| (f, t, m, c, card))
}
