//! Solver-agnostic mixed-integer model representation and the builders for
//! the discretized reformulations. Models carry linear rows, rotated-cone
//! rows, bilinear rows (a linear part plus variable products), and
//! exponential-equality rows; exact variable and constraint counts are
//! queryable.
//!
//! Variable naming is canonical so exports are reproducible and tests can
//! address variables directly: `y_{i}`, `z_{i}_{k}` (k is 1-based),
//! `x_{i}`, residual `r_{i}`, carrier `s_{i}_{k}`, reciprocal `w_{t}`,
//! products `v_{t}_{i}` and `u_{t}_{i}_{k}`, denominator value `th_{t}`,
//! bilinear block `n_{t}`, `d_{t}`, `o_{t}`, exponential block `we_{t}_{i}`,
//! `s_{t}_{i}`, `v_{t}`, and budget products `p_{i}`.

mod build;
mod expform;
mod lp;
mod mps;

pub use build::{
    build_bilinear, build_milp, build_misocp1, build_misocp2, select_lambda, wt_bounds, LambdaMode,
};
pub use expform::build_exp_bilinear;
pub use lp::{export_lp_text, LpDialect};
pub use mps::export_mps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub id: VarId,
    pub kind: VarKind,
    pub lb: f64,
    pub ub: f64,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// Rotated-cone row a*b >= c^2 (c = 1 when absent). Stored structurally,
/// never expanded into a quadratic polynomial.
#[derive(Debug, Clone)]
pub struct ConeConstraint {
    pub name: String,
    pub a: VarId,
    pub b: VarId,
    pub c: Option<VarId>,
}

/// Bilinear row: sum of variable products plus a linear part, compared to a
/// constant. The common shape is a single product o*d <= n.
#[derive(Debug, Clone)]
pub struct QuadConstraint {
    pub name: String,
    pub linear: Vec<(VarId, f64)>,
    pub products: Vec<(VarId, VarId, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// target = exp(expr + constant). Export-only; no internal solving.
#[derive(Debug, Clone)]
pub struct ExpConstraint {
    pub name: String,
    pub target: VarId,
    pub expr: Vec<(VarId, f64)>,
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct ModelIR {
    pub name: String,
    pub variables: Vec<Variable>,
    pub linear_rows: Vec<LinearConstraint>,
    pub cone_rows: Vec<ConeConstraint>,
    pub bilinear_rows: Vec<QuadConstraint>,
    pub exp_rows: Vec<ExpConstraint>,
    pub obj_sense: ObjSense,
    pub objective: Vec<(VarId, f64)>,
    pub objective_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeSummary {
    pub binary: usize,
    pub continuous: usize,
    pub constraints: usize,
}

impl ModelIR {
    pub fn new(name: impl Into<String>, sense: ObjSense) -> Self {
        ModelIR {
            name: name.into(),
            variables: Vec::new(),
            linear_rows: Vec::new(),
            cone_rows: Vec::new(),
            bilinear_rows: Vec::new(),
            exp_rows: Vec::new(),
            obj_sense: sense,
            objective: Vec::new(),
            objective_constant: 0.0,
        }
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        let id = VarId(self.variables.len());
        self.variables.push(Variable {
            id,
            kind: VarKind::Binary,
            lb: 0.0,
            ub: 1.0,
            name: name.into(),
        });
        id
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lb: f64, ub: f64) -> VarId {
        let id = VarId(self.variables.len());
        self.variables.push(Variable {
            id,
            kind: VarKind::Continuous,
            lb,
            ub,
            name: name.into(),
        });
        id
    }

    pub fn add_linear(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        sense: RowSense,
        rhs: f64,
    ) {
        self.linear_rows.push(LinearConstraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().find(|v| v.name == name).map(|v| v.id)
    }

    pub fn binary_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    pub fn continuous_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Continuous)
            .count()
    }

    pub fn constraint_count(&self) -> usize {
        self.linear_rows.len()
            + self.cone_rows.len()
            + self.bilinear_rows.len()
            + self.exp_rows.len()
    }

    pub fn size_summary(&self) -> SizeSummary {
        SizeSummary {
            binary: self.binary_count(),
            continuous: self.continuous_count(),
            constraints: self.constraint_count(),
        }
    }

    pub fn objective_at(&self, point: &[f64]) -> f64 {
        let mut v = self.objective_constant;
        for &(id, c) in &self.objective {
            v += c * point[id.0];
        }
        v
    }

    /// Names of all rows and bounds violated at the point, with `tol`
    /// absolute slack per row.
    pub fn violations_at(&self, point: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if point.len() != self.variables.len() {
            out.push(format!(
                "point has {} entries, model has {} variables",
                point.len(),
                self.variables.len()
            ));
            return out;
        }
        for var in &self.variables {
            let v = point[var.id.0];
            if v < var.lb - tol || v > var.ub + tol {
                out.push(format!(
                    "bound {}: {} not in [{}, {}]",
                    var.name, v, var.lb, var.ub
                ));
            }
        }
        let check = |lhs: f64, sense: RowSense, rhs: f64| match sense {
            RowSense::Le => lhs <= rhs + tol,
            RowSense::Ge => lhs >= rhs - tol,
            RowSense::Eq => (lhs - rhs).abs() <= tol,
        };
        for row in &self.linear_rows {
            let lhs: f64 = row.terms.iter().map(|&(id, c)| c * point[id.0]).sum();
            if !check(lhs, row.sense, row.rhs) {
                out.push(format!(
                    "linear {}: lhs {} vs rhs {}",
                    row.name, lhs, row.rhs
                ));
            }
        }
        for row in &self.cone_rows {
            let ab = point[row.a.0] * point[row.b.0];
            let c = row.c.map_or(1.0, |id| point[id.0]);
            if ab < c * c - tol {
                out.push(format!("cone {}: {} < {}", row.name, ab, c * c));
            }
        }
        for row in &self.bilinear_rows {
            let mut lhs: f64 = row.linear.iter().map(|&(id, c)| c * point[id.0]).sum();
            for &(a, b, c) in &row.products {
                lhs += c * point[a.0] * point[b.0];
            }
            if !check(lhs, row.sense, row.rhs) {
                out.push(format!(
                    "bilinear {}: lhs {} vs rhs {}",
                    row.name, lhs, row.rhs
                ));
            }
        }
        for row in &self.exp_rows {
            let expo: f64 =
                row.constant + row.expr.iter().map(|&(id, c)| c * point[id.0]).sum::<f64>();
            let want = expo.exp();
            let got = point[row.target.0];
            if (got - want).abs() > tol * want.abs().max(1.0) {
                out.push(format!("exp {}: {} vs {}", row.name, got, want));
            }
        }
        out
    }
}
