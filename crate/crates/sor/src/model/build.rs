//! Builders for the discretized reformulations. All four share a scaffold:
//! binaries y_i and staircase binaries z_ik, the grid coordinate rows, the
//! original linear rows, and budget rows written through the exact linked
//! substitution y_i*x_i = l_i*y_i + delta_i*sum_k z_ik.
//!
//! Numerator data enters with the objective sense applied, so every model
//! optimizes the solved objective directly; capture-form instances come out
//! as minimize-reciprocal models without a separate sign convention.
//!
//! Family-specific layouts reproduce the reference formulation sizes: the
//! assortment family carries the mixed-form residual and product columns in
//! its reciprocal model, and both the cone and envelope rows for the v and u
//! products in its conic model; the capture family drops the constant
//! numerator column n_t from the bilinear model.

use crate::error::{Error, Result};
use crate::model::{ModelIR, ObjSense, QuadConstraint, RowSense, VarId};
use crate::problem::{Family, SorProblem};
use crate::pwla::Discretization;

/// Safety margin applied above the strict lower bound for the conic shift.
const LAMBDA_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    Misocp1,
    Misocp2,
}

struct Scaffold {
    ir: ModelIR,
    y: Vec<VarId>,
    z: Vec<Vec<VarId>>,
}

/// Signed numerator accessors: value data multiplied by the objective sense.
struct Signed<'a> {
    problem: &'a SorProblem,
    disc: &'a Discretization,
    s: f64,
}

impl<'a> Signed<'a> {
    fn new(problem: &'a SorProblem, disc: &'a Discretization) -> Self {
        Signed {
            problem,
            disc,
            s: problem.objective.sense.factor(),
        }
    }
    fn a(&self, t: usize) -> f64 {
        self.s * self.problem.terms[t].a
    }
    fn g_at_l(&self, t: usize, i: usize) -> f64 {
        self.s * self.disc.g_at_l[t][i]
    }
    fn slope_g(&self, t: usize, i: usize, k: usize) -> f64 {
        self.s * self.disc.slope_g[t][i][k]
    }
}

fn scaffold(
    problem: &SorProblem,
    disc: &Discretization,
    name: &str,
    sense: ObjSense,
    with_residual: bool,
) -> Scaffold {
    let (m, k) = (problem.m, disc.k);
    let mut ir = ModelIR::new(name, sense);
    let y: Vec<VarId> = (0..m).map(|i| ir.add_binary(format!("y_{i}"))).collect();
    let z: Vec<Vec<VarId>> = (0..m)
        .map(|i| {
            (1..=k)
                .map(|kk| ir.add_binary(format!("z_{i}_{kk}")))
                .collect()
        })
        .collect();
    let x: Vec<VarId> = (0..m)
        .map(|i| ir.add_continuous(format!("x_{i}"), problem.lower[i], problem.upper[i]))
        .collect();
    let r: Option<Vec<VarId>> = with_residual.then(|| {
        (0..m)
            .map(|i| ir.add_continuous(format!("r_{i}"), 0.0, disc.delta[i]))
            .collect()
    });
    // staircase z_ik >= z_i,k+1, closed by z_iK >= 0
    for i in 0..m {
        for kk in 1..k {
            ir.add_linear(
                format!("stair_{i}_{kk}"),
                vec![(z[i][kk - 1], 1.0), (z[i][kk], -1.0)],
                RowSense::Ge,
                0.0,
            );
        }
        ir.add_linear(
            format!("stair_{i}_{k}"),
            vec![(z[i][k - 1], 1.0)],
            RowSense::Ge,
            0.0,
        );
    }
    // linkage y_i >= z_i1
    for i in 0..m {
        ir.add_linear(
            format!("link_{i}"),
            vec![(y[i], 1.0), (z[i][0], -1.0)],
            RowSense::Ge,
            0.0,
        );
    }
    // grid coordinate: x_i = l_i + delta_i * sum_k z_ik (+ r_i)
    for i in 0..m {
        let mut terms = vec![(x[i], 1.0)];
        for kk in 0..k {
            terms.push((z[i][kk], -disc.delta[i]));
        }
        if let Some(r) = &r {
            terms.push((r[i], -1.0));
        }
        ir.add_linear(format!("xdef_{i}"), terms, RowSense::Eq, problem.lower[i]);
    }
    // original linear rows on (x, y)
    for (ri, row) in problem.constraints.linear_rows.iter().enumerate() {
        let mut terms = Vec::new();
        for i in 0..m {
            if row.coeff_x[i] != 0.0 {
                terms.push((x[i], row.coeff_x[i]));
            }
            if row.coeff_y[i] != 0.0 {
                terms.push((y[i], row.coeff_y[i]));
            }
        }
        ir.add_linear(format!("row_{ri}"), terms, RowSense::Le, row.rhs);
    }
    // budget rows through the linked substitution
    for (ri, row) in problem.constraints.bilinear_budget_rows.iter().enumerate() {
        let mut terms = Vec::new();
        for i in 0..m {
            if row.alpha[i] == 0.0 {
                continue;
            }
            terms.push((y[i], row.alpha[i] * problem.lower[i]));
            for kk in 0..k {
                terms.push((z[i][kk], row.alpha[i] * disc.delta[i]));
            }
        }
        ir.add_linear(format!("budget_{ri}"), terms, RowSense::Le, row.rhs);
    }
    Scaffold { ir, y, z }
}

/// Bounds (L_t, U_t) of the reciprocal of ratio t's discretized denominator,
/// over all selections and levels: U = 1/den_min, L = 1/den_max with each
/// item contributing the off-or-on extreme of its attainable value range.
pub fn wt_bounds(problem: &SorProblem, disc: &Discretization) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(problem.t);
    for t in 0..problem.t {
        let mut den_min = problem.terms[t].b;
        let mut den_max = problem.terms[t].b;
        for i in 0..problem.m {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for lvl in 0..=disc.k {
                let v = disc.h_value(t, i, lvl);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            den_min += lo.min(0.0);
            den_max += hi.max(0.0);
        }
        if den_min <= 0.0 {
            return Err(Error::NonPositiveDenominator(t));
        }
        out.push((1.0 / den_max, 1.0 / den_min));
    }
    Ok(out)
}

/// Four-row envelope pinning `prod = w * bin` given bounds L <= w <= U.
fn mccormick(ir: &mut ModelIR, tag: &str, prod: VarId, w: VarId, bin: VarId, lw: f64, uw: f64) {
    ir.add_linear(
        format!("{tag}_a"),
        vec![(prod, 1.0), (bin, -uw)],
        RowSense::Le,
        0.0,
    );
    ir.add_linear(
        format!("{tag}_b"),
        vec![(prod, 1.0), (bin, -lw)],
        RowSense::Ge,
        0.0,
    );
    ir.add_linear(
        format!("{tag}_c"),
        vec![(prod, 1.0), (w, -1.0), (bin, -lw)],
        RowSense::Le,
        -lw,
    );
    ir.add_linear(
        format!("{tag}_d"),
        vec![(prod, 1.0), (w, -1.0), (bin, -uw)],
        RowSense::Ge,
        -uw,
    );
}

/// Reciprocal linearization: one reciprocal variable per ratio pinned by its
/// defining equality, with every product against a binary replaced by a
/// McCormick-enveloped column. Fails when a denominator interval touches
/// zero, since the reciprocal then has no finite envelope.
pub fn build_milp(problem: &SorProblem, disc: &Discretization, family: Family) -> Result<ModelIR> {
    let bounds = wt_bounds(problem, disc).map_err(|e| match e {
        Error::NonPositiveDenominator(t) => Error::UnboundedAuxiliary(t),
        other => other,
    })?;
    let (m, k, tn) = (problem.m, disc.k, problem.t);
    let sg = Signed::new(problem, disc);
    let mut sc = scaffold(
        problem,
        disc,
        "milp",
        ObjSense::Maximize,
        family == Family::Ap,
    );
    // carrier product columns of the mixed form, kept by the assortment layout
    if family == Family::Ap {
        for i in 0..m {
            for kk in 1..=k {
                sc.ir.add_continuous(format!("s_{i}_{kk}"), 0.0, 1.0);
            }
        }
    }
    let w: Vec<VarId> = (0..tn)
        .map(|t| {
            sc.ir
                .add_continuous(format!("w_{t}"), bounds[t].0, bounds[t].1)
        })
        .collect();
    let v: Vec<Vec<VarId>> = (0..tn)
        .map(|t| {
            (0..m)
                .map(|i| sc.ir.add_continuous(format!("v_{t}_{i}"), 0.0, bounds[t].1))
                .collect()
        })
        .collect();
    let u: Vec<Vec<Vec<VarId>>> = (0..tn)
        .map(|t| {
            (0..m)
                .map(|i| {
                    (1..=k)
                        .map(|kk| {
                            sc.ir
                                .add_continuous(format!("u_{t}_{i}_{kk}"), 0.0, bounds[t].1)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // denominator-reciprocal defining equality per ratio
    for t in 0..tn {
        let mut terms = vec![(w[t], problem.terms[t].b)];
        for i in 0..m {
            terms.push((v[t][i], disc.h_at_l[t][i]));
            for kk in 0..k {
                terms.push((u[t][i][kk], disc.delta[i] * disc.slope_h[t][i][kk]));
            }
        }
        sc.ir
            .add_linear(format!("recip_{t}"), terms, RowSense::Eq, 1.0);
    }
    for t in 0..tn {
        let (lw, uw) = bounds[t];
        for i in 0..m {
            mccormick(
                &mut sc.ir,
                &format!("mcv_{t}_{i}"),
                v[t][i],
                w[t],
                sc.y[i],
                lw,
                uw,
            );
            for kk in 0..k {
                mccormick(
                    &mut sc.ir,
                    &format!("mcu_{t}_{i}_{}", kk + 1),
                    u[t][i][kk],
                    w[t],
                    sc.z[i][kk],
                    lw,
                    uw,
                );
            }
        }
    }
    let mut obj = Vec::new();
    for t in 0..tn {
        obj.push((w[t], sg.a(t)));
        for i in 0..m {
            obj.push((v[t][i], sg.g_at_l(t, i)));
            for kk in 0..k {
                obj.push((u[t][i][kk], disc.delta[i] * sg.slope_g(t, i, kk)));
            }
        }
    }
    sc.ir.objective = obj;
    sc.ir.objective_constant = problem.objective.offset;
    Ok(sc.ir)
}

/// Conic shift factors, strictly above every signed anchor ratio, the ratio
/// magnitude bound, and (for the all-cone form) every signed slope ratio.
pub fn select_lambda(
    problem: &SorProblem,
    disc: &Discretization,
    mode: LambdaMode,
) -> Result<Vec<f64>> {
    let report = problem.check_assumptions();
    let sg = Signed::new(problem, disc);
    let mut out = Vec::with_capacity(problem.t);
    for t in 0..problem.t {
        let mut need = 0.0f64;
        for i in 0..problem.m {
            let h0 = disc.h_at_l[t][i];
            if h0 <= 0.0 {
                return Err(Error::NonPositiveAnchor { t, i });
            }
            need = need.max(sg.g_at_l(t, i) / h0);
            if mode == LambdaMode::Misocp1 {
                for k in 0..disc.k {
                    let sh = disc.slope_h[t][i][k];
                    if sh <= 0.0 {
                        return Err(Error::MonotonicityViolated { t, i });
                    }
                    need = need.max(sg.slope_g(t, i, k) / sh);
                }
            }
        }
        if !report.ratio_upper[t].is_finite() {
            return Err(Error::NonPositiveDenominator(t));
        }
        need = need.max(report.ratio_upper[t]);
        out.push(if need > 0.0 {
            (1.0 + LAMBDA_MARGIN) * need
        } else {
            LAMBDA_MARGIN
        });
    }
    Ok(out)
}

fn build_misocp(problem: &SorProblem, disc: &Discretization, mode: LambdaMode) -> Result<ModelIR> {
    let lambda = select_lambda(problem, disc, mode)?;
    let (m, k, tn) = (problem.m, disc.k, problem.t);
    let sg = Signed::new(problem, disc);
    let family = problem.family;
    let name = match mode {
        LambdaMode::Misocp1 => "misocp1",
        LambdaMode::Misocp2 => "misocp2",
    };
    let mut sc = scaffold(problem, disc, name, ObjSense::Minimize, false);
    let w: Vec<VarId> = (0..tn)
        .map(|t| sc.ir.add_continuous(format!("w_{t}"), 0.0, f64::INFINITY))
        .collect();
    let th: Vec<VarId> = (0..tn)
        .map(|t| {
            sc.ir
                .add_continuous(format!("th_{t}"), f64::NEG_INFINITY, f64::INFINITY)
        })
        .collect();
    let v: Vec<Vec<VarId>> = (0..tn)
        .map(|t| {
            (0..m)
                .map(|i| {
                    sc.ir
                        .add_continuous(format!("v_{t}_{i}"), 0.0, f64::INFINITY)
                })
                .collect()
        })
        .collect();
    let u: Vec<Vec<Vec<VarId>>> = (0..tn)
        .map(|t| {
            (0..m)
                .map(|i| {
                    (1..=k)
                        .map(|kk| {
                            sc.ir
                                .add_continuous(format!("u_{t}_{i}_{kk}"), 0.0, f64::INFINITY)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // denominator value, its non-negativity, and the reciprocal cone
    for t in 0..tn {
        let mut terms = vec![(th[t], 1.0)];
        for i in 0..m {
            terms.push((sc.y[i], -disc.h_at_l[t][i]));
            for kk in 0..k {
                terms.push((sc.z[i][kk], -disc.delta[i] * disc.slope_h[t][i][kk]));
            }
        }
        sc.ir.add_linear(
            format!("thdef_{t}"),
            terms,
            RowSense::Eq,
            problem.terms[t].b,
        );
        sc.ir
            .add_linear(format!("thnn_{t}"), vec![(th[t], 1.0)], RowSense::Ge, 0.0);
        sc.ir.cone_rows.push(crate::model::ConeConstraint {
            name: format!("cone_w_{t}"),
            a: w[t],
            b: th[t],
            c: None,
        });
    }
    for t in 0..tn {
        for i in 0..m {
            sc.ir.cone_rows.push(crate::model::ConeConstraint {
                name: format!("cone_v_{t}_{i}"),
                a: v[t][i],
                b: th[t],
                c: Some(sc.y[i]),
            });
        }
    }
    match mode {
        LambdaMode::Misocp1 => {
            for t in 0..tn {
                for i in 0..m {
                    for kk in 0..k {
                        sc.ir.cone_rows.push(crate::model::ConeConstraint {
                            name: format!("cone_u_{t}_{i}_{}", kk + 1),
                            a: u[t][i][kk],
                            b: th[t],
                            c: Some(sc.z[i][kk]),
                        });
                    }
                }
            }
        }
        LambdaMode::Misocp2 => {
            let bounds = wt_bounds(problem, disc)?;
            for t in 0..tn {
                let (lw, uw) = bounds[t];
                for i in 0..m {
                    // the assortment layout keeps both the cone and the
                    // envelope rows on the v products, plus explicit
                    // non-negativity rows on the u columns
                    if family == Family::Ap {
                        mccormick(
                            &mut sc.ir,
                            &format!("mcv_{t}_{i}"),
                            v[t][i],
                            w[t],
                            sc.y[i],
                            lw,
                            uw,
                        );
                    }
                    for kk in 0..k {
                        mccormick(
                            &mut sc.ir,
                            &format!("mcu_{t}_{i}_{}", kk + 1),
                            u[t][i][kk],
                            w[t],
                            sc.z[i][kk],
                            lw,
                            uw,
                        );
                        if family == Family::Ap {
                            sc.ir.add_linear(
                                format!("unn_{t}_{i}_{}", kk + 1),
                                vec![(u[t][i][kk], 1.0)],
                                RowSense::Ge,
                                0.0,
                            );
                        }
                    }
                }
            }
        }
    }
    let mut obj = Vec::new();
    let mut shift = 0.0;
    for t in 0..tn {
        obj.push((w[t], lambda[t] * problem.terms[t].b - sg.a(t)));
        for i in 0..m {
            obj.push((v[t][i], lambda[t] * disc.h_at_l[t][i] - sg.g_at_l(t, i)));
            for kk in 0..k {
                obj.push((
                    u[t][i][kk],
                    disc.delta[i] * (lambda[t] * disc.slope_h[t][i][kk] - sg.slope_g(t, i, kk)),
                ));
            }
        }
        shift -= lambda[t];
    }
    sc.ir.objective = obj;
    // minimized model value at defining points equals the negated solved
    // objective: fold the offset into the constant
    sc.ir.objective_constant = shift - problem.objective.offset;
    Ok(sc.ir)
}

/// All-cone conic model; requires every denominator function increasing on
/// the grid with a positive anchor.
pub fn build_misocp1(problem: &SorProblem, disc: &Discretization) -> Result<ModelIR> {
    build_misocp(problem, disc, LambdaMode::Misocp1)
}

/// Conic model with cones on the selection products and envelopes on the
/// level products; requires positive anchors only.
pub fn build_misocp2(problem: &SorProblem, disc: &Discretization) -> Result<ModelIR> {
    build_misocp(problem, disc, LambdaMode::Misocp2)
}

/// Bilinear model: per-ratio value variables linked by o_t * d_t <= n_t.
/// Capture-family instances have constant numerators, so their n_t column is
/// eliminated into the row constant.
pub fn build_bilinear(problem: &SorProblem, disc: &Discretization) -> ModelIR {
    let (m, k, tn) = (problem.m, disc.k, problem.t);
    let sg = Signed::new(problem, disc);
    let drop_n = problem.family == Family::Mcp;
    let mut sc = scaffold(problem, disc, "bilinear", ObjSense::Maximize, false);
    let n: Option<Vec<VarId>> = (!drop_n).then(|| {
        (0..tn)
            .map(|t| {
                sc.ir
                    .add_continuous(format!("n_{t}"), f64::NEG_INFINITY, f64::INFINITY)
            })
            .collect()
    });
    let d: Vec<VarId> = (0..tn)
        .map(|t| sc.ir.add_continuous(format!("d_{t}"), 0.0, f64::INFINITY))
        .collect();
    let o: Vec<VarId> = (0..tn)
        .map(|t| {
            sc.ir
                .add_continuous(format!("o_{t}"), f64::NEG_INFINITY, f64::INFINITY)
        })
        .collect();
    for t in 0..tn {
        if let Some(n) = &n {
            let mut terms = vec![(n[t], 1.0)];
            for i in 0..m {
                terms.push((sc.y[i], -sg.g_at_l(t, i)));
                for kk in 0..k {
                    terms.push((sc.z[i][kk], -disc.delta[i] * sg.slope_g(t, i, kk)));
                }
            }
            sc.ir
                .add_linear(format!("ndef_{t}"), terms, RowSense::Eq, sg.a(t));
        }
        let mut terms = vec![(d[t], 1.0)];
        for i in 0..m {
            terms.push((sc.y[i], -disc.h_at_l[t][i]));
            for kk in 0..k {
                terms.push((sc.z[i][kk], -disc.delta[i] * disc.slope_h[t][i][kk]));
            }
        }
        sc.ir
            .add_linear(format!("ddef_{t}"), terms, RowSense::Eq, problem.terms[t].b);
        let (linear, rhs) = match &n {
            Some(n) => (vec![(n[t], -1.0)], 0.0),
            None => (Vec::new(), sg.a(t)),
        };
        sc.ir.bilinear_rows.push(QuadConstraint {
            name: format!("frac_{t}"),
            linear,
            products: vec![(o[t], d[t], 1.0)],
            sense: RowSense::Le,
            rhs,
        });
    }
    sc.ir.objective = o.iter().map(|&id| (id, 1.0)).collect();
    sc.ir.objective_constant = problem.objective.offset;
    sc.ir
}
