//! Export-only exponential-bilinear forms of the two applications: the
//! original continuous problem with explicit exp-equality rows, bilinear
//! objective links, and (assortment form) McCormick envelopes on the
//! selection-exponential products. Nothing here is solved internally.

use crate::error::{Error, Result};
use crate::model::{ExpConstraint, ModelIR, ObjSense, QuadConstraint, RowSense};
use crate::problem::{Family, RatioSense, SorProblem, UnivariateFn};

struct ExpParams {
    eta: Vec<Vec<f64>>,
    kappa: Vec<Vec<f64>>,
    /// per-ratio weight: segment share for the capture form, 1 otherwise
    q: Vec<f64>,
    /// denominator constant: competitor utility or the no-purchase 1
    base: Vec<f64>,
}

fn recover_params(problem: &SorProblem) -> Result<ExpParams> {
    let (m, tn) = (problem.m, problem.t);
    let mut eta = vec![vec![0.0; m]; tn];
    let mut kappa = vec![vec![0.0; m]; tn];
    let mut q = Vec::with_capacity(tn);
    let mut base = Vec::with_capacity(tn);
    match problem.family {
        Family::Mcp => {
            if problem.objective.sense != RatioSense::Minus {
                return Err(Error::UnsupportedFamily(
                    "capture form needs minus sense".into(),
                ));
            }
            for (t, term) in problem.terms.iter().enumerate() {
                if term.b <= 0.0 {
                    return Err(Error::UnsupportedFamily("capture form needs b > 0".into()));
                }
                q.push(term.a / term.b);
                base.push(term.b);
                for i in 0..m {
                    if !matches!(term.g[i], UnivariateFn::Zero) {
                        return Err(Error::UnsupportedFamily(
                            "capture form needs zero numerator functions".into(),
                        ));
                    }
                    match term.h[i] {
                        UnivariateFn::ExpAffine {
                            c: 1.0,
                            eta: e,
                            kappa: k,
                        } => {
                            eta[t][i] = e;
                            kappa[t][i] = k;
                        }
                        _ => {
                            return Err(Error::UnsupportedFamily(
                                "capture form needs unit exponential denominators".into(),
                            ))
                        }
                    }
                }
            }
        }
        Family::Ap => {
            for (t, term) in problem.terms.iter().enumerate() {
                if term.a != 0.0 || term.b != 1.0 {
                    return Err(Error::UnsupportedFamily(
                        "assortment form needs a = 0 and b = 1".into(),
                    ));
                }
                q.push(1.0);
                base.push(1.0);
                for i in 0..m {
                    let (ge, gk) = match term.g[i] {
                        UnivariateFn::LinExpAffine { eta: e, kappa: k } => (e, k),
                        _ => {
                            return Err(Error::UnsupportedFamily(
                                "assortment form needs x*exp numerators".into(),
                            ))
                        }
                    };
                    match term.h[i] {
                        UnivariateFn::ExpAffine {
                            c,
                            eta: e,
                            kappa: k,
                        } if c == 1.0 && e == ge && k == gk => {
                            eta[t][i] = e;
                            kappa[t][i] = k;
                        }
                        _ => {
                            return Err(Error::UnsupportedFamily(
                                "assortment form needs matching exponential denominators".into(),
                            ))
                        }
                    }
                }
            }
        }
        Family::Generic => {
            return Err(Error::UnsupportedFamily(
                "generic instances have no exponential form".into(),
            ))
        }
    }
    Ok(ExpParams {
        eta,
        kappa,
        q,
        base,
    })
}

/// Build the exponential-bilinear model of a capture or assortment instance.
pub fn build_exp_bilinear(problem: &SorProblem) -> Result<ModelIR> {
    let params = recover_params(problem)?;
    let (m, tn) = (problem.m, problem.t);
    let is_ap = problem.family == Family::Ap;
    let mut ir = ModelIR::new(
        if is_ap {
            "exp_bilinear_ap"
        } else {
            "exp_bilinear_mcp"
        },
        ObjSense::Maximize,
    );
    let y: Vec<_> = (0..m).map(|i| ir.add_binary(format!("y_{i}"))).collect();
    let x: Vec<_> = (0..m)
        .map(|i| ir.add_continuous(format!("x_{i}"), problem.lower[i], problem.upper[i]))
        .collect();
    // exponential values with their exact range bounds
    let mut we = vec![Vec::with_capacity(m); tn];
    let mut we_bounds = vec![Vec::with_capacity(m); tn];
    for t in 0..tn {
        for i in 0..m {
            let lo = (params.eta[t][i] * problem.lower[i] + params.kappa[t][i]).exp();
            let hi = (params.eta[t][i] * problem.upper[i] + params.kappa[t][i]).exp();
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            we[t].push(ir.add_continuous(format!("we_{t}_{i}"), lo, hi));
            we_bounds[t].push((lo, hi));
        }
    }
    let s: Option<Vec<Vec<_>>> = is_ap.then(|| {
        (0..tn)
            .map(|t| {
                (0..m)
                    .map(|i| ir.add_continuous(format!("s_{t}_{i}"), 0.0, we_bounds[t][i].1))
                    .collect()
            })
            .collect()
    });
    let v: Vec<_> = (0..tn)
        .map(|t| ir.add_continuous(format!("v_{t}"), params.base[t], f64::INFINITY))
        .collect();
    let th: Vec<_> = (0..tn)
        .map(|t| ir.add_continuous(format!("th_{t}"), 0.0, f64::INFINITY))
        .collect();
    for t in 0..tn {
        for i in 0..m {
            ir.exp_rows.push(ExpConstraint {
                name: format!("exp_{t}_{i}"),
                target: we[t][i],
                expr: vec![(x[i], params.eta[t][i])],
                constant: params.kappa[t][i],
            });
        }
    }
    match &s {
        Some(s) => {
            // assortment: envelope the selection products, keep the price
            // products bilinear inside the objective link
            for t in 0..tn {
                for i in 0..m {
                    let (lo, hi) = we_bounds[t][i];
                    ir.add_linear(
                        format!("mcs_{t}_{i}_a"),
                        vec![(s[t][i], 1.0), (y[i], -hi)],
                        RowSense::Le,
                        0.0,
                    );
                    ir.add_linear(
                        format!("mcs_{t}_{i}_b"),
                        vec![(s[t][i], 1.0), (y[i], -lo)],
                        RowSense::Ge,
                        0.0,
                    );
                    ir.add_linear(
                        format!("mcs_{t}_{i}_c"),
                        vec![(s[t][i], 1.0), (we[t][i], -1.0), (y[i], -lo)],
                        RowSense::Le,
                        -lo,
                    );
                    ir.add_linear(
                        format!("mcs_{t}_{i}_d"),
                        vec![(s[t][i], 1.0), (we[t][i], -1.0), (y[i], -hi)],
                        RowSense::Ge,
                        -hi,
                    );
                }
            }
            for t in 0..tn {
                let mut terms = vec![(v[t], 1.0)];
                for i in 0..m {
                    terms.push((s[t][i], -1.0));
                }
                ir.add_linear(format!("vdef_{t}"), terms, RowSense::Eq, params.base[t]);
                let mut products = vec![(th[t], v[t], 1.0)];
                for i in 0..m {
                    products.push((x[i], s[t][i], -1.0));
                }
                ir.bilinear_rows.push(QuadConstraint {
                    name: format!("obj_link_{t}"),
                    linear: Vec::new(),
                    products,
                    sense: RowSense::Le,
                    rhs: 0.0,
                });
            }
        }
        None => {
            // capture: selection products stay bilinear
            for t in 0..tn {
                let mut products = Vec::with_capacity(m);
                for i in 0..m {
                    products.push((y[i], we[t][i], -1.0));
                }
                ir.bilinear_rows.push(QuadConstraint {
                    name: format!("vdef_{t}"),
                    linear: vec![(v[t], 1.0)],
                    products,
                    sense: RowSense::Eq,
                    rhs: params.base[t],
                });
                let mut products = vec![(th[t], v[t], 1.0)];
                for i in 0..m {
                    products.push((y[i], we[t][i], -params.q[t]));
                }
                ir.bilinear_rows.push(QuadConstraint {
                    name: format!("obj_link_{t}"),
                    linear: Vec::new(),
                    products,
                    sense: RowSense::Le,
                    rhs: 0.0,
                });
            }
        }
    }
    // original linear rows
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
    // budget rows: assortment gets McCormick price products, capture keeps
    // them bilinear, matching the two display forms
    if !problem.constraints.bilinear_budget_rows.is_empty() {
        if is_ap {
            let p: Vec<_> = (0..m)
                .map(|i| {
                    ir.add_continuous(
                        format!("p_{i}"),
                        problem.lower[i].min(0.0),
                        problem.upper[i].max(0.0),
                    )
                })
                .collect();
            for i in 0..m {
                let (l, u) = (problem.lower[i], problem.upper[i]);
                ir.add_linear(
                    format!("mcp_{i}_a"),
                    vec![(p[i], 1.0), (y[i], -u)],
                    RowSense::Le,
                    0.0,
                );
                ir.add_linear(
                    format!("mcp_{i}_b"),
                    vec![(p[i], 1.0), (y[i], -l)],
                    RowSense::Ge,
                    0.0,
                );
                ir.add_linear(
                    format!("mcp_{i}_c"),
                    vec![(p[i], 1.0), (x[i], -1.0), (y[i], -l)],
                    RowSense::Le,
                    -l,
                );
                ir.add_linear(
                    format!("mcp_{i}_d"),
                    vec![(p[i], 1.0), (x[i], -1.0), (y[i], -u)],
                    RowSense::Ge,
                    -u,
                );
            }
            for (ri, row) in problem.constraints.bilinear_budget_rows.iter().enumerate() {
                let terms: Vec<_> = (0..m)
                    .filter(|&i| row.alpha[i] != 0.0)
                    .map(|i| (p[i], row.alpha[i]))
                    .collect();
                ir.add_linear(format!("budget_{ri}"), terms, RowSense::Le, row.rhs);
            }
        } else {
            for (ri, row) in problem.constraints.bilinear_budget_rows.iter().enumerate() {
                let products: Vec<_> = (0..m)
                    .filter(|&i| row.alpha[i] != 0.0)
                    .map(|i| (y[i], x[i], row.alpha[i]))
                    .collect();
                ir.bilinear_rows.push(QuadConstraint {
                    name: format!("budget_{ri}"),
                    linear: Vec::new(),
                    products,
                    sense: RowSense::Le,
                    rhs: row.rhs,
                });
            }
        }
    }
    ir.objective = th.iter().map(|&id| (id, 1.0)).collect();
    ir.objective_constant = 0.0;
    Ok(ir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::{ap_to_sor, gen_ap, gen_mcp, mcp_to_sor};

    #[test]
    fn assortment_single_item_has_one_exp_and_one_link() {
        let mut inst = gen_ap(1, 1, 10.0, 1, 42);
        inst.alpha = vec![0.0]; // drop the budget coupling
        let p = ap_to_sor(&inst).unwrap();
        let mut p2 = p.clone();
        p2.constraints.bilinear_budget_rows.clear();
        let ir = build_exp_bilinear(&p2).unwrap();
        assert_eq!(ir.exp_rows.len(), 1);
        assert_eq!(ir.bilinear_rows.len(), 1);
        assert!(ir.bilinear_rows[0].name.starts_with("obj_link"));
    }

    #[test]
    fn capture_form_keeps_selection_products_bilinear() {
        let inst = gen_mcp(2, 3, 5.0, 2, 7);
        let p = mcp_to_sor(&inst).unwrap();
        let ir = build_exp_bilinear(&p).unwrap();
        // no McCormick selection rows in the capture form
        assert!(ir.linear_rows.iter().all(|r| !r.name.starts_with("mcs_")));
        // vdef rows carry the products
        assert!(ir
            .bilinear_rows
            .iter()
            .any(|r| r.name.starts_with("vdef_") && !r.products.is_empty()));
    }

    #[test]
    fn substitution_reproduces_exact_objective() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for family in ["mcp", "ap"] {
            let p = if family == "mcp" {
                mcp_to_sor(&gen_mcp(2, 3, 6.0, 2, 5)).unwrap()
            } else {
                ap_to_sor(&gen_ap(2, 3, 4.0, 2, 5)).unwrap()
            };
            let ir = build_exp_bilinear(&p).unwrap();
            for _ in 0..25 {
                let y: Vec<bool> = (0..p.m).map(|_| rng.gen_bool(0.6)).collect();
                let x: Vec<f64> = (0..p.m)
                    .map(|i| rng.gen_range(p.lower[i]..=p.upper[i]))
                    .collect();
                if !p.is_feasible(&y, &x).unwrap() {
                    continue;
                }
                let mut point = vec![0.0; ir.variables.len()];
                for i in 0..p.m {
                    point[ir.var_id(&format!("y_{i}")).unwrap().0] = y[i] as u8 as f64;
                    point[ir.var_id(&format!("x_{i}")).unwrap().0] = x[i];
                }
                let mut dens = vec![0.0; p.t];
                for t in 0..p.t {
                    let mut u_val = 0.0;
                    let mut v_val = p.terms[t].b.max(if family == "ap" { 1.0 } else { 0.0 });
                    if family == "ap" {
                        v_val = 1.0;
                    }
                    for i in 0..p.m {
                        let wv = p.terms[t].h[i].eval(x[i]);
                        point[ir.var_id(&format!("we_{t}_{i}")).unwrap().0] = wv;
                        let sv = if y[i] { wv } else { 0.0 };
                        if family == "ap" {
                            point[ir.var_id(&format!("s_{t}_{i}")).unwrap().0] = sv;
                            u_val += x[i] * sv;
                        } else {
                            u_val += (p.terms[t].a / p.terms[t].b) * sv;
                        }
                        v_val += sv;
                    }
                    point[ir.var_id(&format!("v_{t}")).unwrap().0] = v_val;
                    point[ir.var_id(&format!("th_{t}")).unwrap().0] = u_val / v_val;
                    dens[t] = v_val;
                }
                if family == "ap" {
                    for i in 0..p.m {
                        point[ir.var_id(&format!("p_{i}")).unwrap().0] =
                            if y[i] { x[i] } else { 0.0 };
                    }
                }
                let viol = ir.violations_at(&point, 1e-7);
                assert!(viol.is_empty(), "violations: {viol:?}");
                let want = p.objective_value(&y, &x).unwrap();
                let got = ir.objective_at(&point);
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "{family}: {got} vs {want}"
                );
            }
        }
    }
}
