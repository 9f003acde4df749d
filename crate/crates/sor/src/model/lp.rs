//! Deterministic LP-format text export. Linear rows use the standard
//! sections; cone and bilinear rows are written with their quadratic part in
//! brackets (`name: [ 2 a * b - 1 c ^ 2 ] + <linear> <sense> rhs`);
//! exp-equality rows, when the dialect allows them, go into a `General
//! Constraints` section as `name: w = EXP ( <affine> )`. Identical models
//! always produce byte-identical output.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{ModelIR, ObjSense, RowSense, VarId, VarKind};

#[derive(Debug, Clone, Copy, Default)]
pub struct LpDialect {
    /// Allow the `General Constraints` section for exp-equality rows.
    pub allow_exp: bool,
}

fn num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn push_term(out: &mut String, first: &mut bool, coeff: f64, body: &str) {
    if *first {
        if coeff < 0.0 {
            let _ = write!(out, "- {} {}", num(-coeff), body);
        } else {
            let _ = write!(out, "{} {}", num(coeff), body);
        }
        *first = false;
    } else if coeff < 0.0 {
        let _ = write!(out, " - {} {}", num(-coeff), body);
    } else {
        let _ = write!(out, " + {} {}", num(coeff), body);
    }
}

fn push_const(out: &mut String, first: &mut bool, c: f64) {
    if *first {
        let _ = write!(out, "{}", num(c));
        *first = false;
    } else if c < 0.0 {
        let _ = write!(out, " - {}", num(-c));
    } else {
        let _ = write!(out, " + {}", num(c));
    }
}

fn sense_str(s: RowSense) -> &'static str {
    match s {
        RowSense::Le => "<=",
        RowSense::Eq => "=",
        RowSense::Ge => ">=",
    }
}

pub fn export_lp_text(model: &ModelIR, dialect: &LpDialect) -> Result<String> {
    if !dialect.allow_exp && !model.exp_rows.is_empty() {
        return Err(Error::UnrepresentableRow(model.exp_rows[0].name.clone()));
    }
    let name_of = |id: VarId| model.variables[id.0].name.as_str();
    let mut out = String::new();
    let _ = writeln!(out, "\\ Model {}", model.name);
    let _ = writeln!(
        out,
        "{}",
        match model.obj_sense {
            ObjSense::Maximize => "Maximize",
            ObjSense::Minimize => "Minimize",
        }
    );
    {
        let mut line = String::from(" obj: ");
        let mut first = true;
        for &(id, c) in &model.objective {
            if c != 0.0 {
                push_term(&mut line, &mut first, c, name_of(id));
            }
        }
        if model.objective_constant != 0.0 || first {
            push_const(&mut line, &mut first, model.objective_constant);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "Subject To");
    for row in &model.linear_rows {
        let mut line = format!(" {}: ", row.name);
        let mut first = true;
        for &(id, c) in &row.terms {
            if c != 0.0 {
                push_term(&mut line, &mut first, c, name_of(id));
            }
        }
        if first {
            line.push('0');
        }
        let _ = writeln!(out, "{} {} {}", line, sense_str(row.sense), num(row.rhs));
    }
    for row in &model.cone_rows {
        // a*b >= c^2 as a bracketed quadratic row
        let a = name_of(row.a);
        let b = name_of(row.b);
        match row.c {
            Some(c) => {
                let _ = writeln!(
                    out,
                    " {}: [ 1 {} * {} - 1 {} ^ 2 ] >= 0",
                    row.name,
                    a,
                    b,
                    name_of(c)
                );
            }
            None => {
                let _ = writeln!(out, " {}: [ 1 {} * {} ] >= 1", row.name, a, b);
            }
        }
    }
    for row in &model.bilinear_rows {
        let mut line = format!(" {}: [ ", row.name);
        let mut first = true;
        for &(a, b, c) in &row.products {
            if c != 0.0 {
                push_term(
                    &mut line,
                    &mut first,
                    c,
                    &format!("{} * {}", name_of(a), name_of(b)),
                );
            }
        }
        line.push_str(" ]");
        let mut first_lin = false;
        for &(id, c) in &row.linear {
            if c != 0.0 {
                push_term(&mut line, &mut first_lin, c, name_of(id));
            }
        }
        let _ = writeln!(out, "{} {} {}", line, sense_str(row.sense), num(row.rhs));
    }
    if !model.exp_rows.is_empty() {
        let _ = writeln!(out, "General Constraints");
        for row in &model.exp_rows {
            let mut expr = String::new();
            let mut first = true;
            for &(id, c) in &row.expr {
                if c != 0.0 {
                    push_term(&mut expr, &mut first, c, name_of(id));
                }
            }
            if row.constant != 0.0 || first {
                push_const(&mut expr, &mut first, row.constant);
            }
            let _ = writeln!(
                out,
                " {}: {} = EXP ( {} )",
                row.name,
                name_of(row.target),
                expr.trim_end()
            );
        }
    }
    let _ = writeln!(out, "Bounds");
    for var in &model.variables {
        if var.kind == VarKind::Binary {
            continue;
        }
        let (lb, ub) = (var.lb, var.ub);
        if lb == ub {
            let _ = writeln!(out, " {} = {}", var.name, num(lb));
        } else if lb == f64::NEG_INFINITY && ub == f64::INFINITY {
            let _ = writeln!(out, " {} free", var.name);
        } else if lb == 0.0 && ub == f64::INFINITY {
            // LP default bounds, nothing to declare
        } else if ub == f64::INFINITY {
            let _ = writeln!(out, " {} >= {}", var.name, num(lb));
        } else if lb == f64::NEG_INFINITY {
            let _ = writeln!(out, " {} <= {}", var.name, num(ub));
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", num(lb), var.name, num(ub));
        }
    }
    let binaries: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        let _ = writeln!(out, "Binaries");
        for chunk in binaries.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    let _ = writeln!(out, "End");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelIR;

    #[test]
    fn empty_model_skeleton() {
        let ir = ModelIR::new("empty", ObjSense::Maximize);
        let text = export_lp_text(&ir, &LpDialect::default()).unwrap();
        assert_eq!(
            text,
            "\\ Model empty\nMaximize\n obj: 0\nSubject To\nBounds\nEnd\n"
        );
    }

    #[test]
    fn one_variable_lp() {
        let mut ir = ModelIR::new("one", ObjSense::Maximize);
        let x = ir.add_continuous("x", 0.0, f64::INFINITY);
        ir.objective = vec![(x, 1.0)];
        ir.add_linear("cap", vec![(x, 1.0)], RowSense::Le, 1.0);
        let text = export_lp_text(&ir, &LpDialect::default()).unwrap();
        assert_eq!(
            text,
            "\\ Model one\nMaximize\n obj: 1 x\nSubject To\n cap: 1 x <= 1\nBounds\nEnd\n"
        );
    }

    #[test]
    fn exp_rows_need_the_dialect_flag() {
        let mut ir = ModelIR::new("e", ObjSense::Maximize);
        let x = ir.add_continuous("x", 0.0, 1.0);
        let w = ir.add_continuous("w", 0.0, 10.0);
        ir.exp_rows.push(crate::model::ExpConstraint {
            name: "exp_0".into(),
            target: w,
            expr: vec![(x, 2.0)],
            constant: 0.5,
        });
        assert!(matches!(
            export_lp_text(&ir, &LpDialect::default()),
            Err(crate::error::Error::UnrepresentableRow(_))
        ));
        let text = export_lp_text(&ir, &LpDialect { allow_exp: true }).unwrap();
        assert!(text.contains(" exp_0: w = EXP ( 2 x + 0.5 )"));
    }

    #[test]
    fn byte_identical_across_runs() {
        let build = || {
            let mut ir = ModelIR::new("det", ObjSense::Minimize);
            let a = ir.add_binary("a");
            let b = ir.add_continuous("b", -1.5, 2.5);
            ir.objective = vec![(a, 1.0), (b, -0.25)];
            ir.objective_constant = 3.0;
            ir.add_linear("r0", vec![(a, 2.0), (b, -1.0)], RowSense::Ge, 0.5);
            ir.bilinear_rows.push(crate::model::QuadConstraint {
                name: "q0".into(),
                linear: vec![(b, -1.0)],
                products: vec![(a, b, 1.0)],
                sense: RowSense::Le,
                rhs: 0.0,
            });
            export_lp_text(&ir, &LpDialect::default()).unwrap()
        };
        assert_eq!(build(), build());
    }
}
