//! Fixed-field MPS export for the linear part of a model. Rows other than
//! linear ones cannot be represented and are rejected. Field columns follow
//! the classic 8-character layout.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{ModelIR, ObjSense, RowSense, VarKind};

fn num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e12 {
        format!("{}", x as i64)
    } else {
        format!("{x:.10e}")
    }
}

pub fn export_mps(model: &ModelIR) -> Result<String> {
    if let Some(row) = model.cone_rows.first() {
        return Err(Error::UnrepresentableRow(row.name.clone()));
    }
    if let Some(row) = model.bilinear_rows.first() {
        return Err(Error::UnrepresentableRow(row.name.clone()));
    }
    if let Some(row) = model.exp_rows.first() {
        return Err(Error::UnrepresentableRow(row.name.clone()));
    }
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", model.name);
    if model.obj_sense == ObjSense::Minimize {
        let _ = writeln!(out, "OBJSENSE");
        let _ = writeln!(out, "    MIN");
    }
    let _ = writeln!(out, "ROWS");
    let _ = writeln!(out, " N  obj");
    for row in &model.linear_rows {
        let tag = match row.sense {
            RowSense::Le => "L",
            RowSense::Eq => "E",
            RowSense::Ge => "G",
        };
        let _ = writeln!(out, " {}  {}", tag, row.name);
    }
    // column-major coefficient table
    let nvars = model.variables.len();
    let mut cols: Vec<Vec<(String, f64)>> = vec![Vec::new(); nvars];
    for &(id, c) in &model.objective {
        if c != 0.0 {
            cols[id.0].push(("obj".to_string(), c));
        }
    }
    for row in &model.linear_rows {
        for &(id, c) in &row.terms {
            if c != 0.0 {
                cols[id.0].push((row.name.clone(), c));
            }
        }
    }
    let _ = writeln!(out, "COLUMNS");
    let mut in_int = false;
    let mut marker = 0usize;
    for var in &model.variables {
        let is_int = var.kind == VarKind::Binary;
        if is_int != in_int {
            let tag = if is_int { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    MARKER{marker:<4}  {:<8}  {tag}", "'MARKER'");
            marker += 1;
            in_int = is_int;
        }
        for pair in cols[var.id.0].chunks(2) {
            let mut line = format!(
                "    {:<8}  {:<8}  {:<12}",
                var.name,
                pair[0].0,
                num(pair[0].1)
            );
            if let Some(second) = pair.get(1) {
                let _ = write!(line, "   {:<8}  {:<12}", second.0, num(second.1));
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }
    if in_int {
        let _ = writeln!(out, "    MARKER{marker:<4}  {:<8}  'INTEND'", "'MARKER'");
    }
    let _ = writeln!(out, "RHS");
    for row in &model.linear_rows {
        if row.rhs != 0.0 {
            let _ = writeln!(out, "    {:<8}  {:<8}  {}", "rhs", row.name, num(row.rhs));
        }
    }
    if model.objective_constant != 0.0 {
        let _ = writeln!(
            out,
            "    {:<8}  {:<8}  {}",
            "rhs",
            "obj",
            num(-model.objective_constant)
        );
    }
    let _ = writeln!(out, "BOUNDS");
    for var in &model.variables {
        match var.kind {
            VarKind::Binary => {
                let _ = writeln!(out, " BV  {:<8}  {}", "bnd", var.name);
            }
            VarKind::Continuous => {
                let (lb, ub) = (var.lb, var.ub);
                if lb == ub {
                    let _ = writeln!(out, " FX  {:<8}  {:<8}  {}", "bnd", var.name, num(lb));
                } else if lb == f64::NEG_INFINITY && ub == f64::INFINITY {
                    let _ = writeln!(out, " FR  {:<8}  {}", "bnd", var.name);
                } else {
                    if lb != 0.0 {
                        if lb == f64::NEG_INFINITY {
                            let _ = writeln!(out, " MI  {:<8}  {}", "bnd", var.name);
                        } else {
                            let _ =
                                writeln!(out, " LO  {:<8}  {:<8}  {}", "bnd", var.name, num(lb));
                        }
                    }
                    if ub != f64::INFINITY {
                        let _ = writeln!(out, " UP  {:<8}  {:<8}  {}", "bnd", var.name, num(ub));
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RowSense;

    #[test]
    fn linear_model_round_trips_structure() {
        let mut ir = ModelIR::new("m", ObjSense::Maximize);
        let y = ir.add_binary("y_0");
        let x = ir.add_continuous("x_0", 0.5, 2.0);
        ir.objective = vec![(y, 1.0), (x, 0.5)];
        ir.add_linear("c0", vec![(y, 1.0), (x, 1.0)], RowSense::Le, 2.0);
        let text = export_mps(&ir).unwrap();
        assert!(text.starts_with("NAME"));
        assert!(text.contains("ROWS"));
        assert!(text.contains(" L  c0"));
        assert!(text.contains("'INTORG'"));
        assert!(text.contains(" BV  bnd"));
        assert!(text.ends_with("ENDATA\n"));
        // determinism
        assert_eq!(text, export_mps(&ir).unwrap());
    }

    #[test]
    fn nonlinear_rows_are_rejected() {
        let mut ir = ModelIR::new("m", ObjSense::Maximize);
        let a = ir.add_continuous("a", 0.0, 1.0);
        let b = ir.add_continuous("b", 0.0, 1.0);
        ir.cone_rows.push(crate::model::ConeConstraint {
            name: "k".into(),
            a,
            b,
            c: None,
        });
        assert!(matches!(export_mps(&ir), Err(Error::UnrepresentableRow(_))));
    }
}
