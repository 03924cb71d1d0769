//! Reference rewriting for table translocation.

use crate::grid::GridError;

use super::ast::{Expr, FormulaAst};

/// Translate every cell and range reference by `(delta_rows, delta_cols)`,
/// leaving all other nodes unchanged. Fails with `OutOfSheet` if any
/// reference would leave the positive quadrant.
pub fn rewrite_refs(
    ast: &FormulaAst,
    delta_rows: i64,
    delta_cols: i64,
) -> Result<FormulaAst, GridError> {
    Ok(FormulaAst::new(rewrite_expr(
        &ast.root, delta_rows, delta_cols,
    )?))
}

fn rewrite_expr(expr: &Expr, dr: i64, dc: i64) -> Result<Expr, GridError> {
    Ok(match expr {
        Expr::Number(_) | Expr::Text(_) => expr.clone(),
        Expr::CellRef(addr) => Expr::CellRef(addr.shifted(dr, dc)?),
        Expr::RangeRef(range) => Expr::RangeRef(range.shifted(dr, dc)?),
        Expr::FunctionCall { name, args } => Expr::FunctionCall {
            name: name.clone(),
            args: args
                .iter()
                .map(|a| rewrite_expr(a, dr, dc))
                .collect::<Result<_, _>>()?,
        },
        Expr::BinaryOp { op, lhs, rhs } => Expr::BinaryOp {
            op: *op,
            lhs: Box::new(rewrite_expr(lhs, dr, dc)?),
            rhs: Box::new(rewrite_expr(rhs, dr, dc)?),
        },
        Expr::Paren(inner) => Expr::Paren(Box::new(rewrite_expr(inner, dr, dc)?)),
    })
}
