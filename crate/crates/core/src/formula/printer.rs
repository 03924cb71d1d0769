//! Canonical printing and sketch extraction.
//!
//! The canonical form is the interchange format used everywhere else:
//! leading `=`, uppercase names and column letters, `", "` between
//! arguments, no spaces around binary operators, parentheses exactly where
//! the tree has `Paren` nodes, and numbers printed without trailing zeros.

use std::fmt;

use super::ast::{Expr, FormulaAst};

/// Render a number without trailing zeros ("3.10" prints as "3.1").
pub fn format_number(value: f64) -> String {
    if value == 0.0 {
        // Collapses -0 as well.
        return "0".to_string();
    }
    format!("{value}")
}

/// Deterministic canonical rendering of a formula.
pub fn print_canonical(ast: &FormulaAst) -> String {
    let mut out = String::from("=");
    write_expr(&mut out, &ast.root, &mut |e, out| write_leaf(e, out));
    out
}

/// A formula string with every reference abstracted to `RANGE` and every
/// literal constant abstracted to `CONST`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sketch {
    text: String,
}

impl Sketch {
    pub fn text(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Sketch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Abstract a formula to its sketch: canonical print with `RANGE`
/// substituted for references and `CONST` for numeric and text literals.
pub fn extract_sketch(ast: &FormulaAst) -> Sketch {
    let mut out = String::from("=");
    write_expr(&mut out, &ast.root, &mut |e, out| match e {
        Expr::Number(_) | Expr::Text(_) => out.push_str("CONST"),
        Expr::CellRef(_) | Expr::RangeRef(_) => out.push_str("RANGE"),
        _ => unreachable!("leaf writer only sees leaves"),
    });
    Sketch { text: out }
}

fn write_leaf(expr: &Expr, out: &mut String) {
    match expr {
        Expr::Number(n) => out.push_str(&format_number(*n)),
        Expr::Text(s) => {
            out.push('"');
            out.push_str(&s.replace('"', "\"\""));
            out.push('"');
        }
        Expr::CellRef(addr) => out.push_str(&addr.label()),
        Expr::RangeRef(range) => out.push_str(&range.to_string()),
        _ => unreachable!("leaf writer only sees leaves"),
    }
}

fn write_expr(out: &mut String, expr: &Expr, leaf: &mut impl FnMut(&Expr, &mut String)) {
    match expr {
        Expr::Number(_) | Expr::Text(_) | Expr::CellRef(_) | Expr::RangeRef(_) => leaf(expr, out),
        Expr::FunctionCall { name, args } => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, arg, leaf);
            }
            out.push(')');
        }
        Expr::BinaryOp { op, lhs, rhs } => {
            write_expr(out, lhs, leaf);
            out.push_str(op.symbol());
            write_expr(out, rhs, leaf);
        }
        Expr::Paren(inner) => {
            out.push('(');
            write_expr(out, inner, leaf);
            out.push(')');
        }
    }
}
