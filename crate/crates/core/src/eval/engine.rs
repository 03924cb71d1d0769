//! Deterministic formula evaluation against a grid.
//!
//! Evaluation is a pure function of the AST and the grid. References
//! resolve through `Grid::lookup`; a range used as a value yields an
//! `Array`. Failures are returned as error values, never as Rust errors,
//! and any error argument propagates through its containing operation.

use crate::formula::{BinOp, Expr, FormulaAst};
use crate::grid::Grid;

use super::functions::{standard_registry, FunctionRegistry};
use super::value::{scalar_cmp, scalar_eq, Array, ErrorKind, Value};

/// Evaluate with the standard function registry.
pub fn evaluate(ast: &FormulaAst, grid: &Grid) -> Value {
    evaluate_with(ast, grid, standard_registry())
}

/// Evaluate with a caller-supplied registry.
pub fn evaluate_with(ast: &FormulaAst, grid: &Grid, registry: &FunctionRegistry) -> Value {
    match eval_expr(&ast.root, grid, registry) {
        // A direct reference to an empty cell reads as 0 at the top level.
        Value::Blank => Value::Number(0.0),
        other => other,
    }
}

fn eval_expr(expr: &Expr, grid: &Grid, registry: &FunctionRegistry) -> Value {
    match expr {
        Expr::Number(n) => Value::Number(*n),
        Expr::Text(s) => Value::Text(s.clone()),
        Expr::CellRef(addr) => Value::from_cell(&grid.lookup(*addr)),
        Expr::RangeRef(range) => {
            let cells = range
                .cells()
                .into_iter()
                .map(|addr| Value::from_cell(&grid.lookup(addr)))
                .collect();
            Value::Array(Array::new(
                range.n_rows() as usize,
                range.n_cols() as usize,
                cells,
            ))
        }
        Expr::Paren(inner) => eval_expr(inner, grid, registry),
        Expr::FunctionCall { name, args } => {
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                let v = eval_expr(arg, grid, registry);
                if let Some(kind) = v.as_error() {
                    return Value::Error(kind);
                }
                values.push(v);
            }
            let Some(spec) = registry.get(name) else {
                return Value::Error(ErrorKind::Name);
            };
            if values.len() < spec.min_args
                || spec.max_args.is_some_and(|max| values.len() > max)
            {
                return Value::Error(ErrorKind::Value);
            }
            (spec.call)(&values)
        }
        Expr::BinaryOp { op, lhs, rhs } => {
            let l = eval_expr(lhs, grid, registry);
            if let Some(kind) = l.as_error() {
                return Value::Error(kind);
            }
            let r = eval_expr(rhs, grid, registry);
            if let Some(kind) = r.as_error() {
                return Value::Error(kind);
            }
            apply_binary(*op, l, r)
        }
    }
}

fn apply_binary(op: BinOp, lhs: Value, rhs: Value) -> Value {
    if matches!(lhs, Value::Array(_)) || matches!(rhs, Value::Array(_)) {
        broadcast(op, lhs, rhs)
    } else if op.is_comparison() {
        Value::Bool(compare(op, &lhs, &rhs))
    } else {
        match arith(op, &lhs, &rhs) {
            Ok(n) => Value::Number(n),
            Err(kind) => Value::Error(kind),
        }
    }
}

/// Element-wise application over arrays, broadcasting scalars. Shapes must
/// match when both sides are arrays; an element-level failure aborts the
/// whole operation with that error.
fn broadcast(op: BinOp, lhs: Value, rhs: Value) -> Value {
    let (rows, cols) = match (&lhs, &rhs) {
        (Value::Array(a), Value::Array(b)) => {
            if (a.n_rows(), a.n_cols()) != (b.n_rows(), b.n_cols()) {
                return Value::Error(ErrorKind::Value);
            }
            (a.n_rows(), a.n_cols())
        }
        (Value::Array(a), _) => (a.n_rows(), a.n_cols()),
        (_, Value::Array(b)) => (b.n_rows(), b.n_cols()),
        _ => unreachable!("broadcast requires an array operand"),
    };
    let at = |v: &Value, r: usize, c: usize| -> Value {
        match v {
            Value::Array(a) => a.get(r, c).clone(),
            scalar => scalar.clone(),
        }
    };
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (l, rv) = (at(&lhs, r, c), at(&rhs, r, c));
            let el = if op.is_comparison() {
                Value::Bool(compare(op, &l, &rv))
            } else {
                match arith(op, &l, &rv) {
                    Ok(n) => Value::Number(n),
                    Err(kind) => return Value::Error(kind),
                }
            };
            cells.push(el);
        }
    }
    Value::Array(Array::new(rows, cols, cells))
}

fn compare(op: BinOp, lhs: &Value, rhs: &Value) -> bool {
    match op {
        BinOp::Eq => scalar_eq(lhs, rhs),
        BinOp::Ne => !scalar_eq(lhs, rhs),
        BinOp::Lt => scalar_cmp(lhs, rhs).is_lt(),
        BinOp::Le => scalar_cmp(lhs, rhs).is_le(),
        BinOp::Gt => scalar_cmp(lhs, rhs).is_gt(),
        BinOp::Ge => scalar_cmp(lhs, rhs).is_ge(),
        _ => unreachable!("compare only handles comparison operators"),
    }
}

fn arith(op: BinOp, lhs: &Value, rhs: &Value) -> Result<f64, ErrorKind> {
    let x = lhs.to_number()?;
    let y = rhs.to_number()?;
    Ok(match op {
        BinOp::Add => x + y,
        BinOp::Sub => x - y,
        BinOp::Mul => x * y,
        BinOp::Div => {
            if y == 0.0 {
                return Err(ErrorKind::Div0);
            }
            x / y
        }
        _ => unreachable!("arith only handles arithmetic operators"),
    })
}
