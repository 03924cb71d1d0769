//! Criteria strings as used by the *IF(S) function family.
//!
//! A criteria value is either a bare scalar (equality) or a text value with
//! a comparison-operator prefix, e.g. `">=5"` or `"<>Paris"`. Anything
//! unrecognized falls back to equality on the raw text.

use std::cmp::Ordering;
use std::fmt;

use super::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(&self, ord: Ordering) -> bool {
        match self {
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A parsed criteria: a comparison operator plus a scalar operand.
#[derive(Debug, Clone, PartialEq)]
pub struct Criteria {
    pub op: CmpOp,
    pub operand: Value,
}

/// Parse a scalar criteria argument. Operator prefixes are recognized on
/// text values; numeric-looking operands compare numerically.
pub fn parse_criteria(raw: &Value) -> Criteria {
    match raw {
        Value::Text(s) => {
            let (op, rest) = split_prefix(s);
            let operand = match rest.trim().parse::<f64>() {
                Ok(n) if n.is_finite() => Value::Number(n),
                _ => Value::Text(rest.to_string()),
            };
            Criteria { op, operand }
        }
        other => Criteria {
            op: CmpOp::Eq,
            operand: other.clone(),
        },
    }
}

fn split_prefix(s: &str) -> (CmpOp, &str) {
    for (prefix, op) in [
        (">=", CmpOp::Ge),
        ("<=", CmpOp::Le),
        ("<>", CmpOp::Ne),
        (">", CmpOp::Gt),
        ("<", CmpOp::Lt),
        ("=", CmpOp::Eq),
    ] {
        if let Some(rest) = s.strip_prefix(prefix) {
            return (op, rest);
        }
    }
    (CmpOp::Eq, s)
}

/// Whether a cell satisfies a criteria.
///
/// Conventions (shared with the SQL oracle's condition evaluation):
/// - numeric operands match numeric cells, and numeric-looking text cells;
/// - text operands match text cells case-insensitively;
/// - blank cells equal the empty text "" and nothing else, so they satisfy
///   `<>x` for any non-empty x but never an ordering criteria.
pub fn criteria_matches(crit: &Criteria, cell: &Value) -> bool {
    match (&crit.operand, cell) {
        (Value::Number(want), cell) => {
            let got = match cell {
                Value::Number(n) => Some(*n),
                Value::Text(s) => s.trim().parse::<f64>().ok().filter(|n| n.is_finite()),
                _ => None,
            };
            match got {
                Some(got) => crit
                    .op
                    .holds(got.partial_cmp(want).unwrap_or(Ordering::Equal)),
                // A blank or non-numeric cell is unequal to every number and
                // never satisfies an ordering criteria.
                None => crit.op == CmpOp::Ne,
            }
        }
        (Value::Text(want), Value::Text(got)) => {
            let ord = ci_cmp(got, want);
            crit.op.holds(ord)
        }
        (Value::Text(want), Value::Blank) => match crit.op {
            CmpOp::Eq => want.is_empty(),
            CmpOp::Ne => !want.is_empty(),
            _ => false,
        },
        (Value::Text(_), _) => crit.op == CmpOp::Ne,
        (Value::Bool(want), Value::Bool(got)) => crit.op.holds(got.cmp(want)),
        (Value::Bool(_), _) => crit.op == CmpOp::Ne,
        (Value::Blank, cell) => match crit.op {
            CmpOp::Eq => matches!(cell, Value::Blank) || matches!(cell, Value::Text(t) if t.is_empty()),
            CmpOp::Ne => !(matches!(cell, Value::Blank) || matches!(cell, Value::Text(t) if t.is_empty())),
            _ => false,
        },
        _ => false,
    }
}

fn ci_cmp(a: &str, b: &str) -> Ordering {
    a.to_lowercase().cmp(&b.to_lowercase())
}
