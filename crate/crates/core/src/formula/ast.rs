//! Tree form of a spreadsheet formula.

use std::fmt;

use crate::grid::{CellAddr, RangeRef};

/// Binary operators, lowest precedence first: comparisons, then additive,
/// then multiplicative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
        )
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A formula expression node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Text(String),
    CellRef(CellAddr),
    RangeRef(RangeRef),
    FunctionCall { name: String, args: Vec<Expr> },
    BinaryOp { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Paren(Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::BinaryOp {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(name: impl Into<String>, args: Vec<Expr>) -> Expr {
        let name = name.into();
        debug_assert!(
            !name.is_empty() && name.chars().all(|c| c.is_ascii_uppercase()),
            "function names are stored uppercase"
        );
        Expr::FunctionCall { name, args }
    }

    pub fn paren(inner: Expr) -> Expr {
        Expr::Paren(Box::new(inner))
    }

    /// Visit this node and all descendants, pre-order.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        visit(self);
        match self {
            Expr::FunctionCall { args, .. } => {
                for arg in args {
                    arg.walk(visit);
                }
            }
            Expr::BinaryOp { lhs, rhs, .. } => {
                lhs.walk(visit);
                rhs.walk(visit);
            }
            Expr::Paren(inner) => inner.walk(visit),
            _ => {}
        }
    }
}

/// A parsed formula.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaAst {
    pub root: Expr,
}

impl FormulaAst {
    pub fn new(root: Expr) -> Self {
        Self { root }
    }
}

/// Number of function-call nodes in the tree, counting each occurrence.
pub fn count_functions(ast: &FormulaAst) -> usize {
    let mut n = 0;
    ast.root.walk(&mut |e| {
        if matches!(e, Expr::FunctionCall { .. }) {
            n += 1;
        }
    });
    n
}

/// Formula length as a keyword count: function names, references, literals,
/// and binary operators each contribute one token. Parentheses and commas do
/// not count.
pub fn count_keywords(ast: &FormulaAst) -> usize {
    let mut n = 0;
    ast.root.walk(&mut |e| match e {
        Expr::Number(_)
        | Expr::Text(_)
        | Expr::CellRef(_)
        | Expr::RangeRef(_)
        | Expr::FunctionCall { .. }
        | Expr::BinaryOp { .. } => n += 1,
        Expr::Paren(_) => {}
    });
    n
}

/// Every cell referenced by the formula, with ranges expanded, as a multiset
/// in source order. Duplicate references contribute duplicate addresses.
pub fn referenced_cells(ast: &FormulaAst) -> Vec<CellAddr> {
    let mut out = Vec::new();
    ast.root.walk(&mut |e| match e {
        Expr::CellRef(addr) => out.push(*addr),
        Expr::RangeRef(range) => out.extend(range.cells()),
        _ => {}
    });
    out
}
