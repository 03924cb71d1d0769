//! Recursive-descent parser for formula text.
//!
//! Precedence ladder, lowest first: comparison, additive, multiplicative,
//! factor. A single leading `=` is permitted and stripped. `!=` is accepted
//! on input as an alias for `<>`.

use thiserror::Error;

use crate::grid::RangeRef;

use super::ast::{BinOp, Expr, FormulaAst};
use super::lexer::{lex, Spanned, Tok};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("unbalanced parenthesis at {pos}")]
    UnbalancedParen { pos: usize },
    #[error("empty argument at {pos}")]
    EmptyArgument { pos: usize },
}

/// Parse formula source into an AST.
pub fn parse_formula(source: &str) -> Result<FormulaAst, ParseError> {
    let trimmed = source.trim();
    let body = trimmed.strip_prefix('=').unwrap_or(trimmed);
    let toks = lex(body)?;
    let mut parser = Parser {
        toks: &toks,
        i: 0,
        len: body.len(),
    };
    let root = parser.expr()?;
    if let Some(sp) = parser.peek() {
        if sp.tok == Tok::RParen {
            return Err(ParseError::UnbalancedParen { pos: sp.pos });
        }
        return Err(ParseError::Syntax {
            pos: sp.pos,
            expected: "end of formula".into(),
            found: sp.tok.describe(),
        });
    }
    Ok(FormulaAst::new(root))
}

struct Parser<'a> {
    toks: &'a [Spanned],
    i: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.i)
    }

    fn next(&mut self) -> Option<&'a Spanned> {
        let sp = self.toks.get(self.i);
        if sp.is_some() {
            self.i += 1;
        }
        sp
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|sp| &sp.tok) == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.len, |sp| sp.pos)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(sp) => ParseError::Syntax {
                pos: sp.pos,
                expected: expected.into(),
                found: sp.tok.describe(),
            },
            None => ParseError::Syntax {
                pos: self.len,
                expected: expected.into(),
                found: "end of input".into(),
            },
        }
    }

    fn comparison_op(&self) -> Option<BinOp> {
        match self.peek().map(|sp| &sp.tok) {
            Some(Tok::Eq) => Some(BinOp::Eq),
            Some(Tok::Ne) => Some(BinOp::Ne),
            Some(Tok::Lt) => Some(BinOp::Lt),
            Some(Tok::Le) => Some(BinOp::Le),
            Some(Tok::Gt) => Some(BinOp::Gt),
            Some(Tok::Ge) => Some(BinOp::Ge),
            _ => None,
        }
    }

    /// expr := additive { relop additive }
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.additive()?;
        while let Some(op) = self.comparison_op() {
            self.i += 1;
            let rhs = self.additive()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    /// additive := ["-"] mult { ("+" | "-") mult }
    ///
    /// The grammar has no unary production, so a leading minus either folds
    /// into a numeric literal or desugars to `0 - x`.
    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat(&Tok::Minus) {
            if let Some(Tok::Number(n)) = self.peek().map(|sp| &sp.tok) {
                let n = *n;
                self.i += 1;
                self.mult_with(Expr::Number(-n))?
            } else {
                let operand = self.mult()?;
                Expr::binary(BinOp::Sub, Expr::Number(0.0), operand)
            }
        } else {
            self.mult()?
        };
        loop {
            let op = match self.peek().map(|sp| &sp.tok) {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => break,
            };
            self.i += 1;
            let rhs = self.mult()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    /// mult := factor { ("*" | "/") factor }
    fn mult(&mut self) -> Result<Expr, ParseError> {
        let first = self.factor()?;
        self.mult_with(first)
    }

    fn mult_with(&mut self, first: Expr) -> Result<Expr, ParseError> {
        let mut lhs = first;
        loop {
            let op = match self.peek().map(|sp| &sp.tok) {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => break,
            };
            self.i += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    /// factor := number | string | cellref [":" cellref] | name "(" [args] ")"
    ///         | "(" expr ")" | "-" number
    fn factor(&mut self) -> Result<Expr, ParseError> {
        let Some(sp) = self.next() else {
            return Err(self.unexpected("value"));
        };
        match &sp.tok {
            Tok::Number(n) => Ok(Expr::Number(*n)),
            Tok::Minus => {
                if let Some(Tok::Number(n)) = self.peek().map(|s| &s.tok) {
                    let n = *n;
                    self.i += 1;
                    Ok(Expr::Number(-n))
                } else {
                    Err(self.unexpected("number after '-'"))
                }
            }
            Tok::Text(s) => Ok(Expr::Text(s.clone())),
            Tok::Cell(start) => {
                if self.eat(&Tok::Colon) {
                    match self.next() {
                        Some(Spanned {
                            tok: Tok::Cell(end),
                            ..
                        }) => Ok(Expr::RangeRef(RangeRef::new(*start, *end))),
                        _ => {
                            self.i -= 1;
                            Err(self.unexpected("cell reference after ':'"))
                        }
                    }
                } else {
                    Ok(Expr::CellRef(*start))
                }
            }
            Tok::Name(name) => {
                let name = name.clone();
                if !self.eat(&Tok::LParen) {
                    return Err(self.unexpected("'(' after function name"));
                }
                let args = self.arguments(sp.pos)?;
                Ok(Expr::FunctionCall { name, args })
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::UnbalancedParen { pos: sp.pos });
                }
                Ok(Expr::paren(inner))
            }
            other => Err(ParseError::Syntax {
                pos: sp.pos,
                expected: "value".into(),
                found: other.describe(),
            }),
        }
    }

    /// Arguments between a function's parentheses. The list may be empty.
    fn arguments(&mut self, open_pos: usize) -> Result<Vec<Expr>, ParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            match self.peek().map(|sp| &sp.tok) {
                Some(Tok::Comma) => {
                    return Err(ParseError::EmptyArgument { pos: self.pos() });
                }
                Some(Tok::RParen) => {
                    return Err(ParseError::EmptyArgument { pos: self.pos() });
                }
                None => return Err(ParseError::UnbalancedParen { pos: open_pos }),
                _ => {}
            }
            args.push(self.expr()?);
            match self.next() {
                Some(Spanned { tok: Tok::Comma, .. }) => continue,
                Some(Spanned {
                    tok: Tok::RParen, ..
                }) => return Ok(args),
                Some(sp) => {
                    return Err(ParseError::Syntax {
                        pos: sp.pos,
                        expected: "',' or ')'".into(),
                        found: sp.tok.describe(),
                    })
                }
                None => return Err(ParseError::UnbalancedParen { pos: open_pos }),
            }
        }
    }
}
