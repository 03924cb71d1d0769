//! Tokenizer for formula source text.

use crate::grid::{col_label_to_index, CellAddr};

use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Number(f64),
    Text(String),
    /// Alphabetic identifier (candidate function name), uppercased.
    Name(String),
    /// Letters immediately followed by digits, e.g. `B2`.
    Cell(CellAddr),
    LParen,
    RParen,
    Comma,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Text(_) => "string literal".into(),
            Tok::Name(n) => format!("identifier {n}"),
            Tok::Cell(a) => format!("cell reference {a}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Eq => "'='".into(),
            Tok::Ne => "'<>'".into(),
            Tok::Lt => "'<'".into(),
            Tok::Le => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Ge => "'>='".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub(super) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '"' => {
                i += 1;
                let mut text = String::new();
                loop {
                    match bytes.get(i) {
                        None => {
                            return Err(ParseError::Syntax {
                                pos: start,
                                expected: "closing '\"'".into(),
                                found: "end of input".into(),
                            })
                        }
                        Some(b'"') => {
                            // Doubled quote is an escaped quote.
                            if bytes.get(i + 1) == Some(&b'"') {
                                text.push('"');
                                i += 2;
                            } else {
                                i += 1;
                                break;
                            }
                        }
                        Some(&b) => {
                            // Keep multi-byte UTF-8 sequences intact.
                            let ch_len = utf8_len(b);
                            text.push_str(&src[i..i + ch_len]);
                            i += ch_len;
                        }
                    }
                }
                toks.push(Spanned {
                    tok: Tok::Text(text),
                    pos: start,
                });
            }
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' && bytes.get(j + 1).is_some_and(|b| b.is_ascii_digit()) {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j == i {
                    // A lone '.' with no digits around it.
                    return Err(ParseError::Syntax {
                        pos: start,
                        expected: "number".into(),
                        found: "'.'".into(),
                    });
                }
                let text = &src[i..j];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    expected: "number".into(),
                    found: format!("{text:?}"),
                })?;
                toks.push(Spanned {
                    tok: Tok::Number(value),
                    pos: start,
                });
                i = j;
            }
            'a'..='z' | 'A'..='Z' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j] as char).is_ascii_alphabetic() {
                    j += 1;
                }
                let letters = &src[i..j];
                let mut k = j;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k > j {
                    // Letters immediately followed by digits form a cell reference.
                    let digits = &src[j..k];
                    let col = col_label_to_index(letters).map_err(|_| ParseError::Syntax {
                        pos: start,
                        expected: "cell reference".into(),
                        found: format!("{:?}", &src[i..k]),
                    })?;
                    let row: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                        pos: start,
                        expected: "cell reference".into(),
                        found: format!("{:?}", &src[i..k]),
                    })?;
                    if row == 0 {
                        return Err(ParseError::Syntax {
                            pos: start,
                            expected: "row number of at least 1".into(),
                            found: format!("{:?}", &src[i..k]),
                        });
                    }
                    toks.push(Spanned {
                        tok: Tok::Cell(CellAddr::new(col, row)),
                        pos: start,
                    });
                    i = k;
                } else {
                    toks.push(Spanned {
                        tok: Tok::Name(letters.to_ascii_uppercase()),
                        pos: start,
                    });
                    i = j;
                }
            }
            '(' => {
                toks.push(Spanned { tok: Tok::LParen, pos: start });
                i += 1;
            }
            ')' => {
                toks.push(Spanned { tok: Tok::RParen, pos: start });
                i += 1;
            }
            ',' => {
                toks.push(Spanned { tok: Tok::Comma, pos: start });
                i += 1;
            }
            ':' => {
                toks.push(Spanned { tok: Tok::Colon, pos: start });
                i += 1;
            }
            '+' => {
                toks.push(Spanned { tok: Tok::Plus, pos: start });
                i += 1;
            }
            '-' => {
                toks.push(Spanned { tok: Tok::Minus, pos: start });
                i += 1;
            }
            '*' => {
                toks.push(Spanned { tok: Tok::Star, pos: start });
                i += 1;
            }
            '/' => {
                toks.push(Spanned { tok: Tok::Slash, pos: start });
                i += 1;
            }
            '=' => {
                toks.push(Spanned { tok: Tok::Eq, pos: start });
                i += 1;
            }
            '<' => {
                match bytes.get(i + 1) {
                    Some(b'=') => {
                        toks.push(Spanned { tok: Tok::Le, pos: start });
                        i += 2;
                    }
                    Some(b'>') => {
                        toks.push(Spanned { tok: Tok::Ne, pos: start });
                        i += 2;
                    }
                    _ => {
                        toks.push(Spanned { tok: Tok::Lt, pos: start });
                        i += 1;
                    }
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push(Spanned { tok: Tok::Ge, pos: start });
                    i += 2;
                } else {
                    toks.push(Spanned { tok: Tok::Gt, pos: start });
                    i += 1;
                }
            }
            '!' => {
                // "!=" is accepted as an input alias for "<>".
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push(Spanned { tok: Tok::Ne, pos: start });
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: start,
                        expected: "'='".into(),
                        found: "'!'".into(),
                    });
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    expected: "token".into(),
                    found: format!("{other:?}"),
                });
            }
        }
    }
    Ok(toks)
}

fn utf8_len(first_byte: u8) -> usize {
    match first_byte {
        0x00..=0x7f => 1,
        0xc0..=0xdf => 2,
        0xe0..=0xef => 3,
        _ => 4,
    }
}
