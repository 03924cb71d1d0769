//! Runtime values produced by formula evaluation.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::formula::format_number;
use crate::grid::CellContent;

/// Spreadsheet error codes. Errors propagate through every containing
/// operation and are returned as values, never as Rust errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorKind {
    Div0,
    Value,
    Calc,
    Name,
    Ref,
    Num,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = match self {
            ErrorKind::Div0 => "#DIV/0!",
            ErrorKind::Value => "#VALUE!",
            ErrorKind::Calc => "#CALC!",
            ErrorKind::Name => "#NAME?",
            ErrorKind::Ref => "#REF!",
            ErrorKind::Num => "#NUM!",
        };
        f.write_str(code)
    }
}

/// A rectangular 2-D block of scalar values. Arrays never nest and never
/// contain error values; element-level failures abort the whole operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Array {
    n_rows: usize,
    n_cols: usize,
    cells: Vec<Value>,
}

impl Array {
    pub fn new(n_rows: usize, n_cols: usize, cells: Vec<Value>) -> Self {
        assert_eq!(cells.len(), n_rows * n_cols, "array shape mismatch");
        debug_assert!(cells.iter().all(Value::is_scalar), "arrays hold scalars only");
        Self {
            n_rows,
            n_cols,
            cells,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Value>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|r| r.len() == n_cols));
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    /// A single column vector.
    pub fn column(cells: Vec<Value>) -> Self {
        let n = cells.len();
        Self::new(n, 1, cells)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> &Value {
        &self.cells[row * self.n_cols + col]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Value> {
        self.cells.iter()
    }

    pub fn row(&self, row: usize) -> &[Value] {
        &self.cells[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Value]> {
        self.cells.chunks(self.n_cols.max(1))
    }
}

/// Result of evaluating a formula: a scalar, a dynamic array, or an error.
/// `Blank` is the runtime image of an empty cell; it coerces to 0 in numeric
/// context and "" in text context.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Text(String),
    Bool(bool),
    Blank,
    Array(Array),
    Error(ErrorKind),
}

impl Value {
    pub fn from_cell(content: &CellContent) -> Value {
        match content {
            CellContent::Number(n) => Value::Number(*n),
            CellContent::Text(s) => Value::Text(s.clone()),
            CellContent::Empty => Value::Blank,
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Value::Array(_) | Value::Error(_))
    }

    pub fn as_error(&self) -> Option<ErrorKind> {
        match self {
            Value::Error(kind) => Some(*kind),
            _ => None,
        }
    }

    /// Numeric coercion: numbers pass through, booleans map to 1/0, blanks
    /// to 0, and numeric-looking text parses. Everything else is #VALUE!.
    pub fn to_number(&self) -> Result<f64, ErrorKind> {
        match self {
            Value::Number(n) => Ok(*n),
            Value::Bool(b) => Ok(if *b { 1.0 } else { 0.0 }),
            Value::Blank => Ok(0.0),
            Value::Text(s) => s.trim().parse::<f64>().map_err(|_| ErrorKind::Value),
            Value::Array(_) => Err(ErrorKind::Value),
            Value::Error(kind) => Err(*kind),
        }
    }

    /// Boolean coercion: booleans pass through, numbers are true when
    /// non-zero, blanks are false.
    pub fn truthy(&self) -> Result<bool, ErrorKind> {
        match self {
            Value::Bool(b) => Ok(*b),
            Value::Number(n) => Ok(*n != 0.0),
            Value::Blank => Ok(false),
            Value::Text(_) | Value::Array(_) => Err(ErrorKind::Value),
            Value::Error(kind) => Err(*kind),
        }
    }

    /// View any non-error value as an array; scalars become 1x1.
    pub fn into_array(self) -> Result<Array, ErrorKind> {
        match self {
            Value::Array(a) => Ok(a),
            Value::Error(kind) => Err(kind),
            scalar => Ok(Array::new(1, 1, vec![scalar])),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => f.write_str(&format_number(*n)),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => f.write_str(if *b { "TRUE" } else { "FALSE" }),
            Value::Blank => Ok(()),
            Value::Error(kind) => write!(f, "{kind}"),
            Value::Array(a) => {
                for (i, row) in a.rows().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    for (j, cell) in row.iter().enumerate() {
                        if j > 0 {
                            write!(f, "\t")?;
                        }
                        write!(f, "{cell}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Equality as used by comparison operators and duplicate detection:
/// numbers compare exactly, text case-insensitively, and blanks coerce to
/// the other side's zero value ("" / 0 / FALSE).
pub fn scalar_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x == y,
        (Value::Text(x), Value::Text(y)) => x.eq_ignore_ascii_case(y),
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Blank, Value::Blank) => true,
        (Value::Blank, Value::Number(n)) | (Value::Number(n), Value::Blank) => *n == 0.0,
        (Value::Blank, Value::Text(t)) | (Value::Text(t), Value::Blank) => t.is_empty(),
        (Value::Blank, Value::Bool(b)) | (Value::Bool(b), Value::Blank) => !b,
        _ => false,
    }
}

/// Total order used by comparison operators: numbers sort before text,
/// text before booleans; text compares case-insensitively with a
/// case-sensitive tiebreak; blanks coerce to the other side's zero value.
pub fn scalar_cmp(a: &Value, b: &Value) -> Ordering {
    fn rank(v: &Value) -> u8 {
        match v {
            Value::Number(_) => 0,
            Value::Text(_) => 1,
            Value::Bool(_) => 2,
            Value::Blank => 3,
            _ => unreachable!("ordering is defined on scalars"),
        }
    }
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.partial_cmp(y).unwrap_or(Ordering::Equal),
        (Value::Text(x), Value::Text(y)) => {
            let ci = x.to_lowercase().cmp(&y.to_lowercase());
            if ci != Ordering::Equal {
                ci
            } else {
                x.cmp(y)
            }
        }
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Blank, Value::Blank) => Ordering::Equal,
        // A blank takes the other side's type and compares as its zero value.
        (Value::Blank, other) => scalar_cmp(&zero_of(other), other),
        (other, Value::Blank) => scalar_cmp(other, &zero_of(other)),
        _ => rank(a).cmp(&rank(b)),
    }
}

fn zero_of(v: &Value) -> Value {
    match v {
        Value::Number(_) => Value::Number(0.0),
        Value::Text(_) => Value::Text(String::new()),
        Value::Bool(_) => Value::Bool(false),
        _ => Value::Blank,
    }
}

/// Sort key order for SORT/SORTBY: like `scalar_cmp`, except that blank
/// cells always sort after every non-blank value.
pub fn sort_cmp(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Blank, Value::Blank) => Ordering::Equal,
        (Value::Blank, _) => Ordering::Greater,
        (_, Value::Blank) => Ordering::Less,
        _ => scalar_cmp(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coercions() {
        assert_eq!(Value::Bool(true).to_number(), Ok(1.0));
        assert_eq!(Value::Blank.to_number(), Ok(0.0));
        assert_eq!(Value::Text(" 2.5 ".into()).to_number(), Ok(2.5));
        assert_eq!(Value::Text("x".into()).to_number(), Err(ErrorKind::Value));
        assert_eq!(Value::Error(ErrorKind::Calc).to_number(), Err(ErrorKind::Calc));
        assert_eq!(Value::Number(0.0).truthy(), Ok(false));
        assert_eq!(Value::Number(-2.0).truthy(), Ok(true));
    }

    #[test]
    fn scalar_equality_conventions() {
        assert!(scalar_eq(&Value::Text("Paris".into()), &Value::Text("PARIS".into())));
        assert!(scalar_eq(&Value::Blank, &Value::Text("".into())));
        assert!(scalar_eq(&Value::Blank, &Value::Number(0.0)));
        assert!(!scalar_eq(&Value::Number(5.0), &Value::Text("5".into())));
        assert!(!scalar_eq(&Value::Number(1.0), &Value::Bool(true)));
    }

    #[test]
    fn ordering_conventions() {
        assert_eq!(
            scalar_cmp(&Value::Number(9.0), &Value::Text("a".into())),
            Ordering::Less
        );
        assert_eq!(
            scalar_cmp(&Value::Text("apple".into()), &Value::Text("Banana".into())),
            Ordering::Less
        );
        // Case-insensitive first, then a case-sensitive tiebreak.
        assert_eq!(
            scalar_cmp(&Value::Text("Abc".into()), &Value::Text("abc".into())),
            Ordering::Less
        );
        assert_eq!(
            scalar_cmp(&Value::Blank, &Value::Number(-3.0)),
            Ordering::Greater
        );
        // Comparison operators coerce blanks; sort keys push them last.
        assert_eq!(scalar_cmp(&Value::Blank, &Value::Number(5.0)), Ordering::Less);
        assert_eq!(sort_cmp(&Value::Blank, &Value::Number(5.0)), Ordering::Greater);
        assert_eq!(sort_cmp(&Value::Blank, &Value::Text("z".into())), Ordering::Greater);
    }

    #[test]
    fn array_shape() {
        let a = Array::from_rows(vec![
            vec![Value::Number(1.0), Value::Number(2.0)],
            vec![Value::Number(3.0), Value::Number(4.0)],
        ]);
        assert_eq!(a.n_rows(), 2);
        assert_eq!(a.n_cols(), 2);
        assert_eq!(a.get(1, 0), &Value::Number(3.0));
        assert_eq!(a.row(0), &[Value::Number(1.0), Value::Number(2.0)]);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Value::Number(3.10).to_string(), "3.1");
        assert_eq!(Value::Bool(true).to_string(), "TRUE");
        assert_eq!(Value::Error(ErrorKind::Div0).to_string(), "#DIV/0!");
        let a = Array::from_rows(vec![
            vec![Value::Number(1.0), Value::Text("x".into())],
            vec![Value::Blank, Value::Number(2.0)],
        ]);
        assert_eq!(Value::Array(a).to_string(), "1\tx\n\t2");
    }
}
