//! Placed spreadsheet tables: A1 addressing, rectangular ranges, and
//! table translocation.
//!
//! Columns are labelled in bijective base-26 ("A".."Z", "AA", ...) and rows
//! are 1-based, so the top-left cell of a sheet is `A1`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("invalid column label {0:?}")]
    BadLabel(String),
    #[error("invalid cell address {0:?}")]
    BadAddress(String),
    #[error("shift would move a reference outside the sheet")]
    OutOfSheet,
    #[error("data row {row} has {got} cells, expected {want}")]
    RaggedRow { row: usize, got: usize, want: usize },
    #[error("duplicate column header {0:?}")]
    DuplicateHeader(String),
    #[error("grid must have at least one column")]
    NoColumns,
}

/// Convert a 1-based column index to its alphabetic label (1 -> "A", 27 -> "AA").
pub fn col_index_to_label(index: u32) -> String {
    assert!(index >= 1, "column index is 1-based");
    let mut n = index;
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// Convert an alphabetic column label back to its 1-based index.
pub fn col_label_to_index(label: &str) -> Result<u32, GridError> {
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphabetic()) {
        return Err(GridError::BadLabel(label.to_string()));
    }
    let mut acc: u32 = 0;
    for c in label.chars() {
        let digit = c.to_ascii_uppercase() as u32 - 'A' as u32 + 1;
        acc = acc
            .checked_mul(26)
            .and_then(|v| v.checked_add(digit))
            .ok_or_else(|| GridError::BadLabel(label.to_string()))?;
    }
    Ok(acc)
}

/// A single cell address in A1 notation. Both coordinates are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddr {
    pub row: u32,
    pub col: u32,
}

impl CellAddr {
    pub fn new(col: u32, row: u32) -> Self {
        debug_assert!(col >= 1 && row >= 1, "cell coordinates are 1-based");
        Self { row, col }
    }

    /// Parse an address such as "B2". Case-insensitive on the column letters.
    pub fn parse(s: &str) -> Result<Self, GridError> {
        let split = s.find(|c: char| c.is_ascii_digit());
        let Some(split) = split else {
            return Err(GridError::BadAddress(s.to_string()));
        };
        let (letters, digits) = s.split_at(split);
        if letters.is_empty() || digits.chars().any(|c| !c.is_ascii_digit()) {
            return Err(GridError::BadAddress(s.to_string()));
        }
        let col = col_label_to_index(letters)?;
        let row: u32 = digits
            .parse()
            .map_err(|_| GridError::BadAddress(s.to_string()))?;
        if row == 0 {
            return Err(GridError::BadAddress(s.to_string()));
        }
        Ok(Self { row, col })
    }

    pub fn label(&self) -> String {
        format!("{}{}", col_index_to_label(self.col), self.row)
    }

    /// Translate by a signed delta, failing if the result leaves the sheet.
    pub fn shifted(&self, delta_rows: i64, delta_cols: i64) -> Result<Self, GridError> {
        let row = self.row as i64 + delta_rows;
        let col = self.col as i64 + delta_cols;
        if row < 1 || col < 1 || row > u32::MAX as i64 || col > u32::MAX as i64 {
            return Err(GridError::OutOfSheet);
        }
        Ok(Self {
            row: row as u32,
            col: col as u32,
        })
    }
}

impl fmt::Display for CellAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A rectangular range between two corner cells, stored normalized so that
/// `start` is the top-left corner and `end` the bottom-right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RangeRef {
    pub start: CellAddr,
    pub end: CellAddr,
}

impl RangeRef {
    /// Build a range from any two corners, normalizing their order.
    pub fn new(a: CellAddr, b: CellAddr) -> Self {
        Self {
            start: CellAddr::new(a.col.min(b.col), a.row.min(b.row)),
            end: CellAddr::new(a.col.max(b.col), a.row.max(b.row)),
        }
    }

    pub fn n_rows(&self) -> u32 {
        self.end.row - self.start.row + 1
    }

    pub fn n_cols(&self) -> u32 {
        self.end.col - self.start.col + 1
    }

    pub fn contains(&self, addr: CellAddr) -> bool {
        addr.row >= self.start.row
            && addr.row <= self.end.row
            && addr.col >= self.start.col
            && addr.col <= self.end.col
    }

    /// Enumerate every address in the rectangle in row-major order.
    pub fn cells(&self) -> Vec<CellAddr> {
        let mut out = Vec::with_capacity((self.n_rows() * self.n_cols()) as usize);
        for row in self.start.row..=self.end.row {
            for col in self.start.col..=self.end.col {
                out.push(CellAddr::new(col, row));
            }
        }
        out
    }

    pub fn shifted(&self, delta_rows: i64, delta_cols: i64) -> Result<Self, GridError> {
        Ok(Self {
            start: self.start.shifted(delta_rows, delta_cols)?,
            end: self.end.shifted(delta_rows, delta_cols)?,
        })
    }
}

impl fmt::Display for RangeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// Row-major enumeration of all addresses in a rectangle.
pub fn resolve_range(range: &RangeRef) -> Vec<CellAddr> {
    range.cells()
}

/// Content of a single cell. Cells are typed at load time: anything that
/// parses as a decimal number is stored numerically, everything else as text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CellContent {
    Number(f64),
    Text(String),
    Empty,
}

impl CellContent {
    /// Type raw text the way the corpus loader does: valid decimals become
    /// numbers, blank strings become empty cells.
    pub fn from_text(raw: &str) -> Self {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return CellContent::Empty;
        }
        match trimmed.parse::<f64>() {
            Ok(n) if n.is_finite() => CellContent::Number(n),
            _ => CellContent::Text(raw.to_string()),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CellContent::Empty)
    }
}

/// A placed rectangular table: a header row at `origin` followed by data
/// rows. Cells outside the table read as empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    origin: CellAddr,
    headers: Vec<String>,
    rows: Vec<Vec<CellContent>>,
}

impl Grid {
    pub fn new(
        origin: CellAddr,
        headers: Vec<String>,
        rows: Vec<Vec<CellContent>>,
    ) -> Result<Self, GridError> {
        if headers.is_empty() {
            return Err(GridError::NoColumns);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != headers.len() {
                return Err(GridError::RaggedRow {
                    row: i + 1,
                    got: row.len(),
                    want: headers.len(),
                });
            }
        }
        Ok(Self {
            origin,
            headers,
            rows,
        })
    }

    pub fn origin(&self) -> CellAddr {
        self.origin
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<CellContent>] {
        &self.rows
    }

    /// Number of data rows (the header row is not counted).
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.headers.len()
    }

    /// Translate the whole table, keeping content identical.
    pub fn shifted(&self, delta_rows: i64, delta_cols: i64) -> Result<Self, GridError> {
        Ok(Self {
            origin: self.origin.shifted(delta_rows, delta_cols)?,
            headers: self.headers.clone(),
            rows: self.rows.clone(),
        })
    }

    /// Content at an absolute address: the header text, a data cell, or
    /// `Empty` when the address lies outside the placed table.
    pub fn lookup(&self, addr: CellAddr) -> CellContent {
        if addr.col < self.origin.col || addr.row < self.origin.row {
            return CellContent::Empty;
        }
        let col = (addr.col - self.origin.col) as usize;
        if col >= self.n_cols() {
            return CellContent::Empty;
        }
        if addr.row == self.origin.row {
            return CellContent::Text(self.headers[col].clone());
        }
        let row = (addr.row - self.origin.row - 1) as usize;
        match self.rows.get(row) {
            Some(cells) => cells[col].clone(),
            None => CellContent::Empty,
        }
    }

    /// Absolute range covering the data rows of the 0-based column `col`.
    pub fn data_range(&self, col: usize) -> RangeRef {
        debug_assert!(col < self.n_cols());
        let c = self.origin.col + col as u32;
        RangeRef::new(
            CellAddr::new(c, self.origin.row + 1),
            CellAddr::new(c, self.origin.row + self.n_rows() as u32),
        )
    }
}

/// Maps column header names to their sheet column and data range, linking
/// query column names to spreadsheet ranges.
#[derive(Debug, Clone)]
pub struct ColumnBinding {
    entries: Vec<(String, u32, RangeRef)>,
    by_name: HashMap<String, usize>,
}

impl ColumnBinding {
    pub fn from_grid(grid: &Grid) -> Result<Self, GridError> {
        let mut entries = Vec::with_capacity(grid.n_cols());
        let mut by_name = HashMap::new();
        for (i, header) in grid.headers().iter().enumerate() {
            let key = header.trim().to_ascii_lowercase();
            if by_name.insert(key, i).is_some() {
                return Err(GridError::DuplicateHeader(header.clone()));
            }
            entries.push((header.clone(), grid.origin().col + i as u32, grid.data_range(i)));
        }
        Ok(Self { entries, by_name })
    }

    /// Case-insensitive lookup of a column by header name.
    pub fn get(&self, name: &str) -> Option<(u32, RangeRef)> {
        self.by_name
            .get(&name.trim().to_ascii_lowercase())
            .map(|&i| (self.entries[i].1, self.entries[i].2))
    }

    /// Data range of the leftmost column.
    pub fn first_range(&self) -> RangeRef {
        self.entries[0].2
    }

    pub fn entries(&self) -> &[(String, u32, RangeRef)] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_examples() {
        assert_eq!(col_index_to_label(1), "A");
        assert_eq!(col_index_to_label(26), "Z");
        assert_eq!(col_index_to_label(27), "AA");
        assert_eq!(col_index_to_label(703), "AAA");
        assert_eq!(col_label_to_index("A").unwrap(), 1);
        assert_eq!(col_label_to_index("Z").unwrap(), 26);
        assert_eq!(col_label_to_index("aa").unwrap(), 27);
        assert_eq!(col_label_to_index("AAA").unwrap(), 703);
    }

    #[test]
    fn label_matches_enumeration_oracle() {
        // Independent oracle: enumerate bijective base-26 strings in order
        // (all 1-letter, then all 2-letter, then all 3-letter labels).
        let alphabet: Vec<char> = ('A'..='Z').collect();
        let mut labels = Vec::new();
        for &a in &alphabet {
            labels.push(a.to_string());
        }
        for &a in &alphabet {
            for &b in &alphabet {
                labels.push(format!("{a}{b}"));
            }
        }
        for &a in &alphabet {
            for &b in &alphabet {
                for &c in &alphabet {
                    labels.push(format!("{a}{b}{c}"));
                }
            }
        }
        for (i, expected) in labels.iter().enumerate() {
            let index = i as u32 + 1;
            assert_eq!(&col_index_to_label(index), expected);
            assert_eq!(col_label_to_index(expected).unwrap(), index);
        }
    }

    #[test]
    fn label_rejects_garbage() {
        assert!(matches!(col_label_to_index(""), Err(GridError::BadLabel(_))));
        assert!(matches!(col_label_to_index("A1"), Err(GridError::BadLabel(_))));
        assert!(matches!(col_label_to_index("!"), Err(GridError::BadLabel(_))));
    }

    #[test]
    fn addr_parse_and_display() {
        let addr = CellAddr::parse("B2").unwrap();
        assert_eq!(addr, CellAddr::new(2, 2));
        assert_eq!(addr.label(), "B2");
        assert_eq!(CellAddr::parse("aa10").unwrap(), CellAddr::new(27, 10));
        assert!(CellAddr::parse("A0").is_err());
        assert!(CellAddr::parse("5").is_err());
        assert!(CellAddr::parse("A").is_err());
        assert!(CellAddr::parse("A1B").is_err());
    }

    #[test]
    fn range_normalizes_corners() {
        let r = RangeRef::new(CellAddr::parse("B2").unwrap(), CellAddr::parse("A1").unwrap());
        assert_eq!(r.to_string(), "A1:B2");
        let cells = r.cells();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[0].label(), "A1");
        assert_eq!(cells[1].label(), "B1");
        assert_eq!(cells[3].label(), "B2");
    }

    #[test]
    fn range_enumeration() {
        let r = RangeRef::new(CellAddr::parse("A1").unwrap(), CellAddr::parse("B5").unwrap());
        let cells = r.cells();
        assert_eq!(cells.len(), 10);
        assert_eq!(cells.first().unwrap().label(), "A1");
        assert_eq!(cells.last().unwrap().label(), "B5");

        let single = RangeRef::new(CellAddr::parse("C3").unwrap(), CellAddr::parse("C3").unwrap());
        assert_eq!(single.cells(), vec![CellAddr::parse("C3").unwrap()]);
    }

    #[test]
    fn range_cardinality() {
        for (a, b) in [("A1", "D7"), ("B2", "B2"), ("C1", "C9")] {
            let r = RangeRef::new(CellAddr::parse(a).unwrap(), CellAddr::parse(b).unwrap());
            assert_eq!(r.cells().len() as u32, r.n_rows() * r.n_cols());
        }
    }

    fn sample_grid(origin: &str) -> Grid {
        Grid::new(
            CellAddr::parse(origin).unwrap(),
            vec!["Name".into(), "Age".into()],
            vec![
                vec![CellContent::Text("Ann".into()), CellContent::Number(30.0)],
                vec![CellContent::Text("Bob".into()), CellContent::Number(25.0)],
                vec![CellContent::Empty, CellContent::Number(41.0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn lookup_header_data_and_outside() {
        let g = sample_grid("A1");
        assert_eq!(g.lookup(CellAddr::parse("A1").unwrap()), CellContent::Text("Name".into()));
        assert_eq!(g.lookup(CellAddr::parse("A2").unwrap()), CellContent::Text("Ann".into()));
        assert_eq!(g.lookup(CellAddr::parse("B3").unwrap()), CellContent::Number(25.0));
        assert_eq!(g.lookup(CellAddr::parse("C1").unwrap()), CellContent::Empty);
        assert_eq!(g.lookup(CellAddr::parse("A5").unwrap()), CellContent::Empty);
        assert_eq!(g.lookup(CellAddr::parse("A4").unwrap()), CellContent::Empty);
    }

    #[test]
    fn shift_moves_origin_and_preserves_content() {
        let g = sample_grid("A1");
        let moved = g.shifted(1, 1).unwrap();
        assert_eq!(moved.origin().label(), "B2");
        assert_eq!(
            moved.lookup(CellAddr::parse("B3").unwrap()),
            g.lookup(CellAddr::parse("A2").unwrap())
        );
        let back = moved.shifted(-1, -1).unwrap();
        assert_eq!(back, g);

        assert_eq!(g.shifted(0, 1).unwrap().origin().label(), "B1");
        assert_eq!(g.shifted(0, 0).unwrap(), g);
        assert_eq!(g.shifted(-1, 0), Err(GridError::OutOfSheet));
    }

    #[test]
    fn lookup_agrees_across_shift() {
        let g = sample_grid("A1");
        let moved = g.shifted(2, 3).unwrap();
        for addr in RangeRef::new(CellAddr::new(1, 1), CellAddr::new(6, 8)).cells() {
            let shifted_addr = addr.shifted(2, 3).unwrap();
            assert_eq!(g.lookup(addr), moved.lookup(shifted_addr));
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Grid::new(
            CellAddr::new(1, 1),
            vec!["A".into(), "B".into()],
            vec![vec![CellContent::Empty]],
        );
        assert_eq!(
            err,
            Err(GridError::RaggedRow {
                row: 1,
                got: 1,
                want: 2
            })
        );
    }

    #[test]
    fn binding_maps_headers_to_ranges() {
        let g = sample_grid("B2");
        let binding = ColumnBinding::from_grid(&g).unwrap();
        let (col, range) = binding.get("age").unwrap();
        assert_eq!(col, 3);
        assert_eq!(range.to_string(), "C3:C5");
        assert_eq!(binding.first_range().to_string(), "B3:B5");
        assert!(binding.get("missing").is_none());
    }

    #[test]
    fn binding_rejects_duplicate_headers() {
        let g = Grid::new(
            CellAddr::new(1, 1),
            vec!["X".into(), "x".into()],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            ColumnBinding::from_grid(&g),
            Err(GridError::DuplicateHeader(_))
        ));
    }

    #[test]
    fn cell_typing_at_load() {
        assert_eq!(CellContent::from_text("3.5"), CellContent::Number(3.5));
        assert_eq!(CellContent::from_text("-12"), CellContent::Number(-12.0));
        assert_eq!(CellContent::from_text("5th"), CellContent::Text("5th".into()));
        assert_eq!(CellContent::from_text(""), CellContent::Empty);
        assert_eq!(CellContent::from_text("  "), CellContent::Empty);
    }
}
