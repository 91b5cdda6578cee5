//! Star/integer arrays and their plain-text encoding.
//!
//! An array has `F` rows (packets) and `K` columns (users). Each entry is
//! either a star, meaning the packet is cached by the user, or a positive
//! integer naming the delivery block that carries it.
//!
//! The text format is:
//!
//! ```text
//! 4 4
//! * 1 2 3
//! 1 * 3 2
//! 2 3 * 1
//! 3 2 1 *
//! ```
//!
//! The first line holds `F K`, followed by `F` lines of `K` whitespace
//! separated tokens. The file must end with a newline.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A single array cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Star,
    Int(u32),
}

impl Entry {
    pub fn is_star(self) -> bool {
        matches!(self, Entry::Star)
    }

    pub fn is_int(self) -> bool {
        matches!(self, Entry::Int(_))
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Entry::Star => None,
            Entry::Int(v) => Some(v),
        }
    }

    /// Adds `offset` to an integer entry. Stars are unchanged.
    pub fn shifted(self, offset: u32) -> Entry {
        match self {
            Entry::Star => Entry::Star,
            Entry::Int(v) => Entry::Int(v + offset),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Star => f.write_str("*"),
            Entry::Int(v) => write!(f, "{v}"),
        }
    }
}

/// A one-based `(row, column)` position, used in every error witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    /// Builds the one-based cell for zero-based indices.
    pub fn from_zero_based(row: usize, col: usize) -> Cell {
        Cell {
            row: row + 1,
            col: col + 1,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("array must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} array, got {found}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("integer entries must be positive; found 0 at {0}")]
    ZeroEntry(Cell),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot concatenate: {0}")]
    Concat(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing header line `F K`")]
    MissingHeader,
    #[error(
        "malformed header `{0}`: expected two positive decimal integers separated by one space"
    )]
    Header(String),
    #[error("line {line}: invalid token `{token}`")]
    Token { line: usize, token: String },
    #[error("line {line}: expected {expected} tokens, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("input must end with a newline")]
    MissingTrailingNewline,
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// An `F x K` grid of [`Entry`] values stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodedArray {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl CodedArray {
    pub fn new(rows: usize, cols: usize, entries: Vec<Entry>) -> Result<Self, ArrayError> {
        if rows == 0 || cols == 0 {
            return Err(ArrayError::Empty { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(ArrayError::Shape {
                rows,
                cols,
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(idx) = entries.iter().position(|e| *e == Entry::Int(0)) {
            return Err(ArrayError::ZeroEntry(Cell::from_zero_based(
                idx / cols,
                idx % cols,
            )));
        }
        Ok(CodedArray {
            rows,
            cols,
            entries,
        })
    }

    /// Builds an array from nested rows.
    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self, ArrayError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(height * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(ArrayError::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        CodedArray::new(height, width, entries)
    }

    /// Number of rows, `F`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns, `K`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, row: usize, col: usize) -> Entry {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Entry] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Entry]> {
        self.entries.chunks(self.cols)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Entry> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Iterates `(row, col, entry)` in row-major order with zero-based indices.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Entry)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (i / self.cols, i % self.cols, *e))
    }

    /// Largest integer entry, or `None` for an all-star array.
    pub fn max_value(&self) -> Option<u32> {
        self.entries.iter().filter_map(|e| e.value()).max()
    }

    pub fn stars_in_column(&self, col: usize) -> usize {
        self.column(col).filter(|e| e.is_star()).count()
    }

    pub fn ints_in_row(&self, row: usize) -> usize {
        self.row(row).iter().filter(|e| e.is_int()).count()
    }

    /// Adds `offset` to every integer entry (`P + a` with `* + a = *`).
    pub fn offset(&self, offset: u32) -> CodedArray {
        CodedArray {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.shifted(offset)).collect(),
        }
    }

    /// Places `copies` replicas side by side.
    pub fn repeat_horizontal(&self, copies: usize) -> CodedArray {
        let cols = self.cols * copies;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for row in self.row_iter() {
            for _ in 0..copies {
                entries.extend_from_slice(row);
            }
        }
        CodedArray {
            rows: self.rows,
            cols,
            entries,
        }
    }

    /// Stacks arrays with equal column counts on top of each other.
    pub fn vstack(parts: &[&CodedArray]) -> Result<CodedArray, ArrayError> {
        let first = parts
            .first()
            .ok_or_else(|| ArrayError::Concat("no arrays given".into()))?;
        let cols = first.cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for part in parts {
            if part.cols != cols {
                return Err(ArrayError::Concat(format!(
                    "column counts differ ({} vs {})",
                    cols, part.cols
                )));
            }
            rows += part.rows;
            entries.extend_from_slice(&part.entries);
        }
        Ok(CodedArray {
            rows,
            cols,
            entries,
        })
    }

    /// Returns the array restricted to the given zero-based rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CodedArray {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c)))
            .collect();
        CodedArray {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Applies `f` to every integer entry.
    pub fn map_values(&self, mut f: impl FnMut(u32) -> u32) -> CodedArray {
        CodedArray {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    Entry::Star => Entry::Star,
                    Entry::Int(v) => Entry::Int(f(*v)),
                })
                .collect(),
        }
    }

    /// Serializes into the text format. Always ends with a newline.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<CodedArray, ParseError> {
        text.parse()
    }
}

impl fmt::Display for CodedArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for row in self.row_iter() {
            let mut first = true;
            for e in row {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn parse_count(tok: &str) -> Option<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok().filter(|&n: &usize| n > 0)
}

impl FromStr for CodedArray {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.is_empty() {
            return Err(ParseError::MissingHeader);
        }
        if !text.ends_with('\n') {
            return Err(ParseError::MissingTrailingNewline);
        }
        let mut lines = text.lines();
        let header = lines.next().ok_or(ParseError::MissingHeader)?;
        let (rows, cols) = header
            .split_once(' ')
            .and_then(|(a, b)| Some((parse_count(a)?, parse_count(b)?)))
            .ok_or_else(|| ParseError::Header(header.to_string()))?;

        let mut entries = Vec::with_capacity(rows * cols);
        let mut found = 0;
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            found += 1;
            if found > rows {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != cols {
                return Err(ParseError::RowLength {
                    line: line_no,
                    expected: cols,
                    found: tokens.len(),
                });
            }
            for tok in tokens {
                let entry = if tok == "*" {
                    Entry::Star
                } else {
                    let v = parse_count(tok).ok_or_else(|| ParseError::Token {
                        line: line_no,
                        token: tok.to_string(),
                    })?;
                    let v = u32::try_from(v).map_err(|_| ParseError::Token {
                        line: line_no,
                        token: tok.to_string(),
                    })?;
                    Entry::Int(v)
                };
                entries.push(entry);
            }
        }
        if found != rows {
            return Err(ParseError::RowCount {
                expected: rows,
                found,
            });
        }
        Ok(CodedArray::new(rows, cols, entries)?)
    }
}

/// Shorthand used by tests and fixtures: `"* 1 2"` per row.
pub fn parse_rows(rows: &[&str]) -> CodedArray {
    let parsed = rows
        .iter()
        .map(|r| {
            r.split_whitespace()
                .map(|t| {
                    if t == "*" {
                        Entry::Star
                    } else {
                        Entry::Int(t.parse().expect("integer token"))
                    }
                })
                .collect()
        })
        .collect();
    CodedArray::from_rows(parsed).expect("well-formed rows")
}
