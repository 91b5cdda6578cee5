//! Validity checks for placement delivery arrays (PDA) and their
//! multiple-antenna variant (MAPDA).
//!
//! Conditions, for an `F x K` array over `*` and `[S]`:
//!
//! * C1: every column has the same number `Z` of stars.
//! * C2: the integers present are exactly `1..=S`.
//! * PDA C3: equal integers lie in distinct rows and columns, and any two
//!   occurrences `(j1,k1)`, `(j2,k2)` of the same integer see stars at
//!   `(j1,k2)` and `(j2,k1)`.
//! * MAPDA C3: each integer appears at most once per column.
//! * MAPDA C4: in the subarray spanned by the rows and columns that contain
//!   `s`, no row has more than `L` integer entries.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::array::{Cell, CodedArray, Entry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("antenna count must be at least 1")]
    InvalidAntennas,
    #[error("C1 violated: column {col} has {found} stars but column 1 has {expected}")]
    UnequalStarCount {
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("C2 violated: the array contains no integers")]
    NoIntegers,
    #[error("C2 violated: integer {missing} is missing from 1..={max}")]
    MissingInteger { missing: u32, max: u32 },
    #[error("C3 violated: integer {value} appears twice in one column at {first} and {second}")]
    DuplicateInColumn {
        value: u32,
        first: Cell,
        second: Cell,
    },
    #[error("C3 violated: integer {value} appears twice in one row at {first} and {second}")]
    DuplicateInRow {
        value: u32,
        first: Cell,
        second: Cell,
    },
    #[error("C3 violated: integer {value} at {first} and {second} requires a star at {cell}")]
    StarPattern {
        value: u32,
        first: Cell,
        second: Cell,
        cell: Cell,
    },
    #[error("C4 violated: row {row} of the subarray for integer {value} has {integer_entries} integer entries, more than L={limit}")]
    RowOverload {
        value: u32,
        row: usize,
        integer_entries: usize,
        limit: usize,
    },
    #[error("integer {0} does not occur in the array")]
    UnknownInteger(u32),
}

/// Parameters of a validated `(K,F,Z,S)` PDA. `g` is set when every integer
/// occurs equally often.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
    pub g: Option<usize>,
}

impl fmt::Display for PdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PDA(K={},F={},Z={},S={})",
            self.k, self.f, self.z, self.s
        )?;
        if let Some(g) = self.g {
            write!(f, " g={g}")?;
        }
        Ok(())
    }
}

/// Parameters of a validated `(L,K,F,Z,S)` MAPDA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MapdaParams {
    pub l: usize,
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
    pub g: Option<usize>,
}

impl fmt::Display for MapdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MAPDA(L={},K={},F={},Z={},S={})",
            self.l, self.k, self.f, self.z, self.s
        )?;
        if let Some(g) = self.g {
            write!(f, " g={g}")?;
        }
        Ok(())
    }
}

/// Zero-based positions of every integer, each list in row-major order.
pub(crate) fn occurrences(a: &CodedArray) -> BTreeMap<u32, Vec<(usize, usize)>> {
    let mut map: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (r, c, e) in a.cells() {
        if let Entry::Int(v) = e {
            map.entry(v).or_default().push((r, c));
        }
    }
    map
}

/// Checks C1 and returns `Z`.
fn check_stars(a: &CodedArray) -> Result<usize, ValidationError> {
    let z = a.stars_in_column(0);
    for col in 1..a.cols() {
        let found = a.stars_in_column(col);
        if found != z {
            return Err(ValidationError::UnequalStarCount {
                col: col + 1,
                expected: z,
                found,
            });
        }
    }
    Ok(z)
}

/// Checks C2 and returns `S` together with the regularity.
fn check_labels(
    occ: &BTreeMap<u32, Vec<(usize, usize)>>,
) -> Result<(usize, Option<usize>), ValidationError> {
    let max = *occ.keys().next_back().ok_or(ValidationError::NoIntegers)?;
    if let Some(missing) = (1..=max).find(|v| !occ.contains_key(v)) {
        return Err(ValidationError::MissingInteger { missing, max });
    }
    let mut counts = occ.values().map(Vec::len);
    let first = counts.next().unwrap_or(0);
    let g = counts.all(|c| c == first).then_some(first);
    Ok((max as usize, g))
}

fn check_columns(
    value: u32,
    positions: &[(usize, usize)],
    cols: usize,
) -> Result<(), ValidationError> {
    let mut seen: Vec<Option<usize>> = vec![None; cols];
    for &(r, c) in positions {
        if let Some(prev) = seen[c] {
            return Err(ValidationError::DuplicateInColumn {
                value,
                first: Cell::from_zero_based(prev, c),
                second: Cell::from_zero_based(r, c),
            });
        }
        seen[c] = Some(r);
    }
    Ok(())
}

/// Validates `a` as a PDA.
pub fn validate_pda(a: &CodedArray) -> Result<PdaParams, ValidationError> {
    let z = check_stars(a)?;
    let occ = occurrences(a);
    let (s, g) = check_labels(&occ)?;

    for (&value, positions) in &occ {
        check_columns(value, positions, a.cols())?;
        // positions are row-major, so equal rows are adjacent
        for pair in positions.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ValidationError::DuplicateInRow {
                    value,
                    first: Cell::from_zero_based(pair[0].0, pair[0].1),
                    second: Cell::from_zero_based(pair[1].0, pair[1].1),
                });
            }
        }
        for (i, &(r1, c1)) in positions.iter().enumerate() {
            for &(r2, c2) in &positions[i + 1..] {
                for (r, c) in [(r1, c2), (r2, c1)] {
                    if !a.get(r, c).is_star() {
                        return Err(ValidationError::StarPattern {
                            value,
                            first: Cell::from_zero_based(r1, c1),
                            second: Cell::from_zero_based(r2, c2),
                            cell: Cell::from_zero_based(r, c),
                        });
                    }
                }
            }
        }
    }

    Ok(PdaParams {
        k: a.cols(),
        f: a.rows(),
        z,
        s,
        g,
    })
}

/// Distinct rows and columns holding `positions`, ascending.
fn span(positions: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = positions.iter().map(|p| p.0).collect();
    let mut cols: Vec<usize> = positions.iter().map(|p| p.1).collect();
    rows.dedup();
    cols.sort_unstable();
    cols.dedup();
    (rows, cols)
}

/// Heaviest row of `P^(s)` as `(row, integer entries)`, first row on ties.
fn max_row_load(a: &CodedArray, positions: &[(usize, usize)]) -> (usize, usize) {
    let (rows, cols) = span(positions);
    rows.iter()
        .map(|&r| {
            let load = cols.iter().filter(|&&c| a.get(r, c).is_int()).count();
            (r, load)
        })
        .max_by_key(|&(r, load)| (load, std::cmp::Reverse(r)))
        .unwrap_or((0, 0))
}

/// Validates `a` as an MAPDA for `antennas` transmit antennas.
pub fn validate_mapda(a: &CodedArray, antennas: usize) -> Result<MapdaParams, ValidationError> {
    if antennas == 0 {
        return Err(ValidationError::InvalidAntennas);
    }
    let z = check_stars(a)?;
    let occ = occurrences(a);
    let (s, g) = check_labels(&occ)?;

    for (&value, positions) in &occ {
        check_columns(value, positions, a.cols())?;
    }
    for (&value, positions) in &occ {
        let (row, load) = max_row_load(a, positions);
        if load > antennas {
            return Err(ValidationError::RowOverload {
                value,
                row: row + 1,
                integer_entries: load,
                limit: antennas,
            });
        }
    }

    Ok(MapdaParams {
        l: antennas,
        k: a.cols(),
        f: a.rows(),
        z,
        s,
        g,
    })
}

/// Smallest antenna count for which C4 holds, ignoring the other conditions.
pub fn required_antennas(a: &CodedArray) -> usize {
    occurrences(a)
        .values()
        .map(|p| max_row_load(a, p).1)
        .max()
        .unwrap_or(1)
        .max(1)
}

/// The subarray `P^(s)`: rows and columns of the parent that contain `s`,
/// both in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubarrayView<'a> {
    parent: &'a CodedArray,
    value: u32,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl<'a> SubarrayView<'a> {
    pub fn parent(&self) -> &'a CodedArray {
        self.parent
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Zero-based parent row indices.
    pub fn row_indices(&self) -> &[usize] {
        &self.rows
    }

    /// Zero-based parent column indices.
    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    /// `(r'_s, r_s)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.parent.get(self.rows[row], self.cols[col])
    }

    /// Integer entries in row `row` of the view.
    pub fn row_load(&self, row: usize) -> usize {
        (0..self.cols.len())
            .filter(|&c| self.get(row, c).is_int())
            .count()
    }

    pub fn to_array(&self) -> CodedArray {
        self.parent.select(&self.rows, &self.cols)
    }
}

/// Extracts `P^(s)`.
pub fn subarray_of(a: &CodedArray, s: u32) -> Result<SubarrayView<'_>, ValidationError> {
    let positions: Vec<(usize, usize)> = a
        .cells()
        .filter(|&(_, _, e)| e == Entry::Int(s))
        .map(|(r, c, _)| (r, c))
        .collect();
    if positions.is_empty() {
        return Err(ValidationError::UnknownInteger(s));
    }
    let (rows, cols) = span(&positions);
    Ok(SubarrayView {
        parent: a,
        value: s,
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::parse_rows;
    use crate::fixtures;

    #[test]
    fn example_three_base_pda() {
        let q = fixtures::mn_pda_4_2();
        assert_eq!(
            validate_pda(&q).unwrap(),
            PdaParams {
                k: 4,
                f: 6,
                z: 3,
                s: 4,
                g: Some(3)
            }
        );
    }

    #[test]
    fn single_column_pda() {
        let a = parse_rows(&["*", "*", "1", "2", "3"]);
        assert_eq!(
            validate_pda(&a).unwrap(),
            PdaParams {
                k: 1,
                f: 5,
                z: 2,
                s: 3,
                g: Some(1)
            }
        );
    }

    #[test]
    fn repeated_integer_in_column() {
        let a = parse_rows(&["1 *", "1 *", "* 2", "* 3"]);
        assert_eq!(
            validate_pda(&a),
            Err(ValidationError::DuplicateInColumn {
                value: 1,
                first: Cell { row: 1, col: 1 },
                second: Cell { row: 2, col: 1 },
            })
        );
        assert!(matches!(
            validate_mapda(&a, 2),
            Err(ValidationError::DuplicateInColumn { value: 1, .. })
        ));
    }

    #[test]
    fn pda_star_pattern_and_row_duplicates() {
        let a = parse_rows(&["1 2", "2 1"]);
        assert!(matches!(
            validate_pda(&a),
            Err(ValidationError::StarPattern { value: 1, .. })
        ));
        let b = parse_rows(&["1 1", "* *"]);
        assert!(matches!(
            validate_pda(&b),
            Err(ValidationError::DuplicateInRow { value: 1, .. })
        ));
    }

    #[test]
    fn c1_and_c2_errors() {
        let a = parse_rows(&["* 1", "* 2"]);
        assert_eq!(
            validate_pda(&a),
            Err(ValidationError::UnequalStarCount {
                col: 2,
                expected: 2,
                found: 0
            })
        );
        let stars = parse_rows(&["* *", "* *"]);
        assert_eq!(validate_pda(&stars), Err(ValidationError::NoIntegers));
        assert_eq!(validate_mapda(&stars, 1), Err(ValidationError::NoIntegers));
        let gap = parse_rows(&["* 1", "3 *"]);
        assert_eq!(
            validate_pda(&gap),
            Err(ValidationError::MissingInteger { missing: 2, max: 3 })
        );
    }

    #[test]
    fn example_one_mapda() {
        let p = fixtures::example_one();
        assert_eq!(
            validate_mapda(&p, 3).unwrap(),
            MapdaParams {
                l: 3,
                k: 4,
                f: 4,
                z: 1,
                s: 3,
                g: Some(4)
            }
        );
        assert_eq!(
            validate_mapda(&p, 3).unwrap().to_string(),
            "MAPDA(L=3,K=4,F=4,Z=1,S=3) g=4"
        );
        assert_eq!(required_antennas(&p), 3);
    }

    #[test]
    fn example_one_rejected_with_two_antennas() {
        let p = fixtures::example_one();
        assert_eq!(
            validate_mapda(&p, 2),
            Err(ValidationError::RowOverload {
                value: 1,
                row: 1,
                integer_entries: 3,
                limit: 2
            })
        );
        assert_eq!(validate_mapda(&p, 0), Err(ValidationError::InvalidAntennas));
    }

    #[test]
    fn subarray_views() {
        let p = fixtures::example_one();
        let v = subarray_of(&p, 1).unwrap();
        assert_eq!(v.row_indices(), &[0, 1, 2, 3]);
        assert_eq!(v.col_indices(), &[0, 1, 2, 3]);
        assert_eq!(v.to_array(), p);

        let single = parse_rows(&["* 1", "2 *"]);
        let v = subarray_of(&single, 2).unwrap();
        assert_eq!(v.dims(), (1, 1));
        assert_eq!(v.get(0, 0), Entry::Int(2));
        assert_eq!(
            subarray_of(&single, 7),
            Err(ValidationError::UnknownInteger(7))
        );
    }

    #[test]
    fn irregular_reports_no_g() {
        let b = parse_rows(&["* 1 2", "1 * *"]);
        let p = validate_mapda(&b, 2).unwrap();
        assert_eq!(p.g, None);
        assert_eq!(p.to_string(), "MAPDA(L=2,K=3,F=2,Z=1,S=2)");
    }
}
