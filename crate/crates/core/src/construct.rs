//! Array constructions: MN PDAs, cyclic Latin squares, the Latin-square
//! MAPDA, and the lifting of a g-regular PDA into an MAPDA that reaches the
//! sum-DoF `m(g-1) + L`.

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use num_integer::Integer;
use thiserror::Error;

use crate::array::{ArrayError, CodedArray, Entry};
use crate::validate::{occurrences, validate_pda, PdaParams, ValidationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("need 1 <= t < K, got K={users}, t={t}")]
    InvalidMemory { users: usize, t: usize },
    #[error("order must be at least 1")]
    EmptyOrder,
    #[error("need 1 <= L <= K, got K={users}, L={antennas}")]
    InvalidAntennas { users: usize, antennas: usize },
    #[error("need 1 <= m <= L, got m={m}, L={antennas}")]
    InvalidReplication { m: usize, antennas: usize },
    #[error("base array is not a PDA: {0}")]
    InvalidBase(#[from] ValidationError),
    #[error("base PDA is not regular")]
    Irregular,
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// The MN PDA with `K` users and memory parameter `t`.
///
/// Rows are the `t`-subsets of `[K]` in lexicographic order. Entry `(T, k)`
/// is a star when `k` is in `T`, otherwise the lexicographic rank of
/// `T ∪ {k}` among the `(t+1)`-subsets.
pub fn mn_pda(users: usize, t: usize) -> Result<CodedArray, ConstructionError> {
    if t == 0 || t >= users {
        return Err(ConstructionError::InvalidMemory { users, t });
    }
    let rank: HashMap<Vec<usize>, u32> = (0..users)
        .combinations(t + 1)
        .enumerate()
        .map(|(i, set)| (set, i as u32 + 1))
        .collect();

    let mut entries = Vec::new();
    for subset in (0..users).combinations(t) {
        for k in 0..users {
            if subset.contains(&k) {
                entries.push(Entry::Star);
            } else {
                let mut union = subset.clone();
                union.push(k);
                union.sort_unstable();
                entries.push(Entry::Int(rank[&union]));
            }
        }
    }
    let rows = entries.len() / users;
    Ok(CodedArray::new(rows, users, entries)?)
}

/// The cyclic Latin square `L(i,j) = ((i + j - 2) mod n) + 1`.
pub fn latin_square(order: usize) -> Result<CodedArray, ConstructionError> {
    if order == 0 {
        return Err(ConstructionError::EmptyOrder);
    }
    let entries = (0..order)
        .flat_map(|i| (0..order).map(move |j| Entry::Int(((i + j) % order) as u32 + 1)))
        .collect();
    Ok(CodedArray::new(order, order, entries)?)
}

/// Cyclic Latin square of order `K` with every value above `L` starred.
///
/// The result has `Z = K - L` stars per column and `S = L` integers, each
/// occurring `K` times, so its sum-DoF is `K`.
pub fn latin_mapda(users: usize, antennas: usize) -> Result<CodedArray, ConstructionError> {
    if antennas == 0 || antennas > users {
        return Err(ConstructionError::InvalidAntennas { users, antennas });
    }
    let limit = antennas as u32;
    let square = latin_square(users)?;
    let entries = square
        .entries()
        .iter()
        .map(|&e| match e {
            Entry::Int(v) if v > limit => Entry::Star,
            other => other,
        })
        .collect();
    Ok(CodedArray::new(users, users, entries)?)
}

/// Cyclically right-shifts the integers of a row by `shift` positions,
/// leaving stars in place.
pub fn right_shift_row(row: &[Entry], shift: usize) -> Vec<Entry> {
    let slots: Vec<usize> = (0..row.len()).filter(|&c| row[c].is_int()).collect();
    let p = slots.len();
    let mut out = row.to_vec();
    if p == 0 {
        return out;
    }
    let shift = shift % p;
    for (j, &slot) in slots.iter().enumerate() {
        out[slot] = row[slots[(j + p - shift) % p]];
    }
    out
}

/// Shift for the `i`-th (0-based) replica of `row` inside its block: `i + 1`
/// while that stays below the row's integer count `p`, then cycling through
/// `1..p` so that no replica returns its integers to their own columns.
pub fn block_shift(row: &[Entry], i: usize) -> usize {
    let p = row.iter().filter(|e| e.is_int()).count();
    if p <= 1 {
        i + 1
    } else {
        i % (p - 1) + 1
    }
}

/// Derived quantities for lifting a `g-(K1,F1,Z1,S1)` PDA with `m`
/// horizontal copies onto `L` antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftParams {
    pub base: PdaParams,
    pub m: usize,
    pub antennas: usize,
    pub g: usize,
    /// `m / gcd(m, L - m)`, or 1 when `L = m`.
    pub l: usize,
    /// 1 when `L = m`, otherwise `g`.
    pub sgn_g: usize,
    /// `(sgn_g + (L - m)/m) l`.
    pub alpha: usize,
}

impl LiftParams {
    pub fn new(base: PdaParams, m: usize, antennas: usize) -> Result<Self, ConstructionError> {
        if m == 0 || m > antennas {
            return Err(ConstructionError::InvalidReplication { m, antennas });
        }
        let g = base.g.ok_or(ConstructionError::Irregular)?;
        let (l, sgn_g) = if m == antennas {
            (1, 1)
        } else {
            (m / m.gcd(&(antennas - m)), g)
        };
        let alpha = sgn_g * l + l * (antennas - m) / m;
        Ok(LiftParams {
            base,
            m,
            antennas,
            g,
            l,
            sgn_g,
            alpha,
        })
    }

    /// Rows per block `A_j`, `l(L - m)/m`.
    pub fn block_rows(&self) -> usize {
        self.l * (self.antennas - self.m) / self.m
    }

    /// Occurrences of every integer in the lifted array, `m(g-1) + L`.
    pub fn target_dof(&self) -> usize {
        self.m * (self.g - 1) + self.antennas
    }

    /// `(K, F, Z, S)` of the lifted array.
    pub fn lifted_dims(&self) -> (usize, usize, usize, usize) {
        (
            self.m * self.base.k,
            self.alpha * self.base.f,
            self.alpha * self.base.z,
            self.sgn_g * self.l * self.base.s,
        )
    }
}

/// Intermediate arrays of an `m < L` lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionStages {
    /// `gl` shifted copies of `Q0`.
    pub p1: CodedArray,
    /// Each row of `Q` repeated `l(L-m)/m` times.
    pub u_prime: CodedArray,
    /// `U'` with the `i`-th row of each block right-shifted by [`block_shift`].
    pub u: CodedArray,
    /// `m` horizontal copies of `U`.
    pub u0: CodedArray,
    /// `U0` after relabelling.
    pub p2: CodedArray,
}

/// All stages of a lift, kept for inspection and auditing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftTrace {
    pub params: LiftParams,
    pub q: CodedArray,
    pub q0: CodedArray,
    /// `None` when `m = L`; the result is then `Q0` itself.
    pub extension: Option<ExtensionStages>,
    pub p: CodedArray,
}

impl LiftTrace {
    /// Stage arrays paired with their file suffix.
    pub fn stages(&self) -> Vec<(&'static str, &CodedArray)> {
        let mut out = vec![("q0", &self.q0)];
        if let Some(ext) = &self.extension {
            out.extend([
                ("p1", &ext.p1),
                ("u", &ext.u),
                ("u0", &ext.u0),
                ("p2", &ext.p2),
            ]);
        }
        out.push(("p", &self.p));
        out
    }

    /// Rebuilds a trace from the stage arrays written by [`LiftTrace::stages`].
    ///
    /// `Q` is recovered from the leftmost columns of `Q0`. Without `U`, the
    /// lift is taken to be the `m = L` case.
    pub fn from_stages(
        q0: CodedArray,
        p1: Option<CodedArray>,
        u: Option<CodedArray>,
        u0: Option<CodedArray>,
        p2: Option<CodedArray>,
        p: CodedArray,
        antennas: usize,
    ) -> Result<LiftTrace, ConstructionError> {
        let m = u
            .as_ref()
            .and_then(|u| q0.cols().checked_div(u.cols()))
            .unwrap_or(antennas);
        let base_cols = q0.cols() / m.max(1);
        let q = q0.select(
            &(0..q0.rows()).collect::<Vec<_>>(),
            &(0..base_cols).collect::<Vec<_>>(),
        );
        let params = LiftParams::new(validate_pda(&q)?, m, antennas)?;
        let extension = match (p1, u, u0, p2) {
            (Some(p1), Some(u), Some(u0), Some(p2)) => Some(ExtensionStages {
                p1,
                u_prime: replicate_rows(&q, params.block_rows()),
                u,
                u0,
                p2,
            }),
            _ => None,
        };
        Ok(LiftTrace {
            params,
            q,
            q0,
            extension,
            p,
        })
    }
}

fn replicate_rows(q: &CodedArray, times: usize) -> CodedArray {
    let rows = q
        .row_iter()
        .flat_map(|row| std::iter::repeat_n(row.to_vec(), times))
        .collect();
    CodedArray::from_rows(rows).expect("non-empty replication")
}

/// Lifts a g-regular PDA into an `(L, mK1, αF1, αZ1, sgn(g) l S1)` MAPDA.
///
/// With `m = L` the result is `Q0`, the `m` horizontal copies of `q`.
/// Otherwise `P = [P1; P2]`, where `P1` stacks `Q0 + j S1` for
/// `j in 0..gl` and `P2` is derived from row-shifted replicas of `q`.
///
/// The output is an MAPDA only when `m(g-1) + L <= mK1`; a block cannot
/// serve more users than there are columns.
pub fn lift_regular_pda(
    q: &CodedArray,
    m: usize,
    antennas: usize,
) -> Result<LiftTrace, ConstructionError> {
    let base = validate_pda(q)?;
    let params = LiftParams::new(base, m, antennas)?;
    let q0 = q.repeat_horizontal(m);

    if m == antennas {
        return Ok(LiftTrace {
            params,
            q: q.clone(),
            p: q0.clone(),
            q0,
            extension: None,
        });
    }

    let s1 = base.s as u32;
    let copies = params.g * params.l;
    let shifted: Vec<CodedArray> = (0..copies).map(|j| q0.offset(j as u32 * s1)).collect();
    let p1 = CodedArray::vstack(&shifted.iter().collect::<Vec<_>>())?;

    let block_rows = params.block_rows();
    let u_prime = replicate_rows(q, block_rows);
    let u_rows = u_prime
        .row_iter()
        .enumerate()
        .map(|(idx, row)| right_shift_row(row, block_shift(row, idx % block_rows)))
        .collect();
    let u = CodedArray::from_rows(u_rows)?;
    let u0 = u.repeat_horizontal(m);

    let run = antennas - m;
    let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
    let p2 = u0.map_values(|v| {
        let count = seen.entry(v).or_insert(0);
        let label = v + (*count / run) as u32 * s1;
        *count += 1;
        label
    });

    let p = CodedArray::vstack(&[&p1, &p2])?;
    Ok(LiftTrace {
        params,
        q: q.clone(),
        q0,
        extension: Some(ExtensionStages {
            p1,
            u_prime,
            u,
            u0,
            p2,
        }),
        p,
    })
}

/// Lifts the MN PDA with `K1` users and parameter `t1`.
pub fn mn_mapda(
    base_users: usize,
    t: usize,
    m: usize,
    antennas: usize,
) -> Result<LiftTrace, ConstructionError> {
    lift_regular_pda(&mn_pda(base_users, t)?, m, antennas)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftAuditError {
    #[error("integer {value} occupies {found} distinct columns of P, expected {expected}")]
    ColumnCount {
        value: u32,
        expected: usize,
        found: usize,
    },
    #[error("row {row} of P1^({value}) has {found} stars, expected {expected}")]
    SubarrayStars {
        value: u32,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} of P2 holds {value} but no row of P1 holding {value} has the same star positions")]
    UnmatchedStars { value: u32, row: usize },
    #[error("trace is inconsistent: {0}")]
    Inconsistent(String),
}

/// Counts verified by [`audit_lift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftAudit {
    /// Distinct columns every integer was found in, `m(g-1) + L`.
    pub columns_per_integer: usize,
    pub integers: usize,
    /// Rows of `P1^(s)` checked, summed over `s`.
    pub p1_rows_checked: usize,
    /// `(row, integer)` pairs of `P2` matched against `P1`.
    pub p2_rows_checked: usize,
}

/// Checks the three structural statements that make the lift an MAPDA:
///
/// 1. every integer of `P` lies in `m(g-1) + L` distinct columns;
/// 2. every row of `P1^(s)` has exactly `m(g-1)` stars;
/// 3. every row of `P2` holding `s` has the star pattern of some row of
///    `P1` holding `s`.
///
/// Statements 2 and 3 are vacuous when `m = L`.
pub fn audit_lift(trace: &LiftTrace) -> Result<LiftAudit, LiftAuditError> {
    let params = &trace.params;
    let expected_cols = params.target_dof();

    let occ = occurrences(&trace.p);
    for (&value, positions) in &occ {
        let cols: HashSet<usize> = positions.iter().map(|p| p.1).collect();
        if cols.len() != expected_cols {
            return Err(LiftAuditError::ColumnCount {
                value,
                expected: expected_cols,
                found: cols.len(),
            });
        }
    }

    let mut audit = LiftAudit {
        columns_per_integer: expected_cols,
        integers: occ.len(),
        p1_rows_checked: 0,
        p2_rows_checked: 0,
    };
    let Some(ext) = &trace.extension else {
        return Ok(audit);
    };
    if ext.p1.cols() != ext.p2.cols() {
        return Err(LiftAuditError::Inconsistent(
            "P1 and P2 have different widths".into(),
        ));
    }

    let expected_stars = params.m * (params.g - 1);
    let mut patterns: HashMap<u32, HashSet<Vec<bool>>> = HashMap::new();
    for (&value, positions) in &occurrences(&ext.p1) {
        let mut cols: Vec<usize> = positions.iter().map(|p| p.1).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut rows: Vec<usize> = positions.iter().map(|p| p.0).collect();
        rows.dedup();
        for &row in &rows {
            let found = cols
                .iter()
                .filter(|&&c| ext.p1.get(row, c).is_star())
                .count();
            if found != expected_stars {
                return Err(LiftAuditError::SubarrayStars {
                    value,
                    row: row + 1,
                    expected: expected_stars,
                    found,
                });
            }
            audit.p1_rows_checked += 1;
            patterns
                .entry(value)
                .or_default()
                .insert(ext.p1.row(row).iter().map(|e| e.is_star()).collect());
        }
    }

    for (row_idx, row) in ext.p2.row_iter().enumerate() {
        let pattern: Vec<bool> = row.iter().map(|e| e.is_star()).collect();
        let mut values: Vec<u32> = row.iter().filter_map(|e| e.value()).collect();
        values.sort_unstable();
        values.dedup();
        for value in values {
            let matched = patterns
                .get(&value)
                .is_some_and(|set| set.contains(&pattern));
            if !matched {
                return Err(LiftAuditError::UnmatchedStars {
                    value,
                    row: row_idx + 1,
                });
            }
            audit.p2_rows_checked += 1;
        }
    }
    Ok(audit)
}
