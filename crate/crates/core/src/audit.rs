//! Sum-DoF arithmetic and the star-counting audit behind the
//! `K(F-Z)/S <= KZ/F + L` upper bound.
//!
//! For each integer `s` with `r_s` occurrences, the occurrence in row `f_i`
//! sees `r_s - r_{s,i}` stars inside `P^(s)`, where `r_{s,i}` counts the
//! integer entries of that row of `P^(s)`. Summed over all occurrences this
//! gives `M`. A row of `P` holding `r'_j` integers can lend at most
//! `r'_j (K - r'_j)` star uses, giving the bound `M'`. From `M <= M'` and
//! convexity one obtains `S >= nF / (FL + KF - n)` with `n = K(F - Z)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::array::CodedArray;
use crate::validate::{occurrences, validate_mapda, MapdaParams, ValidationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("array is not a valid MAPDA: {0}")]
    Invalid(#[from] ValidationError),
    #[error("integer count mismatch: n = {n}, sum r_s = {by_integer}, sum r'_j = {by_row}")]
    CountMismatch {
        n: usize,
        by_integer: usize,
        by_row: usize,
    },
    #[error("star usage {used} exceeds the row bound {bound}")]
    StarUsage { used: usize, bound: usize },
    #[error("block count S = {s} is below the lower bound {lower_bound}")]
    BlockCount {
        s: usize,
        lower_bound: Box<BigRational>,
    },
    #[error("sum-DoF {achieved} exceeds KZ/F + L = {bound}")]
    DofBound {
        achieved: Box<BigRational>,
        bound: Box<BigRational>,
    },
}

pub(crate) fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact sum-DoF `K(F-Z)/S`.
pub fn sum_dof(p: &MapdaParams) -> BigRational {
    ratio(p.k * (p.f - p.z), p.s)
}

/// Upper bound `KZ/F + L`.
pub fn dof_upper_bound(p: &MapdaParams) -> BigRational {
    ratio(p.k * p.z, p.f) + ratio(p.l, 1)
}

/// Result of [`star_audit`]. Integer-indexed vectors are indexed by `s - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAudit {
    pub params: MapdaParams,
    /// Total integer entries.
    pub n: usize,
    /// `r_s`.
    pub occurrences: Vec<usize>,
    /// `r_{s,i}` for every occurrence of `s`, in row-major order.
    pub row_loads: Vec<Vec<usize>>,
    /// `r'_j`: integer entries in each row of the whole array.
    pub row_integers: Vec<usize>,
    /// `M`.
    pub stars_used: usize,
    /// `M'`.
    pub star_bound: usize,
    /// `nF / (FL + KF - n)`.
    pub s_lower_bound: BigRational,
    pub achieved_dof: BigRational,
    pub dof_bound: BigRational,
}

impl StarAudit {
    /// Whether the achieved sum-DoF equals `KZ/F + L`.
    pub fn meets_bound(&self) -> bool {
        self.achieved_dof == self.dof_bound
    }
}

/// Runs the counting audit on a MAPDA.
pub fn star_audit(a: &CodedArray, antennas: usize) -> Result<StarAudit, AuditError> {
    let params = validate_mapda(a, antennas)?;
    let occ = occurrences(a);
    let (f, k) = (a.rows(), a.cols());

    let row_integers: Vec<usize> = (0..f).map(|r| a.ints_in_row(r)).collect();
    let n: usize = row_integers.iter().sum();

    let mut occurrences_per_value = Vec::with_capacity(occ.len());
    let mut row_loads = Vec::with_capacity(occ.len());
    let mut stars_used = 0;
    for positions in occ.values() {
        let mut cols: Vec<usize> = positions.iter().map(|p| p.1).collect();
        cols.sort_unstable();
        let r_s = positions.len();
        let loads: Vec<usize> = positions
            .iter()
            .map(|&(row, _)| cols.iter().filter(|&&c| a.get(row, c).is_int()).count())
            .collect();
        stars_used += loads.iter().map(|&load| r_s - load).sum::<usize>();
        occurrences_per_value.push(r_s);
        row_loads.push(loads);
    }

    let by_integer: usize = occurrences_per_value.iter().sum();
    if by_integer != n || n != k * (f - params.z) {
        return Err(AuditError::CountMismatch {
            n: k * (f - params.z),
            by_integer,
            by_row: n,
        });
    }

    let star_bound: usize = row_integers.iter().map(|&r| r * (k - r)).sum();
    if stars_used > star_bound {
        return Err(AuditError::StarUsage {
            used: stars_used,
            bound: star_bound,
        });
    }

    let s_lower_bound = ratio(n * f, f * antennas + k * f - n);
    if ratio(params.s, 1) < s_lower_bound {
        return Err(AuditError::BlockCount {
            s: params.s,
            lower_bound: Box::new(s_lower_bound),
        });
    }

    let achieved_dof = sum_dof(&params);
    let dof_bound = dof_upper_bound(&params);
    if achieved_dof > dof_bound {
        return Err(AuditError::DofBound {
            achieved: Box::new(achieved_dof),
            bound: Box::new(dof_bound),
        });
    }

    Ok(StarAudit {
        params,
        n,
        occurrences: occurrences_per_value,
        row_loads,
        row_integers,
        stars_used,
        star_bound,
        s_lower_bound,
        achieved_dof,
        dof_bound,
    })
}
