//! Subpacketization of schemes reaching sum-DoF `t + L` with `K` users,
//! `L` antennas and memory ratio `t/K`.
//!
//! | tag    | applies when                   | subpacketization                      |
//! |--------|--------------------------------|---------------------------------------|
//! | `nma`  | always                         | `C(K,t) t! (K-t-1)! / (K-t-L)!`       |
//! | `sch`  | always                         | `C(K,t) C(K-t-1, L-1)`                |
//! | `ep`   | `L | K` and `L | t`            | `C(K/L, t/L)`                         |
//! | `spset`| `t <= L`                       | `K (t+L) / gcd(K,t,L)^2`              |
//! | `mb`   | `(t+1) | (t+L)`                | `C(K,t)`                              |
//! | `thm5` | `m <= L`, `m | K`, `m | t`     | `alpha C(K/m, t/m)`                   |
//!
//! `nma` and `sch` are only defined when `t + L <= K`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Nma,
    Sch,
    Ep,
    Spset,
    Mb,
    Thm5,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Nma,
        Scheme::Sch,
        Scheme::Ep,
        Scheme::Spset,
        Scheme::Mb,
        Scheme::Thm5,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Nma => "nma",
            Scheme::Sch => "sch",
            Scheme::Ep => "ep",
            Scheme::Spset => "spset",
            Scheme::Mb => "mb",
            Scheme::Thm5 => "thm5",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subpacketization {
    Integer(BigUint),
    /// Only `spset` can be non-integral.
    Rational(BigRational),
}

impl fmt::Display for Subpacketization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subpacketization::Integer(n) => write!(f, "{n}"),
            Subpacketization::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// `Ok(value)` when the scheme's limitation holds, otherwise the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub scheme: Scheme,
    pub value: Result<Subpacketization, String>,
    /// Free-form remark, e.g. the replication factor used for `thm5`.
    pub note: Option<String>,
}

impl ComparisonRow {
    pub fn integer(&self) -> Option<&BigUint> {
        match &self.value {
            Ok(Subpacketization::Integer(n)) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for ComparisonRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Ok(v) => write!(f, "{} = {}", self.scheme, v)?,
            Err(reason) => write!(f, "{} inapplicable ({})", self.scheme, reason)?,
        }
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("t must lie in 1..={users}, got {t}")]
    InvalidMemory { users: usize, t: usize },
    #[error("need K >= 1 and L >= 1")]
    Degenerate,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `alpha C(K/m, t/m)` for the lifted MN construction, or why it does not
/// apply.
pub fn thm5_subpacketization(
    users: usize,
    antennas: usize,
    t: usize,
    m: usize,
) -> Result<BigUint, String> {
    if m == 0 || m > antennas {
        return Err(format!("need 1 <= m <= L, got m={m}"));
    }
    if !users.is_multiple_of(m) || !t.is_multiple_of(m) {
        return Err(format!("m={m} must divide K and t"));
    }
    let (base_users, base_t) = (users / m, t / m);
    if base_t >= base_users {
        return Err("needs t < K".into());
    }
    let g = base_t + 1;
    let (l, sgn_g) = if m == antennas {
        (1, 1)
    } else {
        (m / m.gcd(&(antennas - m)), g)
    };
    let alpha = sgn_g * l + l * (antennas - m) / m;
    Ok(binomial(base_users, base_t) * alpha)
}

/// Evaluates every scheme at `(K, L, t)`.
///
/// Without `m`, `thm5` uses the admissible replication factor with the
/// smallest subpacketization.
pub fn compare_subpacketization(
    users: usize,
    antennas: usize,
    t: usize,
    m: Option<usize>,
) -> Result<Vec<ComparisonRow>, CompareError> {
    if users == 0 || antennas == 0 {
        return Err(CompareError::Degenerate);
    }
    if t == 0 || t > users {
        return Err(CompareError::InvalidMemory { users, t });
    }
    let (k, l) = (users, antennas);
    let int = |n: BigUint| Ok(Subpacketization::Integer(n));
    let feasible = t + l <= k;

    let mut rows = Vec::with_capacity(Scheme::ALL.len());
    let row = |scheme, value, note| ComparisonRow {
        scheme,
        value,
        note,
    };

    rows.push(row(
        Scheme::Nma,
        if feasible {
            int(binomial(k, t) * factorial(t) * factorial(k - t - 1) / factorial(k - t - l))
        } else {
            Err("needs t + L <= K".into())
        },
        None,
    ));
    rows.push(row(
        Scheme::Sch,
        if feasible {
            int(binomial(k, t) * binomial(k - t - 1, l - 1))
        } else {
            Err("needs t + L <= K".into())
        },
        None,
    ));
    rows.push(row(
        Scheme::Ep,
        if k.is_multiple_of(l) && t.is_multiple_of(l) {
            int(binomial(k / l, t / l))
        } else {
            Err("needs K/L and t/L integral".into())
        },
        None,
    ));

    let (spset, spset_note) = if t <= l {
        let g = k.gcd(&t).gcd(&l);
        let value = BigRational::new(BigInt::from(k * (t + l)), BigInt::from(g * g));
        if value.is_integer() {
            (
                int(value.to_integer().to_biguint().expect("positive")),
                None,
            )
        } else {
            (
                Ok(Subpacketization::Rational(value)),
                Some("warning: non-integral".to_string()),
            )
        }
    } else {
        (Err("needs t <= L".into()), None)
    };
    rows.push(row(Scheme::Spset, spset, spset_note));

    rows.push(row(
        Scheme::Mb,
        if (t + l).is_multiple_of(t + 1) {
            int(binomial(k, t))
        } else {
            Err("needs (t+L)/(t+1) integral".into())
        },
        None,
    ));

    let thm5 = match m {
        Some(m) => thm5_subpacketization(k, l, t, m).map(|v| (m, v)),
        None => (1..=l)
            .filter_map(|m| thm5_subpacketization(k, l, t, m).ok().map(|v| (m, v)))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .ok_or_else(|| "no m <= L divides both K and t".to_string()),
    };
    rows.push(match thm5 {
        Ok((m, v)) => row(Scheme::Thm5, int(v), Some(format!("m={m}"))),
        Err(reason) => row(Scheme::Thm5, Err(reason), None),
    });
    Ok(rows)
}

/// CSV lines `t,scheme,subpacketization` for every `t` in `1..=K`, listing
/// only applicable schemes.
pub fn sweep_csv(users: usize, antennas: usize, m: Option<usize>) -> Result<String, CompareError> {
    let mut out = String::from("t,scheme,subpacketization\n");
    for t in 1..=users {
        for row in compare_subpacketization(users, antennas, t, m)? {
            if let Ok(value) = &row.value {
                out.push_str(&format!("{t},{},{value}\n", row.scheme));
            }
        }
    }
    Ok(out)
}

/// Convenience accessor for the value of a given scheme.
pub fn value_of(rows: &[ComparisonRow], scheme: Scheme) -> Option<u128> {
    rows.iter()
        .find(|r| r.scheme == scheme)
        .and_then(ComparisonRow::integer)
        .and_then(ToPrimitive::to_u128)
}
