//! Field abstraction shared by the exact and floating-point simulators.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Relative tolerance for zero and one checks in floating-point mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

/// A channel coefficient type.
///
/// Exact scalars compare literally; float scalars compare within
/// [`FLOAT_TOLERANCE`] relative to a caller-supplied magnitude.
pub trait Scalar: Num + Clone + fmt::Debug + Send + Sync {
    const MODE: Mode;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// `None` when the field cannot represent `z` exactly.
    fn from_complex(z: Complex64) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Zero test; `scale` is the magnitude the value should be compared to.
    fn is_negligible(&self, scale: f64) -> bool;

    fn is_unit(&self) -> bool;

    fn render(&self) -> String;

    /// Vector form suited to repeated dot products.
    type Prepared: Send + Sync;

    fn prepare(v: &[Self]) -> Self::Prepared;

    /// `sum a_k b_k` together with the comparison scale `sum |a_k| |b_k|`.
    /// Exact fields report a scale of zero.
    fn dot(a: &Self::Prepared, b: &Self::Prepared) -> (Self, f64);

    /// Solves the square system `a x = b`, or `None` when `a` is singular.
    fn solve_system(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        eliminate(a, b)
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_complex(_: Complex64) -> Option<Self> {
        None
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }

    fn render(&self) -> String {
        self.to_string()
    }

    /// Integer numerators over a common denominator.
    type Prepared = (Vec<BigInt>, BigInt);

    fn prepare(v: &[Self]) -> Self::Prepared {
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        (nums, den)
    }

    fn dot(a: &Self::Prepared, b: &Self::Prepared) -> (Self, f64) {
        let sum: BigInt = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
        (BigRational::new(sum, &a.1 * &b.1), 0.0)
    }

    /// Fraction-free elimination on the integer-scaled rows.
    fn solve_system(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        let n = b.len();
        let mut m: Vec<Vec<BigInt>> = a
            .into_iter()
            .zip(b)
            .map(|(mut row, rhs)| {
                row.push(rhs);
                Self::prepare(&row).0
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, pivot);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(m[i][n].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
            }
            x[i] = acc / BigRational::from_integer(m[i][i].clone());
        }
        Some(x)
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_TOLERANCE * scale.max(f64::MIN_POSITIVE)
    }

    fn is_unit(&self) -> bool {
        (self - Complex64::one()).norm() <= FLOAT_TOLERANCE
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{:e}", self.re)
        } else {
            format!("{:e}{:+e}i", self.re, self.im)
        }
    }

    type Prepared = Vec<Complex64>;

    fn prepare(v: &[Self]) -> Self::Prepared {
        v.to_vec()
    }

    fn dot(a: &Self::Prepared, b: &Self::Prepared) -> (Self, f64) {
        a.iter()
            .zip(b)
            .fold((Complex64::zero(), 0.0), |(acc, mag), (x, y)| {
                (acc + x * y, mag + x.norm() * y.norm())
            })
    }
}

/// Solves `a x = b`. Returns `None` when `a` is singular (exactly, or within
/// tolerance for floats).
pub fn solve<T: Scalar>(a: Vec<Vec<T>>, b: Vec<T>) -> Option<Vec<T>> {
    T::solve_system(a, b)
}

/// Gaussian elimination, pivoting on the largest magnitude for floats.
fn eliminate<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let exact = T::MODE == Mode::Exact;
    let scale = if exact {
        0.0
    } else {
        a.iter()
            .flatten()
            .map(Scalar::magnitude)
            .fold(0.0_f64, f64::max)
    };
    for col in 0..n {
        let mut nonzero = (col..n).filter(|&r| !a[r][col].is_zero());
        let pivot = if exact {
            nonzero.next()?
        } else {
            nonzero.max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()))?
        };
        if a[pivot][col].is_negligible(scale * 1e-3) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / a[col][col].clone();
            let (upper, lower) = a.split_at_mut(r);
            for (target, pivot) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target = target.clone() - factor.clone() * pivot.clone();
            }
            let delta = factor * b[col].clone();
            b[r] = b[r].clone() - delta;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc = acc - a[row][c].clone() * x[c].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_solve() {
        let r = |n, d| BigRational::from_ratio(n, d);
        let a = vec![vec![r(1, 4), r(1, 5)], vec![r(1, 5), r(1, 6)]];
        let x = solve(a.clone(), vec![r(1, 1), r(0, 1)]).unwrap();
        let row0 = a[0][0].clone() * x[0].clone() + a[0][1].clone() * x[1].clone();
        let row1 = a[1][0].clone() * x[0].clone() + a[1][1].clone() * x[1].clone();
        assert!(row0.is_one());
        assert!(row1.is_zero());
    }

    #[test]
    fn fraction_free_matches_elimination() {
        let r = |n, d| BigRational::from_ratio(n, d);
        let a = vec![
            vec![r(0, 1), r(2, 3), r(1, 7)],
            vec![r(5, 2), r(-1, 4), r(3, 1)],
            vec![r(1, 9), r(4, 5), r(-2, 3)],
        ];
        let b = vec![r(1, 1), r(0, 1), r(-3, 8)];
        assert_eq!(solve(a.clone(), b.clone()), eliminate(a, b));
    }

    #[test]
    fn singular_detected() {
        let r = |n| BigRational::from_ratio(n, 1);
        assert!(solve(vec![vec![r(1), r(2)], vec![r(2), r(4)]], vec![r(1), r(0)]).is_none());
        let c = |x| Complex64::new(x, 0.0);
        assert!(solve(
            vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]],
            vec![c(1.0), c(0.0)]
        )
        .is_none());
    }

    #[test]
    fn float_tolerances() {
        assert!(Complex64::new(1.0 + 1e-12, 0.0).is_unit());
        assert!(!Complex64::new(1.0 + 1e-6, 0.0).is_unit());
        assert!(Complex64::new(1e-12, 0.0).is_negligible(1.0));
        assert!(!Complex64::new(1e-3, 0.0).is_negligible(1.0));
    }
}
