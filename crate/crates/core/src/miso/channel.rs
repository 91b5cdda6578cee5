//! Static `K x L` channel matrices.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::scalar::{solve, Scalar};
use super::SimError;

/// Largest accepted Frobenius condition number of any `L x L` minor of a
/// Gaussian draw.
pub const MAX_CONDITION: f64 = 1e8;
const MAX_DRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// `H(k,i) = 1 / (k + K + i)`, one-based; every square submatrix is
    /// nonsingular.
    Cauchy,
    /// `H(k,i) = k^(i-1)`, one-based.
    Vandermonde,
    /// i.i.d. circularly-symmetric complex normal entries.
    Gaussian,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Cauchy => "cauchy",
            ChannelKind::Vandermonde => "vandermonde",
            ChannelKind::Gaussian => "gaussian",
        })
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cauchy" => Ok(ChannelKind::Cauchy),
            "vandermonde" => Ok(ChannelKind::Vandermonde),
            "gaussian" => Ok(ChannelKind::Gaussian),
            other => Err(format!(
                "unknown channel `{other}` (expected cauchy|vandermonde|gaussian)"
            )),
        }
    }
}

/// Channel from `L` antennas to `K` users, constant over all blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T> {
    users: usize,
    antennas: usize,
    entries: Vec<T>,
    pub kind: ChannelKind,
    pub seed: u64,
}

impl<T: Scalar> ChannelMatrix<T> {
    pub fn from_entries(
        users: usize,
        antennas: usize,
        entries: Vec<T>,
        kind: ChannelKind,
        seed: u64,
    ) -> Result<Self, SimError> {
        if users == 0 || antennas == 0 || entries.len() != users * antennas {
            return Err(SimError::Degenerate { users, antennas });
        }
        Ok(ChannelMatrix {
            users,
            antennas,
            entries,
            kind,
            seed,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Channel row of one user.
    pub fn row(&self, user: usize) -> &[T] {
        &self.entries[user * self.antennas..(user + 1) * self.antennas]
    }

    pub fn get(&self, user: usize, antenna: usize) -> &T {
        &self.row(user)[antenna]
    }

    /// Square submatrix on the given users and antennas.
    pub fn minor(&self, users: &[usize], antennas: &[usize]) -> Vec<Vec<T>> {
        users
            .iter()
            .map(|&u| antennas.iter().map(|&a| self.get(u, a).clone()).collect())
            .collect()
    }
}

/// Generates the channel for `users` users and `antennas` antennas.
///
/// Gaussian channels need a field holding complex values; they are redrawn
/// from the same seeded stream until every `L x L` minor is well conditioned.
pub fn make_channel<T: Scalar>(
    kind: ChannelKind,
    users: usize,
    antennas: usize,
    seed: u64,
) -> Result<ChannelMatrix<T>, SimError> {
    if users == 0 || antennas == 0 {
        return Err(SimError::Degenerate { users, antennas });
    }
    let (k_count, l_count) = (users as i64, antennas as i64);
    let entries = match kind {
        ChannelKind::Cauchy => (1..=k_count)
            .flat_map(|k| (1..=l_count).map(move |i| T::from_ratio(1, k + k_count + i)))
            .collect(),
        ChannelKind::Vandermonde => (1..=k_count)
            .flat_map(|k| (0..l_count as u32).map(move |p| T::from_ratio(k.pow(p), 1)))
            .collect(),
        ChannelKind::Gaussian => return gaussian(users, antennas, seed),
    };
    ChannelMatrix::from_entries(users, antennas, entries, kind, seed)
}

fn gaussian<T: Scalar>(
    users: usize,
    antennas: usize,
    seed: u64,
) -> Result<ChannelMatrix<T>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let std = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..MAX_DRAWS {
        let mut entries = Vec::with_capacity(users * antennas);
        for _ in 0..users * antennas {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let z = Complex64::new(re * std, im * std);
            entries.push(T::from_complex(z).ok_or(SimError::ExactGaussian)?);
        }
        let h = ChannelMatrix::from_entries(users, antennas, entries, ChannelKind::Gaussian, seed)?;
        if worst_condition(&h) <= MAX_CONDITION {
            return Ok(h);
        }
    }
    Err(SimError::IllConditioned { draws: MAX_DRAWS })
}

/// Largest Frobenius condition number `|A|_F |A^-1|_F` over all square
/// minors of order `min(K, L)` that use the first `min(K, L)` antennas when
/// `K < L`, or every `L`-subset of users otherwise. Singular minors give
/// infinity.
pub fn worst_condition<T: Scalar>(h: &ChannelMatrix<T>) -> f64 {
    let order = h.users().min(h.antennas());
    let antennas: Vec<usize> = (0..order).collect();
    let c = |x: &T| x.to_complex();
    (0..h.users())
        .combinations(order)
        .map(|users| {
            let a: Vec<Vec<Complex64>> = h
                .minor(&users, &antennas)
                .iter()
                .map(|row| row.iter().map(c).collect())
                .collect();
            frobenius_condition(&a)
        })
        .fold(0.0, f64::max)
}

fn frobenius_condition(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let norm = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut inv_norm_sq = 0.0;
    for col in 0..n {
        let e: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(if i == col { 1.0 } else { 0.0 }, 0.0))
            .collect();
        match solve(a.to_vec(), e) {
            Some(x) => inv_norm_sq += x.iter().map(|z| z.norm_sqr()).sum::<f64>(),
            None => return f64::INFINITY,
        }
    }
    norm * inv_norm_sq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn det(m: &[Vec<BigRational>]) -> BigRational {
        // cofactor expansion, fine for the tiny orders used here
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigRational::zero();
        for j in 0..m.len() {
            let sub: Vec<Vec<BigRational>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = m[0][j].clone() * det(&sub);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn cauchy_two_by_two() {
        let h: ChannelMatrix<BigRational> = make_channel(ChannelKind::Cauchy, 2, 2, 0).unwrap();
        let r = |n, d| BigRational::from_ratio(n, d);
        assert_eq!(h.row(0), &[r(1, 4), r(1, 5)]);
        assert_eq!(h.row(1), &[r(1, 5), r(1, 6)]);
        assert_eq!(det(&h.minor(&[0, 1], &[0, 1])), r(1, 600));
    }

    #[test]
    fn cauchy_minors_nonsingular() {
        let h: ChannelMatrix<BigRational> = make_channel(ChannelKind::Cauchy, 4, 3, 0).unwrap();
        for users in (0..4).combinations(3) {
            assert!(!det(&h.minor(&users, &[0, 1, 2])).is_zero());
        }
    }

    #[test]
    fn vandermonde_rows() {
        let h: ChannelMatrix<BigRational> =
            make_channel(ChannelKind::Vandermonde, 3, 3, 0).unwrap();
        let r = |n| BigRational::from_ratio(n, 1);
        assert_eq!(h.row(2), &[r(1), r(3), r(9)]);
    }

    #[test]
    fn gaussian_is_deterministic() {
        let a: ChannelMatrix<Complex64> = make_channel(ChannelKind::Gaussian, 6, 3, 42).unwrap();
        let b: ChannelMatrix<Complex64> = make_channel(ChannelKind::Gaussian, 6, 3, 42).unwrap();
        let c: ChannelMatrix<Complex64> = make_channel(ChannelKind::Gaussian, 6, 3, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(worst_condition(&a) <= MAX_CONDITION);
    }

    #[test]
    fn exact_gaussian_rejected() {
        assert!(matches!(
            make_channel::<BigRational>(ChannelKind::Gaussian, 3, 2, 1),
            Err(SimError::ExactGaussian)
        ));
        assert!(matches!(
            make_channel::<BigRational>(ChannelKind::Cauchy, 0, 2, 1),
            Err(SimError::Degenerate { .. })
        ));
    }
}
