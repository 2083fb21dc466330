//! Exact integer and rational helpers: Kronecker symbols, divisor lists,
//! linear congruences, and exact linear algebra over the rationals.
//!
//! Everything here is exact. Rationals come from `num-rational`, which keeps
//! values reduced with a positive denominator, so `==` is structural.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` as a reduced [`Rational`]. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Kronecker symbol `(a / n)`, defined for every pair of integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -1;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let a8 = a.rem_euclid(8);
        if twos % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
        n >>= twos;
    }

    // Jacobi symbol for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let n8 = n % 8;
            if n8 == 3 || n8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero are undefined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn sigma1(n: u64) -> u64 {
    divisors(n).iter().sum()
}

/// Index of Γ₀(N) in SL₂(ℤ): `N · ∏_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

/// Solves `a·v ≡ b (mod m)`.
///
/// Returns `(c, d)` describing the solution class `v ≡ c (mod d)` with
/// `d = m / gcd(a, m)` and `0 <= c < d`, or `None` when there is no solution.
pub fn solve_congruence(a: i64, b: i64, m: u64) -> Option<(i64, u64)> {
    assert!(m >= 1, "modulus must be positive");
    let m = m as i128;
    let a = (a as i128).rem_euclid(m);
    let b = (b as i128).rem_euclid(m);
    let g = a.gcd(&m);
    if b % g != 0 {
        return None;
    }
    let d = m / g;
    if d == 1 {
        return Some((0, 1));
    }
    let ext = (a / g).extended_gcd(&d);
    let inv = ext.x.rem_euclid(d);
    let c = ((b / g) % d * inv).rem_euclid(d);
    Some((c as i64, d as u64))
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| int(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, t| acc + self.get(i, t) * rhs.get(t, j))
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();

        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);

            let scale = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &scale;
            }
            for x in inv[col].iter_mut() {
                *x *= &scale;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = &factor * &a[col][j];
                    a[r][j] -= t;
                    let t = &factor * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        Ok(Self::new(n, n, inv.into_iter().flatten().collect()).expect("square shape"))
    }

    /// Rank over ℚ. Rows are cleared to integers, then eliminated fraction-free.
    pub fn rank(&self) -> usize {
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect()
            })
            .collect();
        integer_rank(rows)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
///
/// Every intermediate entry is a minor of the input, and the division by the
/// previous pivot is always exact.
pub fn integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&m[rank][col] * &m[r][j] - &m[r][col] * &m[rank][j]) / &prev;
                m[r][j] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].abs();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre_brute(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        assert_eq!(kronecker(-1, 5), 1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
        assert_eq!(kronecker(3, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(4, 2), 0);
        assert_eq!(kronecker(-3, -1), -1);
    }

    #[test]
    fn kronecker_matches_legendre_on_odd_primes() {
        for p in primes_between(3, 101) {
            for a in -150..150 {
                assert_eq!(kronecker(a, p as i64), legendre_brute(a, p as i64), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(15), vec![1, 3, 5, 15]);
        assert_eq!(divisors(4), vec![1, 2, 4]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(sigma1(15), 24);
        assert_eq!(sigma1(11), 12);
        assert_eq!(gamma0_index(15), 24);
        assert_eq!(gamma0_index(8), 12);
        assert_eq!(gamma0_index(1), 1);
        assert!(is_squarefree(35));
        assert!(!is_squarefree(20));
        assert!(is_prime(97));
        assert!(!is_prime(1));
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(solve_congruence(24, 4, 10), Some((1, 5)));
        assert_eq!(solve_congruence(1, 0, 1), Some((0, 1)));
        assert_eq!(solve_congruence(2, 1, 4), None);
        assert_eq!(solve_congruence(-3, 2, 7), Some((4, 7)));
    }

    #[test]
    fn inverse_examples() {
        let id = RationalMatrix::identity(3);
        assert_eq!(id.inverse().unwrap(), id);

        let m = RationalMatrix::from_integers(2, 2, &[1, 11, 11, 1]).unwrap();
        let expected = RationalMatrix::new(
            2,
            2,
            vec![rat(-1, 120), rat(11, 120), rat(11, 120), rat(-1, 120)],
        )
        .unwrap();
        assert_eq!(m.inverse().unwrap(), expected);

        let d = RationalMatrix::from_integers(2, 2, &[2, 0, 0, 4]).unwrap();
        let expected =
            RationalMatrix::new(2, 2, vec![rat(1, 2), int(0), int(0), rat(1, 4)]).unwrap();
        assert_eq!(d.inverse().unwrap(), expected);

        let singular = RationalMatrix::from_integers(2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(singular.inverse(), Err(Error::SingularMatrix));
        let rect = RationalMatrix::from_integers(1, 2, &[1, 2]).unwrap();
        assert!(matches!(rect.inverse(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(RationalMatrix::identity(4).rank(), 4);
        assert_eq!(RationalMatrix::from_integers(2, 2, &[1, 2, 2, 4]).unwrap().rank(), 1);
        let m = RationalMatrix::new(2, 3, vec![rat(1, 2), rat(1, 3), int(1), int(3), int(2), int(6)])
            .unwrap();
        assert_eq!(m.rank(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn kronecker_multiplicative_in_numerator(a in -400i64..400, b in -400i64..400, n in 0i64..400) {
            prop_assert_eq!(kronecker(a, n) * kronecker(b, n), kronecker(a * b, n));
        }

        #[test]
        fn kronecker_multiplicative_in_denominator(a in -400i64..400, m in 1i64..200, n in 1i64..200) {
            prop_assert_eq!(kronecker(a, m) * kronecker(a, n), kronecker(a, m * n));
        }
    }

    proptest! {
        #[test]
        fn congruence_solutions_check_out(a in -60i64..60, b in -60i64..60, m in 1u64..60) {
            match solve_congruence(a, b, m) {
                Some((c, d)) => {
                    prop_assert!(c >= 0 && (c as u64) < d);
                    for t in 0..3i64 {
                        let v = c + t * d as i64;
                        prop_assert_eq!((a * v - b).rem_euclid(m as i64), 0);
                    }
                }
                None => {
                    for v in 0..m as i64 {
                        prop_assert_ne!((a * v - b).rem_euclid(m as i64), 0);
                    }
                }
            }
        }

        #[test]
        fn inverse_times_matrix_is_identity(entries in proptest::collection::vec(-9i64..10, 9)) {
            let m = RationalMatrix::from_integers(3, 3, &entries).unwrap();
            match m.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(3));
                    prop_assert_eq!(inv.mul(&m).unwrap(), RationalMatrix::identity(3));
                    prop_assert_eq!(m.rank(), 3);
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularMatrix);
                    prop_assert!(m.rank() < 3);
                }
            }
        }

        #[test]
        fn rank_ignores_row_swaps_and_scaling(
            entries in proptest::collection::vec(-5i64..6, 12),
            scale in 1i64..7,
        ) {
            let m = RationalMatrix::from_integers(3, 4, &entries).unwrap();
            let swapped = RationalMatrix::from_fn(3, 4, |i, j| {
                let src = [2, 0, 1][i];
                m.get(src, j) * int(if i == 1 { -scale } else { 1 })
            });
            prop_assert_eq!(m.rank(), swapped.rank());
        }
    }
}
