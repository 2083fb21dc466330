//! Exact q-expansions of eta-quotients at `i∞`, and the Sturm bound.
//!
//! `η(δz)^r = q^{δr/24} ∏_{n≥1} (1 - q^{δn})^r`. The product part has integer
//! coefficients; the prefactors of a quotient combine into `q^{Σδr_δ/24}`,
//! which is an integral power exactly when the first GHN congruence holds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::numthy::gamma0_index;

/// Series length above which truncated products are split across threads.
const PARALLEL_THRESHOLD: usize = 384;

/// A truncated Laurent series `Σ_{n0 ≤ n < precision} c_n q^n` with integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    leading_exponent: i64,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// Builds `q^{n0} · Σ coeffs[i] q^i`, shifting past leading zeros unless
    /// every coefficient is zero.
    pub fn new(leading_exponent: i64, coeffs: Vec<BigInt>) -> Self {
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) | None => Self {
                leading_exponent,
                coeffs,
            },
            Some(shift) => Self {
                leading_exponent: leading_exponent + shift as i64,
                coeffs: coeffs[shift..].to_vec(),
            },
        }
    }

    pub fn one(precision: i64) -> Self {
        let len = precision.max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        if len > 0 {
            coeffs[0] = BigInt::one();
        }
        Self::new(0, coeffs)
    }

    pub fn leading_exponent(&self) -> i64 {
        self.leading_exponent
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exclusive upper bound on the known exponents.
    pub fn precision(&self) -> i64 {
        self.leading_exponent + self.coeffs.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the precision.
    pub fn coefficient(&self, n: i64) -> Option<BigInt> {
        if n >= self.precision() {
            None
        } else if n < self.leading_exponent {
            Some(BigInt::zero())
        } else {
            Some(self.coeffs[(n - self.leading_exponent) as usize].clone())
        }
    }

    /// Coefficients of `q^start, …, q^{end-1}`.
    pub fn coefficient_range(&self, start: i64, end: i64) -> Option<Vec<BigInt>> {
        (start..end).map(|n| self.coefficient(n)).collect()
    }

    pub fn truncate(&self, precision: i64) -> Self {
        let keep = (precision - self.leading_exponent).clamp(0, self.coeffs.len() as i64) as usize;
        Self::new(self.leading_exponent, self.coeffs[..keep].to_vec())
    }

    /// Product, truncated to the precision both factors determine.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n0 = self.leading_exponent + other.leading_exponent;
        let len = self.coeffs.len().min(other.coeffs.len());
        QSeries::new(n0, truncated_mul(&self.coeffs, &other.coeffs, len))
    }
}

impl fmt::Display for QSeries {
    /// `q^{n0} * (c0 + c1*q + c2*q^2 + ...)`, every coefficient written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{{{}}} * (", self.leading_exponent)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                match i {
                    1 => write!(f, "{mag}*q")?,
                    _ => write!(f, "{mag}*q^{i}")?,
                }
            }
        }
        f.write_str(")")
    }
}

impl FromStr for QSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a q-series: `{s}`"));
        let s = s.trim();
        let rest = s.strip_prefix("q^{").ok_or_else(bad)?;
        let (n0, rest) = rest.split_once('}').ok_or_else(bad)?;
        let n0: i64 = n0.trim().parse().map_err(|_| bad())?;
        let body = rest
            .trim()
            .strip_prefix('*')
            .map(str::trim)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut coeffs: Vec<BigInt> = Vec::new();
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let mut sign = BigInt::one();
        for (pos, tok) in tokens.iter().enumerate() {
            match *tok {
                "+" => sign = BigInt::one(),
                "-" => sign = -BigInt::one(),
                term => {
                    let (c, power) = match term.split_once('*') {
                        None => (term, 0usize),
                        Some((c, "q")) => (c, 1),
                        Some((c, p)) => (c, p.strip_prefix("q^").ok_or_else(bad)?.parse().map_err(|_| bad())?),
                    };
                    let c: BigInt = c.parse().map_err(|_| bad())?;
                    if power != coeffs.len() || (pos == 0) != (power == 0) {
                        return Err(bad());
                    }
                    coeffs.push(&sign * c);
                    sign = BigInt::one();
                }
            }
        }
        Ok(QSeries {
            leading_exponent: n0,
            coeffs,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    n0: i64,
    coeffs: Vec<serde_json::Number>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| serde_json::Number::from_str(&c.to_string()).map_err(serde::ser::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        QSeriesJson {
            n0: self.leading_exponent,
            coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = QSeriesJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|n| n.to_string().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(QSeries {
            leading_exponent: raw.n0,
            coeffs,
        })
    }
}

/// `(a · b) mod q^len` on dense coefficient vectors.
pub fn truncated_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let len = len.min(a.len() + b.len());
    let coeff = |n: usize| {
        let lo = n.saturating_sub(b.len().saturating_sub(1));
        let hi = n.min(a.len().saturating_sub(1));
        let mut acc = BigInt::zero();
        for i in lo..=hi {
            if !a[i].is_zero() && !b[n - i].is_zero() {
                acc += &a[i] * &b[n - i];
            }
        }
        acc
    };
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero(); len];
    }
    if len >= PARALLEL_THRESHOLD {
        (0..len).into_par_iter().map(coeff).collect()
    } else {
        (0..len).map(coeff).collect()
    }
}

/// Inverse of a series with constant term ±1, modulo `q^len`.
pub fn truncated_inverse(a: &[BigInt], len: usize) -> Vec<BigInt> {
    assert!(
        !a.is_empty() && a[0].abs().is_one(),
        "series inversion needs a unit constant term"
    );
    let unit = a[0].clone();
    let mut inv: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            inv.push(unit.clone());
            continue;
        }
        let mut acc = BigInt::zero();
        for i in 1..=n.min(a.len() - 1) {
            if !a[i].is_zero() {
                acc += &a[i] * &inv[n - i];
            }
        }
        // a0 * inv_n = -acc, and a0 = a0^{-1}.
        inv.push(-acc * &unit);
    }
    inv
}

/// `a^e mod q^len` by repeated squaring.
pub fn truncated_pow(a: &[BigInt], e: u64, len: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::zero(); len];
    if len > 0 {
        result[0] = BigInt::one();
    }
    let mut base: Vec<BigInt> = a.iter().take(len).cloned().collect();
    base.resize(len, BigInt::zero());
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_mul(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = truncated_mul(&base, &base, len);
        }
    }
    result
}

/// `∏_{n≥1} (1 - q^{δn}) mod q^len`, multiplying out one factor at a time.
pub fn euler_product_dense(delta: u64, len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    let step = delta as usize;
    let mut m = step;
    while m < len {
        for i in (m..len).rev() {
            if !c[i - m].is_zero() {
                let t = c[i - m].clone();
                c[i] -= t;
            }
        }
        m += step;
    }
    c
}

/// Same product via Euler's pentagonal number theorem:
/// `Σ_{j ∈ ℤ} (-1)^j q^{δ j(3j-1)/2}`.
pub fn euler_product_pentagonal(delta: u64, len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    let delta = delta as usize;
    for j in 1usize.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let first = delta * (j * (3 * j - 1) / 2);
        let second = delta * (j * (3 * j + 1) / 2);
        if first >= len {
            break;
        }
        c[first] = BigInt::from(sign);
        if second < len {
            c[second] = BigInt::from(sign);
        }
    }
    c
}

/// `∏_{n≥1} (1 - q^{δn})^r` through exponent `precision - 1`.
///
/// This is `η(δz)^r` without its fractional prefactor `q^{δr/24}`.
pub fn eta_power(delta: u64, r: i64, precision: i64) -> QSeries {
    assert!(delta >= 1, "delta must be positive");
    let len = precision.max(0) as usize;
    QSeries::new(0, eta_power_coeffs(delta, r, len))
}

fn eta_power_coeffs(delta: u64, r: i64, len: usize) -> Vec<BigInt> {
    let base = euler_product_pentagonal(delta, len);
    let positive = truncated_pow(&base, r.unsigned_abs(), len);
    if r >= 0 {
        positive
    } else {
        truncated_inverse(&positive, len)
    }
}

/// Full q-expansion of an eta-quotient through exponent `precision - 1`.
pub fn q_expansion(e: &EtaQuotient, precision: i64) -> Result<QSeries> {
    let weighted = e.weighted_sum();
    if weighted % 24 != 0 {
        return Err(Error::FractionalLeadingPower(weighted));
    }
    let n0 = weighted / 24;
    let len = (precision - n0).max(0) as usize;

    let mut numerator = vec![BigInt::zero(); len];
    if len > 0 {
        numerator[0] = BigInt::one();
    }
    let mut denominator = numerator.clone();
    for (&delta, &r) in e.exponents() {
        if r == 0 {
            continue;
        }
        let factor = truncated_pow(&euler_product_pentagonal(delta, len), r.unsigned_abs(), len);
        if r > 0 {
            numerator = truncated_mul(&numerator, &factor, len);
        } else {
            denominator = truncated_mul(&denominator, &factor, len);
        }
    }
    let coeffs = if e.exponents().values().any(|&r| r < 0) {
        truncated_mul(&numerator, &truncated_inverse(&denominator, len), len)
    } else {
        numerator
    };
    Ok(QSeries::new(n0, coeffs))
}

/// Number of leading coefficients that determine a weight-`k` form on Γ₀(N):
/// `⌊k · [SL₂(ℤ) : Γ₀(N)] / 12⌋ + 1`.
pub fn sturm_bound(level: u64, k: i64) -> u64 {
    let k = k.max(0) as u64;
    k * gamma0_index(level) / 12 + 1
}

/// The bound `⌊pk/12⌋ + 1` quoted for prime level; never larger than
/// [`sturm_bound`].
pub fn prime_sturm_bound(p: u64, k: i64) -> u64 {
    k.max(0) as u64 * p / 12 + 1
}
