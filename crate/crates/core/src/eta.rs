//! Eta-quotients `∏_{δ | N} η(δz)^{r_δ}`: the Gordon-Hughes-Newman
//! admissibility test, the attached quadratic character, orders of vanishing
//! at the cusps, and the linear map between exponents and cusp orders.
//!
//! Cusps are indexed by the denominator `d | N` of a representative `c/d`.
//! The order at `d = N` is the order at `i∞`, i.e. the leading exponent of the
//! q-expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numthy::{divisors, factorize, int, is_squarefree, kronecker, sigma1, Rational, RationalMatrix};

/// An eta-quotient of level `N` with integer exponents.
///
/// The exponent map always has exactly the divisors of `N` as keys; divisors
/// that do not appear carry an explicit zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    /// Builds a quotient from `(δ, r_δ)` pairs. Repeated divisors add up.
    pub fn new(level: u64, pairs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let mut exponents: BTreeMap<u64, i64> = divisors(level).into_iter().map(|d| (d, 0)).collect();
        for (delta, r) in pairs {
            match exponents.get_mut(&delta) {
                Some(slot) => *slot += r,
                None => return Err(Error::NotDivisor { d: delta, level }),
            }
        }
        Ok(Self { level, exponents })
    }

    /// Exponents listed in ascending divisor order.
    pub fn from_exponents(level: u64, exps: &[i64]) -> Result<Self> {
        let divs = divisors(level);
        if divs.len() != exps.len() {
            return Err(Error::DimensionMismatch(format!(
                "level {level} has {} divisors, got {} exponents",
                divs.len(),
                exps.len()
            )));
        }
        Self::new(level, divs.into_iter().zip(exps.iter().copied()))
    }

    /// The trivial quotient (constant 1) at the given level.
    pub fn one(level: u64) -> Self {
        Self::new(level, []).expect("positive level")
    }

    /// Parses the `δ:r` text form against an explicit level.
    pub fn parse_with_level(s: &str, level: u64) -> Result<Self> {
        Self::new(level, parse_pairs(s)?)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent_vec(&self) -> Vec<i64> {
        self.exponents.values().copied().collect()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// `Σ δ·r_δ`; divided by 24 this is the order at `i∞`.
    pub fn weighted_sum(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// `Σ (N/δ)·r_δ`; divided by 24 this is the order at the cusp 0.
    pub fn coweighted_sum(&self) -> i64 {
        self.exponents
            .iter()
            .map(|(&d, &r)| (self.level / d) as i64 * r)
            .sum()
    }

    /// `k = Σ r_δ / 2` when the sum is even.
    pub fn weight(&self) -> Option<i64> {
        let s = self.exponent_sum();
        (s % 2 == 0).then_some(s / 2)
    }

    /// Both Gordon-Hughes-Newman congruences modulo 24.
    pub fn ghn_check(&self) -> Result<bool> {
        if self.weight().is_none() {
            return Err(Error::OddWeight(self.exponent_sum()));
        }
        Ok(self.weighted_sum() % 24 == 0 && self.coweighted_sum() % 24 == 0)
    }

    fn is_ghn(&self) -> bool {
        self.ghn_check().unwrap_or(false)
    }

    /// The character `n ↦ ((-1)^k s / n)` with `s = ∏ δ^{r_δ}` reduced
    /// modulo squares.
    pub fn character(&self) -> Result<QuadChar> {
        if !self.is_ghn() {
            return Err(Error::NotGhn(self.to_string()));
        }
        let k = self.weight().expect("checked by ghn");
        let mut core: i64 = 1;
        for (prime, _) in factorize(self.level) {
            let power: i64 = self
                .exponents
                .iter()
                .map(|(&d, &r)| r * valuation(d, prime) as i64)
                .sum();
            if power.rem_euclid(2) == 1 {
                core *= prime as i64;
            }
        }
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(QuadChar {
            modulus: self.level,
            discriminant_core: sign * core,
        })
    }

    /// Order of vanishing at the cusps with denominator `d`.
    pub fn cusp_order(&self, d: u64) -> Result<Rational> {
        cusp_order_generic(
            self.level,
            self.exponents.iter().map(|(&delta, &r)| (delta, int(r))),
            d,
        )
    }

    pub fn cusp_orders(&self) -> CuspOrders {
        let orders = divisors(self.level)
            .into_iter()
            .map(|d| (d, self.cusp_order(d).expect("d divides level")))
            .collect();
        CuspOrders {
            level: self.level,
            orders,
        }
    }

    pub fn classify(&self) -> Classification {
        if !self.is_ghn() {
            return Classification::NotGhn;
        }
        let orders = self.cusp_orders();
        if orders.values().any(|v| v.is_negative()) {
            Classification::WeaklyHolomorphic
        } else if orders.values().all(|v| v.is_positive()) {
            Classification::CuspForm
        } else {
            Classification::ModularForm
        }
    }

    /// Negates every exponent.
    pub fn reciprocal(&self) -> Self {
        Self {
            level: self.level,
            exponents: self.exponents.iter().map(|(&d, &r)| (d, -r)).collect(),
        }
    }

    /// Exponent-wise sum, at the least common level.
    pub fn product(&self, other: &EtaQuotient) -> Self {
        let level = self.level.lcm(&other.level);
        Self::new(
            level,
            self.exponents
                .iter()
                .chain(other.exponents.iter())
                .map(|(&d, &r)| (d, r)),
        )
        .expect("divisors of either level divide the lcm")
    }

    /// Views the same function as a quotient of a multiple level.
    pub fn at_level(&self, level: u64) -> Result<Self> {
        if level % self.level != 0 {
            return Err(Error::NotDivisor {
                d: self.level,
                level,
            });
        }
        Self::new(level, self.exponents.iter().map(|(&d, &r)| (d, r)))
    }

    pub fn scaled(&self, t: i64) -> Self {
        Self {
            level: self.level,
            exponents: self.exponents.iter().map(|(&d, &r)| (d, r * t)).collect(),
        }
    }

    pub fn to_generalized(&self) -> GeneralizedEtaQuotient {
        GeneralizedEtaQuotient {
            level: self.level,
            exponents: self.exponents.iter().map(|(&d, &r)| (d, int(r))).collect(),
        }
    }
}

/// Canonical `δ:r` text form: ascending δ, zero exponents omitted.
impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .filter(|(_, &r)| r != 0)
            .map(|(d, r)| format!("{d}:{r}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Serialized as the canonical text form.
impl Serialize for EtaQuotient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `δ:r` pairs; the level is the lcm of the listed divisors.
impl FromStr for EtaQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = parse_pairs(s)?;
        let level = pairs.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d));
        Self::new(level, pairs)
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u64, i64)>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: Vec<(u64, i64)> = Vec::new();
    for item in s.split(',') {
        let (d, r) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `delta:exponent`, got `{item}`")))?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad divisor `{d}`")))?;
        let r: i64 = r
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent `{r}`")))?;
        if d == 0 {
            return Err(Error::Parse("divisor must be positive".into()));
        }
        if let Some(&(prev, _)) = pairs.last() {
            if d <= prev {
                return Err(Error::Parse(format!(
                    "divisors must be strictly ascending ({prev} then {d})"
                )));
            }
        }
        pairs.push((d, r));
    }
    Ok(pairs)
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Coefficient of `r_δ` in the order of vanishing at cusp denominator `d`:
/// `N (d,δ)² / (24 (d, N/d) d δ)`.
pub fn order_coefficient(level: u64, d: u64, delta: u64) -> Rational {
    let g = d.gcd(&delta);
    let h = d.gcd(&(level / d));
    Rational::new(
        BigInt::from(level) * BigInt::from(g * g),
        BigInt::from(24u64 * h * d * delta),
    )
}

fn cusp_order_generic(
    level: u64,
    exps: impl Iterator<Item = (u64, Rational)>,
    d: u64,
) -> Result<Rational> {
    if d == 0 || level % d != 0 {
        return Err(Error::NotDivisor { d, level });
    }
    Ok(exps.fold(Rational::zero(), |acc, (delta, r)| {
        acc + order_coefficient(level, d, delta) * r
    }))
}

/// The position of an eta-quotient in the hierarchy of modular objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NotGhn,
    WeaklyHolomorphic,
    ModularForm,
    CuspForm,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NotGhn => "not_ghn",
            Classification::WeaklyHolomorphic => "weakly_holomorphic",
            Classification::ModularForm => "modular_form",
            Classification::CuspForm => "cusp_form",
        })
    }
}

/// Eta-quotient with rational exponents; only meaningful through its powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedEtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, Rational>,
}

impl GeneralizedEtaQuotient {
    pub fn new(level: u64, pairs: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let mut exponents: BTreeMap<u64, Rational> = divisors(level)
            .into_iter()
            .map(|d| (d, Rational::zero()))
            .collect();
        for (delta, r) in pairs {
            match exponents.get_mut(&delta) {
                Some(slot) => *slot += r,
                None => return Err(Error::NotDivisor { d: delta, level }),
            }
        }
        Ok(Self { level, exponents })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Rational> {
        &self.exponents
    }

    pub fn exponent(&self, delta: u64) -> Rational {
        self.exponents.get(&delta).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn cusp_order(&self, d: u64) -> Result<Rational> {
        cusp_order_generic(
            self.level,
            self.exponents.iter().map(|(&delta, r)| (delta, r.clone())),
            d,
        )
    }

    pub fn cusp_orders(&self) -> CuspOrders {
        let orders = divisors(self.level)
            .into_iter()
            .map(|d| (d, self.cusp_order(d).expect("d divides level")))
            .collect();
        CuspOrders {
            level: self.level,
            orders,
        }
    }

    /// Least common denominator of the exponents.
    pub fn denominator(&self) -> BigInt {
        self.exponents
            .values()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.exponents.values().all(|r| r.is_integer())
    }

    pub fn to_integral(&self) -> Option<EtaQuotient> {
        let pairs: Option<Vec<(u64, i64)>> = self
            .exponents
            .iter()
            .map(|(&d, r)| crate::numthy::rational_to_i64(r).map(|x| (d, x)))
            .collect();
        pairs.map(|p| EtaQuotient::new(self.level, p).expect("same divisors"))
    }

    pub fn scaled(&self, t: i64) -> Self {
        Self {
            level: self.level,
            exponents: self
                .exponents
                .iter()
                .map(|(&d, r)| (d, r * int(t)))
                .collect(),
        }
    }
}

impl fmt::Display for GeneralizedEtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(d, r)| format!("{d}:{r}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Orders of vanishing `v_d`, one per divisor `d | N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspOrders {
    level: u64,
    orders: BTreeMap<u64, Rational>,
}

impl CuspOrders {
    pub fn new(level: u64, pairs: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let divs = divisors(level);
        let orders: BTreeMap<u64, Rational> = pairs.into_iter().collect();
        if orders.len() != divs.len() || !divs.iter().all(|d| orders.contains_key(d)) {
            return Err(Error::InvalidArgument(format!(
                "cusp orders must be given for exactly the divisors {divs:?} of {level}"
            )));
        }
        Ok(Self { level, orders })
    }

    /// Integer orders listed in ascending divisor order.
    pub fn from_integers(level: u64, values: &[i64]) -> Result<Self> {
        let divs = divisors(level);
        if divs.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "level {level} has {} cusps, got {} orders",
                divs.len(),
                values.len()
            )));
        }
        Self::new(level, divs.into_iter().zip(values.iter().map(|&v| int(v))))
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn get(&self, d: u64) -> Option<&Rational> {
        self.orders.get(&d)
    }

    /// Order at `i∞` (the cusp with denominator `N`).
    pub fn at_infinity(&self) -> &Rational {
        &self.orders[&self.level]
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.orders.values()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rational)> {
        self.orders.iter()
    }

    pub fn sum(&self) -> Rational {
        self.orders.values().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn is_integral(&self) -> bool {
        self.orders.values().all(|v| v.is_integer())
    }
}

/// Quadratic character `n ↦ kronecker(D, n)` on integers prime to the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadChar {
    pub modulus: u64,
    pub discriminant_core: i64,
}

impl QuadChar {
    pub fn eval(&self, n: i64) -> i32 {
        if n.unsigned_abs().gcd(&self.modulus) != 1 {
            return 0;
        }
        kronecker(self.discriminant_core, n)
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant_core == 1
    }
}

impl fmt::Display for QuadChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "trivial (mod {})", self.modulus)
        } else {
            write!(f, "({}/.) (mod {})", self.discriminant_core, self.modulus)
        }
    }
}

/// The linear system `24·v = M·r` relating exponents and cusp orders at a
/// square-free level, with `M[d][δ] = N (d,δ)² / ((d, N/d) d δ)`.
#[derive(Debug, Clone)]
pub struct OrderSystem {
    level: u64,
    divisors: Vec<u64>,
    matrix: RationalMatrix,
    inverse: RationalMatrix,
}

impl OrderSystem {
    pub fn new(level: u64) -> Result<Self> {
        if !is_squarefree(level) {
            return Err(Error::NotSquareFree(level));
        }
        let divs = divisors(level);
        let matrix = RationalMatrix::from_fn(divs.len(), divs.len(), |i, j| {
            order_coefficient(level, divs[i], divs[j]) * int(24)
        });
        let inverse = matrix
            .inverse()
            .expect("the order matrix of a square-free level is invertible");
        Ok(Self {
            level,
            divisors: divs,
            matrix,
            inverse,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &RationalMatrix {
        &self.inverse
    }

    /// `k σ₁(N) / 12`, the sum of all cusp orders at weight `k`.
    pub fn order_total(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k) * BigInt::from(sigma1(self.level)), BigInt::from(12))
    }

    /// Exponents `r = M⁻¹ · 24v` without the weight-consistency check.
    pub fn exponents_unchecked(&self, orders: &[Rational]) -> Vec<Rational> {
        let scaled: Vec<Rational> = orders.iter().map(|v| v * int(24)).collect();
        self.inverse.mul_vec(&scaled).expect("shape matches")
    }

    pub fn exponents(&self, k: i64, orders: &CuspOrders) -> Result<GeneralizedEtaQuotient> {
        if orders.level() != self.level {
            return Err(Error::InvalidArgument(format!(
                "orders are for level {}, system is for level {}",
                orders.level(),
                self.level
            )));
        }
        let expected = self.order_total(k);
        let actual = orders.sum();
        if actual != expected {
            return Err(Error::InconsistentWeight {
                level: self.level,
                weight: k,
                actual,
                expected,
            });
        }
        let v: Vec<Rational> = orders.values().cloned().collect();
        let r = self.exponents_unchecked(&v);
        GeneralizedEtaQuotient::new(self.level, self.divisors.iter().copied().zip(r))
    }
}

/// Recovers the (possibly fractional) exponents of the quotient with the
/// given cusp orders at a square-free level.
pub fn exponents_from_orders(level: u64, k: i64, orders: &CuspOrders) -> Result<GeneralizedEtaQuotient> {
    OrderSystem::new(level)?.exponents(k, orders)
}
