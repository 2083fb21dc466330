//! Dimension formulas for spaces of cusp forms: level one, Γ₀(p) with trivial
//! character, and Γ₀(p) with the quadratic character `(·/p)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numthy::{int, is_prime, kronecker, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterTag {
    Trivial,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionSource {
    ClosedFormula,
    Table,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub level: u64,
    pub weight: i64,
    pub character: CharacterTag,
    pub dim_cusp: u64,
    pub dim_eisenstein: Option<u64>,
    pub dim_total: Option<u64>,
    pub source: DimensionSource,
}

impl DimensionReport {
    fn trivial(level: u64, weight: i64, cusp: u64, eisenstein: u64, source: DimensionSource) -> Self {
        Self {
            level,
            weight,
            character: CharacterTag::Trivial,
            dim_cusp: cusp,
            dim_eisenstein: Some(eisenstein),
            dim_total: Some(cusp + eisenstein),
            source,
        }
    }
}

fn gamma4(k: i64) -> Rational {
    match k.rem_euclid(4) {
        0 => rat(1, 4),
        2 => rat(-1, 4),
        _ => int(0),
    }
}

fn gamma3(k: i64) -> Rational {
    match k.rem_euclid(3) {
        0 => rat(1, 3),
        2 => rat(-1, 3),
        _ => int(0),
    }
}

/// `dim S_k − dim M_{2−k}` on SL₂(ℤ).
pub fn level1_difference(k: i64) -> Rational {
    rat(k - 1, 12) - rat(1, 2) + gamma4(k) + gamma3(k)
}

fn to_dim(q: &Rational) -> Option<u64> {
    if q.is_integer() && !q.is_negative() {
        q.numer().to_u64()
    } else {
        None
    }
}

pub fn dim_level1(k: i64) -> DimensionReport {
    let report = |s, e| DimensionReport::trivial(1, k, s, e, DimensionSource::ClosedFormula);
    if k < 0 || k % 2 != 0 {
        return report(0, 0);
    }
    match k {
        0 => report(0, 1),
        // dim S_2 − dim M_0 = −1 with M_0 the constants.
        2 => {
            let s = level1_difference(2) + int(1);
            report(to_dim(&s).expect("dim S_2 is 0"), 0)
        }
        _ => {
            let cusp = to_dim(&level1_difference(k)).expect("level-one formula is integral");
            // S_{2−k} vanishes for k ≥ 4, so the formula at 2 − k gives −dim M_k.
            let total = to_dim(&-level1_difference(2 - k)).expect("level-one formula is integral");
            assert_eq!(total, cusp + 1, "level one has a single Eisenstein series");
            report(cusp, total - cusp)
        }
    }
}

/// Number of solutions of `x² ≡ −1 (mod p)`: `1 + (−4/p)`.
pub fn mu02(p: u64) -> u64 {
    (1 + kronecker(-4, p as i64)) as u64
}

/// Number of solutions of `x² + x + 1 ≡ 0 (mod p)`: `1 + (−3/p)`.
pub fn mu03(p: u64) -> u64 {
    (1 + kronecker(-3, p as i64)) as u64
}

/// `g₀(p) = (p+1)/12 − μ₀,₂(p)/4 − μ₀,₃(p)/3`, the dimension of `S₂(Γ₀(p))`.
pub fn g0(p: u64) -> Result<i64> {
    check_prime_ge5(p)?;
    let mu2 = mu02(p) as i64;
    let mu3 = mu03(p) as i64;
    let g = rat(p as i64 + 1, 12) - rat(mu2, 4) - rat(mu3, 3);
    Ok(crate::numthy::rational_to_i64(&g).expect("g0 is an integer"))
}

fn check_prime_ge5(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// `dim S_k(Γ₀(p))` from the closed formula, valid for even `k ≥ 4`.
pub fn gamma0_formula(p: u64, k: i64) -> Result<i64> {
    let g = g0(p)?;
    let mu2 = mu02(p) as i64;
    let mu3 = mu03(p) as i64;
    Ok((k - 1) * (g - 1) + (k - 2) + mu2 * k.div_euclid(4) + mu3 * k.div_euclid(3))
}

/// Offsets `c` in the cells `((p+1)(k−1) + c)/12`, rows `k mod 12` (even rows
/// only), columns `p mod 12 ∈ {1, 5, 7, 11}`.
const GAMMA0_TABLE: [[i64; 4]; 6] = [
    [2, -6, -4, -12],
    [-26, -18, -20, -12],
    [-6, -6, -12, -12],
    [-10, -18, -4, -12],
    [-14, -6, -20, -12],
    [-18, -18, -12, -12],
];

/// Table value of `dim S_k(Γ₀(p))` for `k > 2`, as an exact rational.
pub fn gamma0_table(p: u64, k: i64) -> Result<Rational> {
    check_prime_ge5(p)?;
    if k.rem_euclid(2) == 1 {
        return Ok(int(0));
    }
    let col = match p % 12 {
        1 => 0,
        5 => 1,
        7 => 2,
        11 => 3,
        _ => unreachable!("primes >= 5 are units mod 12"),
    };
    let offset = GAMMA0_TABLE[(k.rem_euclid(12) / 2) as usize][col];
    Ok(rat((p as i64 + 1) * (k - 1) + offset, 12))
}

pub fn dim_gamma0_p(p: u64, k: i64) -> Result<DimensionReport> {
    check_prime_ge5(p)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("weight {k} < 2")));
    }
    if k % 2 != 0 {
        // −I ∈ Γ₀(p) kills every odd-weight form with trivial character.
        return Ok(DimensionReport::trivial(p, k, 0, 0, DimensionSource::Table));
    }
    if k == 2 {
        let g = g0(p)? as u64;
        return Ok(DimensionReport::trivial(p, k, g, 1, DimensionSource::ClosedFormula));
    }
    let formula = gamma0_formula(p, k)?;
    let table = gamma0_table(p, k)?;
    let inconsistent = || Error::TableInconsistency {
        p,
        k,
        value: table.clone(),
    };
    let table_dim = to_dim(&table).ok_or_else(inconsistent)?;
    if formula < 0 || formula as u64 != table_dim {
        return Err(inconsistent());
    }
    Ok(DimensionReport::trivial(p, k, table_dim, 2, DimensionSource::BothAgree))
}

/// `A₄(p) = {x mod p : x² ≡ −1}`.
pub fn a4_set(p: u64) -> Vec<u64> {
    (0..p).filter(|&x| (x * x + 1) % p == 0).collect()
}

/// `A₃(p) = {x mod p : x² + x + 1 ≡ 0}`.
pub fn a3_set(p: u64) -> Vec<u64> {
    (0..p).filter(|&x| (x * x + x + 1) % p == 0).collect()
}

/// `Σ_{x ∈ A₄(p)} (x/p)`, by direct summation.
pub fn character_sum_a4(p: u64) -> i64 {
    a4_set(p)
        .into_iter()
        .map(|x| kronecker(x as i64, p as i64) as i64)
        .sum()
}

/// `Σ_{x ∈ A₃(p)} (x/p)`, by direct summation.
pub fn character_sum_a3(p: u64) -> i64 {
    a3_set(p)
        .into_iter()
        .map(|x| kronecker(x as i64, p as i64) as i64)
        .sum()
}

/// The case analysis for the `A₄` sum: 1, 0, 2 or −2.
pub fn character_sum_a4_cases(p: u64) -> i64 {
    if p == 2 {
        1
    } else if p % 4 == 3 {
        0
    } else if p % 8 == 1 {
        2
    } else {
        -2
    }
}

/// The case analysis for the `A₃` sum: 1, 0 or 2.
pub fn character_sum_a3_cases(p: u64) -> i64 {
    if p == 3 {
        1
    } else if p % 3 == 2 {
        0
    } else {
        2
    }
}

/// Offsets `c` in `((k−1)(p+1) + c)/12` for `dim S_k(p, (·/p))`; `None` marks
/// the cells where the weight parity does not match `χ(−1)`. Rows `k mod 12`,
/// columns `p mod 24 ∈ {1, 5, 7, 11, 13, 17, 19, 23}`.
const QUADRATIC_TABLE: [[Option<i64>; 8]; 12] = [
    [Some(8), Some(-12), None, None, Some(-4), Some(0), None, None],
    [None, None, Some(0), Some(-6), None, None, Some(0), Some(-6)],
    [Some(-20), Some(0), None, None, Some(-8), Some(-12), None, None],
    [None, None, Some(2), Some(-6), None, None, Some(2), Some(-6)],
    [Some(0), Some(-12), None, None, Some(-12), Some(0), None, None],
    [None, None, Some(-14), Some(-6), None, None, Some(-14), Some(-6)],
    [Some(-4), Some(0), None, None, Some(8), Some(-12), None, None],
    [None, None, Some(0), Some(-6), None, None, Some(0), Some(-6)],
    [Some(-4), Some(-12), None, None, Some(-20), Some(0), None, None],
    [None, None, Some(2), Some(-6), None, None, Some(2), Some(-6)],
    [Some(-12), Some(0), None, None, Some(0), Some(-12), None, None],
    [None, None, Some(-14), Some(-6), None, None, Some(-14), Some(-6)],
];

/// Raw table value for `dim S_k(p, (·/p))`; zero on parity-mismatched cells.
pub fn quadratic_table(p: u64, k: i64) -> Result<Rational> {
    check_prime_ge5(p)?;
    let col = match p % 24 {
        1 => 0,
        5 => 1,
        7 => 2,
        11 => 3,
        13 => 4,
        17 => 5,
        19 => 6,
        23 => 7,
        _ => unreachable!("primes >= 5 are units mod 24"),
    };
    Ok(match QUADRATIC_TABLE[k.rem_euclid(12) as usize][col] {
        None => int(0),
        Some(offset) => Rational::new(
            BigInt::from(k - 1) * BigInt::from(p + 1) + BigInt::from(offset),
            BigInt::from(12),
        ),
    })
}

pub fn dim_quadratic(p: u64, k: i64) -> Result<DimensionReport> {
    check_prime_ge5(p)?;
    if k < 1 {
        return Err(Error::InvalidArgument(format!("weight {k} < 1")));
    }
    let value = quadratic_table(p, k)?;
    let dim = to_dim(&value).ok_or(Error::TableInconsistency { p, k, value })?;
    Ok(DimensionReport {
        level: p,
        weight: k,
        character: CharacterTag::Quadratic,
        dim_cusp: dim,
        dim_eisenstein: None,
        dim_total: None,
        source: DimensionSource::Table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numthy::primes_between;

    #[test]
    fn level_one() {
        let m4 = dim_level1(4);
        assert_eq!((m4.dim_total, m4.dim_cusp), (Some(1), 0));
        let m12 = dim_level1(12);
        assert_eq!((m12.dim_total, m12.dim_cusp), (Some(2), 1));
        assert_eq!(dim_level1(0).dim_total, Some(1));
        assert_eq!(dim_level1(2).dim_total, Some(0));
        assert_eq!(dim_level1(7).dim_total, Some(0));
        assert_eq!(dim_level1(-4).dim_total, Some(0));
        assert_eq!(level1_difference(-2), int(-1));
        assert_eq!(level1_difference(-10), int(-2));
    }

    #[test]
    fn level_one_grows_by_one_every_twelve() {
        for k in (4..200).step_by(2) {
            let m = dim_level1(k).dim_total.unwrap();
            assert_eq!(dim_level1(k + 12).dim_total.unwrap(), m + 1);
            // Classical count: ⌊k/12⌋, plus one unless k ≡ 2 (mod 12).
            let classical = (k / 12) as u64 + if k % 12 == 2 { 0 } else { 1 };
            assert_eq!(m, classical);
        }
    }

    #[test]
    fn gamma0_examples() {
        let r = dim_gamma0_p(11, 2).unwrap();
        assert_eq!((r.dim_cusp, r.dim_eisenstein), (1, Some(1)));
        let r = dim_gamma0_p(11, 4).unwrap();
        assert_eq!((r.dim_cusp, r.dim_eisenstein, r.source), (2, Some(2), DimensionSource::BothAgree));
        let r = dim_gamma0_p(13, 4).unwrap();
        assert_eq!(r.source, DimensionSource::BothAgree);
        assert_eq!(r.dim_cusp, 3);
        assert_eq!(dim_gamma0_p(3, 4), Err(Error::UnsupportedPrime(3)));
        assert_eq!(dim_gamma0_p(2, 4), Err(Error::UnsupportedPrime(2)));
        assert_eq!(dim_gamma0_p(15, 4), Err(Error::NotPrime(15)));
    }

    #[test]
    fn gamma0_formula_matches_table() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            for k in (4..=24).step_by(2) {
                let r = dim_gamma0_p(p, k).unwrap();
                assert_eq!(r.source, DimensionSource::BothAgree, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn mu_matches_root_counts() {
        for p in primes_between(2, 400) {
            assert_eq!(a4_set(p).len() as u64, mu02(p));
            assert_eq!(a3_set(p).len() as u64, mu03(p));
        }
    }

    #[test]
    fn character_sum_examples() {
        assert_eq!(character_sum_a4(13), -2);
        assert_eq!(character_sum_a3(7), 2);
        assert_eq!(character_sum_a4(11), 0);
        assert_eq!(character_sum_a4(2), 1);
        assert_eq!(character_sum_a3(3), 1);
        for p in primes_between(2, 200) {
            assert_eq!(character_sum_a4(p), character_sum_a4_cases(p), "A4 p={p}");
            assert_eq!(character_sum_a3(p), character_sum_a3_cases(p), "A3 p={p}");
        }
    }

    #[test]
    fn quadratic_table_parity_and_integrality() {
        // Zero cells are exactly the weights whose parity disagrees with χ(−1).
        for p in primes_between(5, 120) {
            let chi_minus_one = kronecker(-1, p as i64);
            for k in 1..40 {
                let parity_ok = (k % 2 == 0) == (chi_minus_one == 1);
                match dim_quadratic(p, k) {
                    Ok(r) => {
                        if !parity_ok {
                            assert_eq!(r.dim_cusp, 0);
                        }
                    }
                    Err(Error::TableInconsistency { value, .. }) => {
                        assert!(parity_ok);
                        assert!(!value.is_integer() || value.is_negative());
                    }
                    Err(e) => panic!("unexpected {e}"),
                }
            }
        }
    }

    #[test]
    fn quadratic_inconsistent_cells_are_reported() {
        assert_eq!(
            dim_quadratic(13, 2),
            Err(Error::TableInconsistency { p: 13, k: 2, value: rat(1, 2) })
        );
        assert!(matches!(dim_quadratic(7, 3), Err(Error::TableInconsistency { .. })));
        assert!(matches!(dim_quadratic(23, 3), Err(Error::TableInconsistency { .. })));
        assert_eq!(dim_quadratic(3, 3), Err(Error::UnsupportedPrime(3)));
    }
}
