//! Independent checks on enumerated quotients: linear independence through
//! Sturm-bound coefficient matrices, span ratios against dimension formulas,
//! the fractional-exponent lift, and the level `8` and `4p` families.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dims::{dim_gamma0_p, dim_quadratic};
use crate::enumerate::{count_cusp_eta, enumerate, weight_condition};
use crate::error::{Error, Result};
use crate::eta::{exponents_from_orders, Classification, CuspOrders, EtaQuotient, GeneralizedEtaQuotient};
use crate::numthy::{integer_rank, is_prime, Rational};
use crate::qseries::{q_expansion, sturm_bound};

/// Outcome of a rank computation on leading q-expansion coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceCertificate {
    pub level: u64,
    pub weight: i64,
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub independent: bool,
    /// Pairwise distinct leading exponents, which makes the matrix echelon.
    pub distinct_leading: bool,
    /// Ranks within each character class, ordered by discriminant.
    pub groups: Vec<CharacterGroup>,
}

/// Quotients sharing the character `(D/·)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterGroup {
    pub discriminant: i64,
    pub count: usize,
    pub rank: usize,
}

/// Rank of the coefficient matrix over the exponents
/// `[min leading exponent, sturm_bound(N, k))`.
pub fn independence_rank(quotients: &[EtaQuotient], k: i64, level: u64) -> Result<IndependenceCertificate> {
    for e in quotients {
        if e.weight() != Some(k) {
            return Err(Error::WeightMismatch {
                quotient: e.to_string(),
                expected: k,
                found: e.weight(),
            });
        }
        if level % e.level() != 0 {
            return Err(Error::NotDivisor { d: e.level(), level });
        }
    }
    let bound = sturm_bound(level, k) as i64;
    let series = quotients
        .par_iter()
        .map(|e| q_expansion(e, bound))
        .collect::<Result<Vec<_>>>()?;
    let start = series.iter().map(|s| s.leading_exponent()).min().unwrap_or(0).min(bound);
    let matrix: Vec<Vec<BigInt>> = series
        .iter()
        .map(|s| s.coefficient_range(start, bound).expect("expanded to the bound"))
        .collect();
    let mut leading: Vec<i64> = series.iter().map(|s| s.leading_exponent()).collect();
    leading.sort_unstable();
    let distinct_leading = leading.windows(2).all(|w| w[0] != w[1]);
    let cols = (bound - start) as usize;
    let mut by_char: BTreeMap<i64, Vec<Vec<BigInt>>> = BTreeMap::new();
    for (e, row) in quotients.iter().zip(&matrix) {
        let d = e.character().map(|c| c.discriminant_core).unwrap_or(0);
        by_char.entry(d).or_default().push(row.clone());
    }
    let groups = by_char
        .into_iter()
        .map(|(discriminant, rows)| CharacterGroup {
            discriminant,
            count: rows.len(),
            rank: integer_rank(rows),
        })
        .collect();
    let rank = integer_rank(matrix);
    Ok(IndependenceCertificate {
        level,
        weight: k,
        count: quotients.len(),
        rows: quotients.len(),
        cols,
        rank,
        independent: rank == quotients.len(),
        distinct_leading,
        groups,
    })
}

/// Cusp-quotient count over the matching cusp-form dimension, with the
/// limiting value as `k → ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanRatio {
    pub p: u64,
    pub k: i64,
    pub count: u64,
    pub dim: u64,
    pub ratio: Rational,
    pub limit: Rational,
}

impl Serialize for SpanRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            p: u64,
            k: i64,
            count: u64,
            dim: u64,
            ratio: String,
            limit: String,
        }
        Json {
            p: self.p,
            k: self.k,
            count: self.count,
            dim: self.dim,
            ratio: self.ratio.to_string(),
            limit: self.limit.to_string(),
        }
        .serialize(serializer)
    }
}

/// The cusp-form dimension the count is compared against.
///
/// `p ≡ 3 (mod 4)`: even `k` uses `S_k(Γ₀(p))`, odd `k` the quadratic space.
/// `p ≡ 1 (mod 4)`: the sum of the two.
pub fn comparison_dimension(p: u64, k: i64) -> Result<u64> {
    let trivial = || -> Result<u64> {
        if k % 2 == 0 {
            Ok(dim_gamma0_p(p, k)?.dim_cusp)
        } else {
            Ok(0)
        }
    };
    let quadratic = || -> Result<u64> { Ok(dim_quadratic(p, k)?.dim_cusp) };
    if p % 4 == 3 {
        if k % 2 == 0 {
            trivial()
        } else {
            quadratic()
        }
    } else {
        Ok(trivial()? + quadratic()?)
    }
}

/// `2h/(p−1)` for `p ≡ 3 (mod 4)`, `h/(p−1)` for `p ≡ 1 (mod 4)`.
pub fn span_limit(p: u64) -> Rational {
    let h = crate::enumerate::required_divisor(p) as i64;
    let num = if p % 4 == 3 { 2 * h } else { h };
    Rational::new(num.into(), (p as i64 - 1).into())
}

pub fn span_ratio(p: u64, k: i64) -> Result<SpanRatio> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let count = count_cusp_eta(p, k)?;
    let dim = comparison_dimension(p, k)?;
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(SpanRatio {
        p,
        k,
        count,
        dim,
        ratio: Rational::new(count.into(), dim.into()),
        limit: span_limit(p),
    })
}

/// A fractional order vector raised to the power that makes it integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftCertificate {
    pub t: u64,
    pub root: GeneralizedEtaQuotient,
    pub lifted: EtaQuotient,
    pub weight: i64,
    pub ghn: bool,
    pub classification: Classification,
}

impl Serialize for LiftCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            t: u64,
            root: String,
            lifted: &'a EtaQuotient,
            weight: i64,
            ghn: bool,
            classification: Classification,
        }
        Json {
            t: self.t,
            root: self.root.to_string(),
            lifted: &self.lifted,
            weight: self.weight,
            ghn: self.ghn,
            classification: self.classification,
        }
        .serialize(serializer)
    }
}

/// Solves for the rational exponents with orders `v`, then scales by the
/// least `t` that clears their denominators.
pub fn fractional_power_lift(p: u64, k: i64, v: &CuspOrders) -> Result<LiftCertificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if v.values().any(|x| x.is_negative() || !x.is_integer()) {
        return Err(Error::InvalidArgument("orders must be nonnegative integers".into()));
    }
    let root = exponents_from_orders(p, k, v)?;
    let t = root.denominator();
    if t.is_one() {
        return Err(Error::AlreadyIntegral);
    }
    let t = t.to_i64().expect("denominator fits in i64");
    let lifted = root.scaled(t).to_integral().expect("scaled by the common denominator");
    let weight = lifted.weight().expect("exponent sum is 2tk");
    assert_eq!(weight, t * k);
    let ghn = lifted.ghn_check()?;
    let classification = lifted.classify();
    Ok(LiftCertificate {
        t: t as u64,
        root,
        lifted,
        weight,
        ghn,
        classification,
    })
}

/// Orders on the prime-level line with `v` at `i∞` and `L − v` at `0`.
pub fn prime_line_orders(p: u64, k: i64, v_infinity: i64) -> Result<CuspOrders> {
    let numer = k * (p as i64 + 1);
    if numer % 12 != 0 {
        return Err(Error::InvalidArgument(format!(
            "k(p+1)/12 = {numer}/12 is not an integer"
        )));
    }
    let l = numer / 12;
    if !(0..=l).contains(&v_infinity) {
        return Err(Error::InvalidArgument(format!("order {v_infinity} outside [0, {l}]")));
    }
    CuspOrders::from_integers(p, &[l - v_infinity, v_infinity])
}

/// `η^{4k}(8z)/η^{2k}(4z)`.
pub fn level8_quotient(k: i64) -> EtaQuotient {
    EtaQuotient::new(8, [(4, -2 * k), (8, 4 * k)]).expect("4 and 8 divide 8")
}

/// `η^{4k}(4pz)/η^{2k}(2pz)`, the level-`4p` family that satisfies both
/// congruences; coincides with the level-8 family at `p = 2`.
pub fn four_p_quotient(p: u64, k: i64) -> EtaQuotient {
    EtaQuotient::new(4 * p, [(2 * p, -2 * k), (4 * p, 4 * k)]).expect("2p and 4p divide 4p")
}

/// `η^{4k}(4pz)/η^{2k}(4z)`, the form with the base `η(4z)`.
pub fn four_p_quotient_base4(p: u64, k: i64) -> EtaQuotient {
    EtaQuotient::new(4 * p, [(4, -2 * k), (4 * p, 4 * k)]).expect("4 and 4p divide 4p")
}

fn holomorphic(e: &EtaQuotient) -> bool {
    e.cusp_orders().values().all(|v| !v.is_negative())
}

/// Checks the family member of weight `k`: both congruences, nonnegative
/// orders at every cusp, and the expected character (`((−1)^k/·)` at level 8,
/// trivial at level `4p`).
pub fn verify_4p_family(p: u64, k: i64) -> Result<bool> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("weight {k} < 0")));
    }
    if p == 2 {
        let e = level8_quotient(k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        return Ok(e.ghn_check()? && holomorphic(&e) && e.character()?.discriminant_core == sign);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::UnsupportedPrime(p));
    }
    if k % 2 != 0 {
        return Err(Error::OddWeight(k));
    }
    let e = four_p_quotient(p, k);
    Ok(e.ghn_check()? && holomorphic(&e) && e.character()?.is_trivial())
}

/// One `(p, k)` cell of a grid sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: u64,
    pub k: i64,
    pub count_cusp: u64,
    pub count_noncusp: u64,
    pub dim_s: u64,
    pub ratio: Rational,
    pub rank: usize,
    pub independent: bool,
}

impl SweepRow {
    pub const HEADER: [&'static str; 8] = ["p", "k", "count_cusp", "count_noncusp", "dim_S", "ratio", "rank", "independent"];

    pub fn record(&self) -> [String; 8] {
        [
            self.p.to_string(),
            self.k.to_string(),
            self.count_cusp.to_string(),
            self.count_noncusp.to_string(),
            self.dim_s.to_string(),
            self.ratio.to_string(),
            self.rank.to_string(),
            self.independent.to_string(),
        ]
    }
}

impl Serialize for SweepRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            p: u64,
            k: i64,
            count_cusp: u64,
            count_noncusp: u64,
            #[serde(rename = "dim_S")]
            dim_s: u64,
            ratio: String,
            rank: usize,
            independent: bool,
        }
        Json {
            p: self.p,
            k: self.k,
            count_cusp: self.count_cusp,
            count_noncusp: self.count_noncusp,
            dim_s: self.dim_s,
            ratio: self.ratio.to_string(),
            rank: self.rank,
            independent: self.independent,
        }
        .serialize(serializer)
    }
}

pub fn sweep_row(p: u64, k: i64) -> Result<SweepRow> {
    let ratio = span_ratio(p, k)?;
    let report = enumerate(p, k)?;
    let cert = independence_rank(&report.all(), k, p)?;
    Ok(SweepRow {
        p,
        k,
        count_cusp: report.cusp_count() as u64,
        count_noncusp: report.noncusp_count() as u64,
        dim_s: ratio.dim,
        ratio: ratio.ratio,
        rank: cert.rank,
        independent: cert.independent,
    })
}

/// Rows for every admissible `k` in `1..=kmax` at each prime, in `(p, k)`
/// order. Cells whose dimension is unavailable are skipped and described in
/// the returned diagnostics.
pub fn sweep(primes: &[u64], kmax: i64) -> (Vec<SweepRow>, Vec<String>) {
    let cells: Vec<(u64, i64)> = primes
        .iter()
        .flat_map(|&p| (1..=kmax).map(move |k| (p, k)))
        .filter(|&(p, k)| weight_condition(p, k).is_some())
        .collect();
    let results: Vec<Result<SweepRow>> = cells.par_iter().map(|&(p, k)| sweep_row(p, k)).collect();
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for ((p, k), r) in cells.into_iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => diagnostics.push(format!("skipped p = {p}, k = {k}: {e}")),
        }
    }
    (rows, diagnostics)
}

/// Span ratios for admissible `k ≤ kmax`, skipping cells without a usable
/// dimension.
pub fn ratio_series(p: u64, kmax: i64) -> Result<(Vec<SpanRatio>, Vec<String>)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for k in 1..=kmax {
        if weight_condition(p, k).is_none() {
            continue;
        }
        match span_ratio(p, k) {
            Ok(r) => rows.push(r),
            Err(e @ (Error::TableInconsistency { .. } | Error::ZeroDimension)) => {
                diagnostics.push(format!("skipped k = {k}: {e}"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok((rows, diagnostics))
}

/// `|a − b| ≤ tol` for exact rationals.
pub fn within(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    (a - b).abs() <= *tol
}

/// Least common multiple of a list of integers.
pub fn lcm_all(values: impl IntoIterator<Item = BigInt>) -> BigInt {
    values
        .into_iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{list_cusp_eta, noncusp_eta};
    use crate::numthy::{int, primes_between, rat};

    fn q(s: &str) -> EtaQuotient {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        let c = independence_rank(&[q("1:2,11:2")], 2, 11).unwrap();
        assert_eq!((c.rank, c.independent), (1, true));
        let c = independence_rank(&noncusp_eta(5, 2), 2, 5).unwrap();
        assert_eq!((c.rank, c.independent, c.distinct_leading), (2, true, true));
        let e = q("1:2,11:2");
        let c = independence_rank(&[e.clone(), e], 2, 11).unwrap();
        assert_eq!((c.rank, c.independent), (1, false));
    }

    #[test]
    fn rank_rejects_wrong_weight() {
        let err = independence_rank(&[q("1:24")], 2, 1).unwrap_err();
        assert!(matches!(err, Error::WeightMismatch { expected: 2, found: Some(12), .. }));
        assert!(independence_rank(&[q("1:1,5:1")], 1, 7).is_err());
    }

    #[test]
    fn rank_columns_span_to_sturm_bound() {
        let c = independence_rank(&noncusp_eta(5, 2), 2, 5).unwrap();
        assert_eq!(c.cols as u64, sturm_bound(5, 2));
    }

    #[test]
    fn prime_level_quotients_are_independent() {
        for p in primes_between(5, 32) {
            for k in 1..=24 {
                let Ok(mut list) = list_cusp_eta(p, k) else { continue };
                list.extend(noncusp_eta(p, k));
                let c = independence_rank(&list, k, p).unwrap();
                assert!(c.independent, "p = {p}, k = {k}");
                assert!(c.distinct_leading);
            }
        }
    }

    #[test]
    fn composite_level_independence() {
        for (n, k) in [(35u64, 1i64), (35, 2), (15, 1), (33, 2)] {
            let r = enumerate(n, k).unwrap();
            let c = independence_rank(&r.all(), k, n).unwrap();
            assert!(c.independent, "N = {n}, k = {k}: {c:?}");
        }
    }

    #[test]
    fn level_fifteen_weight_two_is_dependent() {
        let r = enumerate(15, 2).unwrap();
        let c = independence_rank(&r.all(), 2, 15).unwrap();
        assert_eq!((c.count, c.rank, c.independent), (9, 5, false));
        let trivial = c.groups.iter().find(|g| g.discriminant == 1).unwrap();
        assert_eq!((trivial.count, trivial.rank), (5, 4));

        // Five trivial-character forms in M₂(Γ₀(15)), which has dimension 4;
        // the relation is checked well past the Sturm bound.
        let terms = [
            (5, "1:1,3:1,5:1,15:1"),
            (-1, "1:-2,3:4,5:4,15:-2"),
            (1, "1:3,3:-1,5:3,15:-1"),
            (9, "1:-1,3:3,5:-1,15:3"),
            (1, "1:4,3:-2,5:-2,15:4"),
        ];
        let series: Vec<_> = terms.iter().map(|(_, e)| q_expansion(&q(e), 200).unwrap()).collect();
        for n in 0..200 {
            let total: BigInt = terms
                .iter()
                .zip(&series)
                .map(|((a, _), s)| BigInt::from(*a) * s.coefficient(n).unwrap())
                .sum();
            assert!(total.is_zero(), "coefficient {n}");
        }
    }

    #[test]
    fn ratio_examples() {
        let r = span_ratio(11, 240).unwrap();
        assert_eq!((r.count, r.dim), (47, 238));
        assert!(within(&r.ratio, &rat(1, 5), &rat(1, 100)));
        assert_eq!(r.limit, rat(1, 5));
        assert_eq!(span_limit(13), rat(1, 2));
        assert_eq!(span_ratio(13, 4), Err(Error::Inadmissible { p: 13, k: 4 }));
    }

    #[test]
    fn ratio_envelope() {
        for p in [11u64, 23] {
            let limit = rat(2, p as i64 - 1);
            for k in (120..=400).step_by(2) {
                let r = span_ratio(p, k).unwrap();
                assert!(within(&r.ratio, &limit, &rat(3, k)), "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn lift_examples() {
        let cert = fractional_power_lift(11, 6, &prime_line_orders(11, 6, 1).unwrap()).unwrap();
        assert_eq!(cert.root.exponent(1), rat(54, 5));
        assert_eq!(cert.root.exponent(11), rat(6, 5));
        assert_eq!(cert.t, 5);
        assert_eq!(cert.lifted, q("1:54,11:6"));
        assert_eq!(cert.weight, 30);
        assert!(cert.ghn);
        assert_eq!(cert.classification, Classification::CuspForm);

        let admissible = prime_line_orders(11, 6, 3).unwrap();
        assert_eq!(fractional_power_lift(11, 6, &admissible), Err(Error::AlreadyIntegral));

        let cert = fractional_power_lift(11, 6, &prime_line_orders(11, 6, 2).unwrap()).unwrap();
        assert_eq!(5 % cert.t, 0);
        assert!(cert.ghn);
    }

    #[test]
    fn lift_certificates_hold_on_the_line() {
        for p in primes_between(5, 40) {
            for k in 1..=12 {
                let numer = k * (p as i64 + 1);
                if numer % 12 != 0 {
                    continue;
                }
                for v in 0..=numer / 12 {
                    let orders = prime_line_orders(p, k, v).unwrap();
                    match fractional_power_lift(p, k, &orders) {
                        Ok(c) => {
                            assert!(c.root.scaled(c.t as i64).is_integral());
                            assert!(c.ghn);
                            assert_eq!(c.weight, c.t as i64 * k);
                            assert_ne!(c.classification, Classification::WeaklyHolomorphic);
                        }
                        Err(Error::AlreadyIntegral) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn lift_rejects_negative_orders() {
        let v = CuspOrders::from_integers(11, &[3, -1]).unwrap();
        assert!(matches!(fractional_power_lift(11, 2, &v), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn families() {
        for k in 0..=10 {
            assert!(verify_4p_family(2, k).unwrap(), "level 8, k = {k}");
        }
        for p in [5u64, 7, 11, 13] {
            for k in (2..=20).step_by(2) {
                assert!(verify_4p_family(p, k).unwrap(), "p = {p}, k = {k}");
            }
        }
        assert_eq!(verify_4p_family(5, 1), Err(Error::OddWeight(1)));
        assert_eq!(verify_4p_family(3, 2), Err(Error::UnsupportedPrime(3)));
    }

    #[test]
    fn base4_form_fails_the_second_congruence() {
        let e = four_p_quotient_base4(5, 2);
        assert_eq!(e.coweighted_sum(), -12);
        assert!(!e.ghn_check().unwrap());
        assert_eq!(four_p_quotient(2, 3), level8_quotient(3));
    }

    #[test]
    fn family_orders() {
        for p in [5u64, 7, 11, 13] {
            for k in (2..=20).step_by(2) {
                let orders = four_p_quotient(p, k).cusp_orders();
                assert_eq!(orders.get(4), Some(&rat(k, 2)));
                assert_eq!(orders.get(4 * p), Some(&rat(p as i64 * k, 2)));
                assert_eq!(orders.sum(), rat(k, 2) * int(p as i64 + 1));
            }
        }
    }

    #[test]
    fn sweep_rows() {
        let (rows, diagnostics) = sweep(&[11], 6);
        assert!(diagnostics.is_empty() || rows.len() + diagnostics.len() == 6);
        let row = rows.iter().find(|r| r.k == 2).unwrap();
        assert_eq!((row.count_cusp, row.count_noncusp, row.dim_s, row.rank), (1, 0, 1, 1));
        assert!(row.independent);
        assert_eq!(SweepRow::HEADER.len(), row.record().len());
    }

    #[test]
    fn ratio_series_skips_bad_cells() {
        let (rows, diagnostics) = ratio_series(7, 30).unwrap();
        assert!(rows.iter().all(|r| r.k % 3 == 0));
        for d in &diagnostics {
            assert!(d.starts_with("skipped"));
        }
    }
}
