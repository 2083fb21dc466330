//! Counting and listing eta-quotients at prime and square-free levels.
//!
//! At prime level `p` a quotient `η(z)^{r₁} η(pz)^{r_p}` of weight `k` is
//! determined by its order `v` at `i∞`; the orders sum to `L = k(p+1)/12`
//! and integrality of the exponents forces `24v ≡ 2k (mod p−1)`, i.e.
//! `v ≡ c (mod d)`. Cusp forms are the points of that class strictly inside
//! `(0, L)`, non-cusp forms the endpoints.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eta::{Classification, CuspOrders, EtaQuotient, OrderSystem};
use crate::numthy::{divisors, int, is_prime, is_squarefree, solve_congruence, Rational};

/// The divisor `h` that every admissible weight at prime level `p` must carry.
pub fn required_divisor(p: u64) -> u64 {
    match p {
        2 => 4,
        3 => 3,
        _ => match p % 24 {
            11 | 23 => 1,
            17 => 4,
            7 | 19 => 3,
            5 => 2,
            13 => 6,
            1 => 12,
            r => unreachable!("prime {p} has residue {r} mod 24"),
        },
    }
}

/// `Some(h)` when `h | k`, where `h` is the required divisor at level `p`.
pub fn weight_condition(p: u64, k: i64) -> Option<u64> {
    debug_assert!(is_prime(p), "{p} is not prime");
    let h = required_divisor(p);
    (k.rem_euclid(h as i64) == 0).then_some(h)
}

/// Parameters of the prime-level count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeLevelParams {
    pub p: u64,
    pub k: i64,
    pub h: u64,
    pub d: u64,
    /// Least nonnegative residue of the order at `i∞`, modulo `d`.
    pub c: u64,
    /// Sum of the two cusp orders, `k(p+1)/12`.
    #[serde(rename = "L")]
    pub l: i64,
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

pub fn prime_params(p: u64, k: i64) -> Result<PrimeLevelParams> {
    check_prime_ge5(p)?;
    let h = weight_condition(p, k).ok_or(Error::Inadmissible { p, k })?;
    let (c, d) = solve_congruence(24, 2 * k, p - 1).ok_or(Error::Inadmissible { p, k })?;
    assert_eq!(d, (p - 1) / 24u64.gcd(&(p - 1)));
    assert_eq!(2 * h * d, p - 1, "p - 1 = 2hd");
    let numer = k * (p as i64 + 1);
    assert_eq!(numer % 12, 0, "L is integral at admissible weight");
    Ok(PrimeLevelParams {
        p,
        k,
        h,
        d,
        c: c as u64,
        l: numer / 12,
    })
}

/// `#{v ∈ [1, L−1] : v ≡ c (mod d)}`.
pub fn interior_count(c: u64, d: u64, l: i64) -> u64 {
    if l < 2 {
        return 0;
    }
    let (c, d, top) = (c as i64, d as i64, l - 1);
    // Points c + jd with 1 ≤ c + jd ≤ top.
    let first = if c >= 1 { 0 } else { 1 };
    let last = Integer::div_floor(&(top - c), &d);
    (last - first + 1).max(0) as u64
}

/// How the first case of the three-case count is keyed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseReading {
    /// Case one when `c = L − ⌊L/d⌋d`.
    ResidueEqualsC,
    /// Case one when `0 = L − ⌊L/d⌋d`.
    ResidueIsZero,
}

/// The three-case closed form for the number of cusp quotients.
pub fn three_case_count(params: &PrimeLevelParams, reading: CaseReading) -> i64 {
    let (l, d, c) = (params.l, params.d as i64, params.c as i64);
    let rem = l - Integer::div_floor(&l, &d) * d;
    let case_one = match reading {
        CaseReading::ResidueEqualsC => c == rem,
        CaseReading::ResidueIsZero => rem == 0,
    };
    if case_one {
        l / d - 1
    } else if c < rem {
        Integer::div_ceil(&l, &d)
    } else {
        Integer::div_floor(&l, &d)
    }
}

/// Number of cusp-form eta-quotients of weight `k` at prime level `p`.
pub fn count_cusp_eta(p: u64, k: i64) -> Result<u64> {
    let params = prime_params(p, k)?;
    let count = interior_count(params.c, params.d, params.l);
    assert_eq!(
        count as i64,
        three_case_count(&params, CaseReading::ResidueEqualsC),
        "closed forms disagree at p = {p}, k = {k}"
    );
    Ok(count)
}

/// The cusp quotients themselves, in increasing order at `i∞`.
pub fn list_cusp_eta(p: u64, k: i64) -> Result<Vec<EtaQuotient>> {
    let params = prime_params(p, k)?;
    let system = OrderSystem::new(p)?;
    let mut out = Vec::new();
    let mut v = params.c as i64;
    if v == 0 {
        v += params.d as i64;
    }
    while v < params.l {
        // Divisor order is (1, p): the order at i∞ belongs to d = p.
        let orders = CuspOrders::from_integers(p, &[params.l - v, v])?;
        let e = system
            .exponents(k, &orders)?
            .to_integral()
            .expect("prime-level points in the admissible class are integral");
        out.push(e);
        v += params.d as i64;
    }
    Ok(out)
}

/// The two non-cusp quotients `η(pz)^{pm}/η(z)^m` and `η(z)^{pm}/η(pz)^m`,
/// `m = 2k/(p−1)`, or nothing when `(p−1)/2 ∤ k`.
pub fn noncusp_eta(p: u64, k: i64) -> Vec<EtaQuotient> {
    let half = (p as i64 - 1) / 2;
    if k <= 0 || k % half != 0 {
        return Vec::new();
    }
    let m = k / half;
    let pm = p as i64 * m;
    let pair = [[-m, pm], [pm, -m]].map(|r| {
        let e = EtaQuotient::from_exponents(p, &r).expect("two exponents at prime level");
        assert_eq!(e.classify(), Classification::ModularForm, "{e}");
        e
    });
    pair.to_vec()
}

/// `gcd(gcd_{δ|N, δ≠N}(N/δ − 1), 24) | 2k`.
pub fn squarefree_weight_condition(n: u64, k: i64) -> Result<bool> {
    if !is_squarefree(n) {
        return Err(Error::NotSquareFree(n));
    }
    let g = divisors(n)
        .into_iter()
        .filter(|&d| d != n)
        .fold(0u64, |g, d| g.gcd(&(n / d - 1)))
        .gcd(&24);
    Ok((2 * k).rem_euclid(g as i64) == 0)
}

/// `gcd((p−1)/2, (q−1)/2, (pq−1)/2, 12) | k` for distinct odd primes.
pub fn pq_weight_condition(p: u64, q: u64, k: i64) -> bool {
    let g = ((p - 1) / 2).gcd(&((q - 1) / 2)).gcd(&((p * q - 1) / 2)).gcd(&12);
    k.rem_euclid(g as i64) == 0
}

/// Result of enumerating the holomorphic eta-quotients of one level and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub level: u64,
    pub weight: i64,
    pub admissible: bool,
    pub params: Option<PrimeLevelParams>,
    /// Sum of all cusp orders, `kσ₁(N)/12`.
    pub order_total: Rational,
    pub cusp: Vec<EtaQuotient>,
    pub noncusp: Vec<EtaQuotient>,
    /// Closed-form cusp count (prime levels `p ≥ 5` only).
    pub formula_count: Option<u64>,
    /// Holomorphic quotients found by the exponent-box scan.
    pub oracle_count: usize,
    /// Holomorphic quotients found by the integer-order lattice scan.
    pub lattice_count: usize,
    /// Whether the two scans returned the same quotients.
    pub scans_agree: bool,
}

impl EnumerationReport {
    pub fn cusp_count(&self) -> usize {
        self.cusp.len()
    }

    pub fn noncusp_count(&self) -> usize {
        self.noncusp.len()
    }

    /// Cusp then non-cusp quotients.
    pub fn all(&self) -> Vec<EtaQuotient> {
        self.cusp.iter().chain(&self.noncusp).cloned().collect()
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    level: u64,
    weight: i64,
    admissible: bool,
    h: Option<u64>,
    d: Option<u64>,
    c: Option<u64>,
    #[serde(rename = "L")]
    l: Option<i64>,
    order_total: String,
    cusp: &'a [EtaQuotient],
    noncusp: &'a [EtaQuotient],
    formula_count: Option<u64>,
    oracle_count: usize,
    lattice_count: usize,
    scans_agree: bool,
}

impl Serialize for EnumerationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            level: self.level,
            weight: self.weight,
            admissible: self.admissible,
            h: self.params.map(|x| x.h),
            d: self.params.map(|x| x.d),
            c: self.params.map(|x| x.c),
            l: self.params.map(|x| x.l),
            order_total: self.order_total.to_string(),
            cusp: &self.cusp,
            noncusp: &self.noncusp,
            formula_count: self.formula_count,
            oracle_count: self.oracle_count,
            lattice_count: self.lattice_count,
            scans_agree: self.scans_agree,
        }
        .serialize(serializer)
    }
}

/// Integer form of `24·v = M·r`, with `den·M⁻¹` kept integral.
struct IntegerSystem {
    level: u64,
    matrix: Vec<Vec<i64>>,
    inverse_scaled: Vec<Vec<i64>>,
    den: i64,
}

impl IntegerSystem {
    fn new(system: &OrderSystem) -> Self {
        let n = system.divisors().len();
        let to_i64 = |q: &Rational| q.to_integer().to_i64().expect("entry fits in i64");
        let matrix = (0..n)
            .map(|i| system.matrix().row(i).iter().map(to_i64).collect())
            .collect();
        let den = (0..n)
            .flat_map(|i| system.inverse().row(i).iter())
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let inverse_scaled = (0..n)
            .map(|i| {
                system
                    .inverse()
                    .row(i)
                    .iter()
                    .map(|q| to_i64(&(q * Rational::from_integer(den.clone()))))
                    .collect()
            })
            .collect();
        Self {
            level: system.level(),
            matrix,
            inverse_scaled,
            den: den.to_i64().expect("denominator fits in i64"),
        }
    }

    fn orders24(&self, r: &[i64]) -> Vec<i128> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(r).map(|(&m, &x)| m as i128 * x as i128).sum())
            .collect()
    }

    /// Exponents for integer orders `v`, when they are integral.
    fn exponents(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.inverse_scaled
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(v).map(|(&a, &x)| a as i128 * 24 * x as i128).sum();
                (s % self.den as i128 == 0).then(|| (s / self.den as i128) as i64)
            })
            .collect()
    }

    /// Keeps `r` when it is a weight-`k` GHN quotient with nonnegative orders.
    fn accept(&self, r: &[i64], k: i64) -> Option<EtaQuotient> {
        if r.iter().sum::<i64>() != 2 * k {
            return None;
        }
        if self.orders24(r).iter().any(|&v| v < 0) {
            return None;
        }
        let e = EtaQuotient::from_exponents(self.level, r).expect("one exponent per divisor");
        e.ghn_check().unwrap_or(false).then_some(e)
    }
}

fn sort_canonical(list: &mut [EtaQuotient]) {
    list.sort_by_cached_key(|e| (e.weighted_sum(), e.exponent_vec()));
}

/// All weak compositions of `total` into `parts` nonnegative parts, with the
/// given first part.
fn compositions_from(first: i64, total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, left: i64, parts: usize, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            rec(prefix, left - x, parts - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 1 {
        if first == total {
            out.push(vec![first]);
        }
        return out;
    }
    rec(&mut vec![first], total - first, parts - 1, &mut out);
    out
}

/// Scan of nonnegative integer order vectors on the hyperplane `Σv = kσ₁(N)/12`.
fn lattice_scan(sys: &IntegerSystem, total: &Rational, k: i64, parts: usize) -> Vec<EtaQuotient> {
    if !total.is_integer() {
        return Vec::new();
    }
    let t = total.to_integer().to_i64().expect("order total fits in i64");
    let mut found: Vec<EtaQuotient> = (0..=t)
        .into_par_iter()
        .flat_map_iter(|first| {
            compositions_from(first, t, parts)
                .into_iter()
                .filter_map(|v| sys.exponents(&v).and_then(|r| sys.accept(&r, k)))
        })
        .collect();
    sort_canonical(&mut found);
    found
}

/// Scan of every integer exponent vector in the bounding box of the preimage
/// of the order simplex.
fn box_scan(system: &OrderSystem, sys: &IntegerSystem, total: &Rational, k: i64) -> Vec<EtaQuotient> {
    let n = system.divisors().len();
    let scale = total * int(24);
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for col in 0..n {
        for row in 0..n {
            let x = system.inverse().get(row, col) * &scale;
            lo[row] = lo[row].min(x.floor().to_integer().to_i64().expect("box fits in i64"));
            hi[row] = hi[row].max(x.ceil().to_integer().to_i64().expect("box fits in i64"));
        }
    }
    if n == 1 {
        return (lo[0]..=hi[0]).filter_map(|r| sys.accept(&[r], k)).collect();
    }
    let (lo, hi) = (&lo, &hi);
    let mut found: Vec<EtaQuotient> = (lo[0]..=hi[0])
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut hits = Vec::new();
            let mut r = vec![0i64; n];
            r[0] = first;
            box_rec(sys, k, lo, hi, &mut r, 1, &mut hits);
            hits
        })
        .collect();
    sort_canonical(&mut found);
    found
}

fn box_rec(
    sys: &IntegerSystem,
    k: i64,
    lo: &[i64],
    hi: &[i64],
    r: &mut Vec<i64>,
    i: usize,
    hits: &mut Vec<EtaQuotient>,
) {
    let n = r.len();
    if i == n - 1 {
        // The weight fixes the last exponent.
        let last = 2 * k - r[..n - 1].iter().sum::<i64>();
        if (lo[i]..=hi[i]).contains(&last) {
            r[i] = last;
            if let Some(e) = sys.accept(r, k) {
                hits.push(e);
            }
        }
        return;
    }
    for x in lo[i]..=hi[i] {
        r[i] = x;
        box_rec(sys, k, lo, hi, r, i + 1, hits);
    }
}

fn split(list: Vec<EtaQuotient>) -> (Vec<EtaQuotient>, Vec<EtaQuotient>) {
    list.into_iter()
        .partition(|e| e.classify() == Classification::CuspForm)
}

/// Enumerates the holomorphic eta-quotients of weight `k` at a square-free
/// level by two independent scans.
pub fn enumerate_squarefree(level: u64, k: i64) -> Result<EnumerationReport> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("weight {k} < 1")));
    }
    let system = OrderSystem::new(level)?;
    let sys = IntegerSystem::new(&system);
    let total = system.order_total(k);
    let lattice = lattice_scan(&sys, &total, k, system.divisors().len());
    let oracle = box_scan(&system, &sys, &total, k);
    let scans_agree = lattice == oracle;
    let (lattice_count, oracle_count) = (lattice.len(), oracle.len());
    let (cusp, noncusp) = split(oracle);
    Ok(EnumerationReport {
        level,
        weight: k,
        admissible: squarefree_weight_condition(level, k)?,
        params: None,
        order_total: total,
        cusp,
        noncusp,
        formula_count: None,
        oracle_count,
        lattice_count,
        scans_agree,
    })
}

/// Dispatches to the prime-level machinery for primes `p ≥ 5` and to the
/// square-free scans otherwise. Prime reports carry the walk's listing and
/// the closed-form count alongside the scan counts.
pub fn enumerate(level: u64, k: i64) -> Result<EnumerationReport> {
    let mut report = enumerate_squarefree(level, k)?;
    if !(is_prime(level) && level >= 5) {
        return Ok(report);
    }
    let p = level;
    match weight_condition(p, k) {
        None => {
            report.admissible = false;
            report.cusp.clear();
            report.noncusp.clear();
        }
        Some(_) => {
            report.admissible = true;
            report.params = Some(prime_params(p, k)?);
            report.formula_count = Some(count_cusp_eta(p, k)?);
            report.cusp = list_cusp_eta(p, k)?;
            report.noncusp = noncusp_eta(p, k);
            sort_canonical(&mut report.noncusp);
        }
    }
    Ok(report)
}

/// Lattice-point counts on the `pq` hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PqBound {
    /// Nonnegative integer points on `Σv = k(p+1)(q+1)/12`.
    pub raw: u64,
    /// Those that also satisfy the six congruences.
    pub filtered: u64,
}

/// The six congruences on `(v₁, v_p, v_q, v_pq)` implied by integral exponents.
pub fn pq_congruences_hold(p: u64, q: u64, k: i64, v: [i64; 4]) -> bool {
    let [v1, vp, vq, vpq] = v.map(|x| 24 * x as i128);
    let (p, q, k) = (p as i128, q as i128, k as i128);
    let m = (p - 1) * (q - 1);
    (v1 + vp) % (p + 1) == 0
        && (v1 + vq) % (q + 1) == 0
        && (vp + vpq) % (q + 1) == 0
        && (vq + vpq) % (p + 1) == 0
        && (v1 + vpq - 2 * k * (1 + p * q)).rem_euclid(m) == 0
        && (vp + vq - 2 * k * (p + q)).rem_euclid(m) == 0
}

pub fn pq_upper_bound(p: u64, q: u64, k: i64) -> PqBound {
    assert!(p != q && p > 3 && q > 3, "need distinct primes above 3");
    let numer = k * ((p + 1) * (q + 1)) as i64;
    if numer % 12 != 0 || numer < 0 {
        return PqBound { raw: 0, filtered: 0 };
    }
    let t = numer / 12;
    let (mut raw, mut filtered) = (0u64, 0u64);
    for v1 in 0..=t {
        for vp in 0..=t - v1 {
            for vq in 0..=t - v1 - vp {
                raw += 1;
                let vpq = t - v1 - vp - vq;
                if pq_congruences_hold(p, q, k, [v1, vp, vq, vpq]) {
                    filtered += 1;
                }
            }
        }
    }
    PqBound { raw, filtered }
}

/// Integrality of every cusp order of a quotient.
pub fn has_integral_orders(e: &EtaQuotient) -> bool {
    e.cusp_orders().is_integral()
}

/// Canonical set view of a listing, for order-insensitive comparisons.
pub fn as_set(list: &[EtaQuotient]) -> BTreeSet<String> {
    list.iter().map(|e| e.to_string()).collect()
}

/// Orders at `i∞` of a listing, used to check the echelon ordering.
pub fn orders_at_infinity(list: &[EtaQuotient]) -> Vec<Rational> {
    list.iter().map(|e| e.cusp_orders().at_infinity().clone()).collect()
}
