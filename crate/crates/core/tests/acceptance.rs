//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL` line with its elapsed time and budget.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etaq_core::dims::{
    a3_set, a4_set, character_sum_a3, character_sum_a3_cases, character_sum_a4, character_sum_a4_cases, dim_gamma0_p,
    dim_level1, g0, mu02, mu03,
};
use etaq_core::enumerate::{
    count_cusp_eta, enumerate, enumerate_squarefree, interior_count, list_cusp_eta, noncusp_eta, pq_upper_bound,
    prime_params, three_case_count, CaseReading,
};
use etaq_core::eta::{CuspOrders, OrderSystem};
use etaq_core::numthy::{divisors, int, is_squarefree, primes_between, rat, sigma1};
use etaq_core::qseries::{eta_power, q_expansion, sturm_bound};
use etaq_core::verify::{fractional_power_lift, independence_rank, prime_line_orders, span_ratio, verify_4p_family};
use etaq_core::{Classification, EtaQuotient, QSeries, Rational};

/// Runs one criterion, prints its status line, and fails on an error or an
/// overrun of the time budget.
fn criterion(n: u32, title: &str, budget: Duration, check: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let verdict = match (&outcome, elapsed <= budget) {
        (Ok(()), true) => "PASS",
        _ => "FAIL",
    };
    println!("criterion {n:>2}: {verdict} {title} ({elapsed:.2?}, budget {budget:?})");
    if let Err(msg) = outcome {
        panic!("criterion {n}: {msg}");
    }
    assert!(elapsed <= budget, "criterion {n}: {elapsed:?} exceeds {budget:?}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> EtaQuotient {
    s.parse().unwrap()
}

#[test]
fn criterion_01_level_one_dimensions() {
    criterion(1, "level-one dimensions", Duration::from_millis(1), || {
        let m4 = dim_level1(4);
        let m12 = dim_level1(12);
        ensure(m4.dim_total == Some(1), || format!("dim M4 = {:?}", m4.dim_total))?;
        ensure(m12.dim_total == Some(2), || format!("dim M12 = {:?}", m12.dim_total))?;
        ensure(m12.dim_cusp == 1, || format!("dim S12 = {}", m12.dim_cusp))
    });
}

#[test]
fn criterion_02_level_eleven_weight_two() {
    criterion(2, "unique weight-2 level-11 cusp quotient", Duration::from_millis(10), || {
        let report = enumerate(11, 2).map_err(|e| e.to_string())?;
        let expected = q("1:2,11:2");
        ensure(report.cusp == vec![expected.clone()], || format!("cusp list {:?}", report.cusp))?;
        ensure(report.noncusp.is_empty(), || "unexpected non-cusp quotients".into())?;
        let bound = sturm_bound(11, 2) as i64;
        let s = q_expansion(&expected, bound).map_err(|e| e.to_string())?;
        ensure(s.leading_exponent() == 1 && s.coefficient(1) == Some(BigInt::one()), || {
            format!("expansion {s}")
        })?;
        let dim = dim_gamma0_p(11, 2).map_err(|e| e.to_string())?.dim_cusp;
        ensure(dim == 1 && g0(11) == Ok(1), || format!("dim S2(11) = {dim}"))?;
        let cert = independence_rank(&report.cusp, 2, 11).map_err(|e| e.to_string())?;
        ensure(cert.rank as u64 == dim, || format!("span rank {} vs dim {dim}", cert.rank))
    });
}

#[test]
fn criterion_03_counting_theorem() {
    criterion(3, "three-case count = interior count = lattice walk", Duration::from_secs(5), || {
        let mut cells = 0;
        for p in primes_between(5, 98) {
            let system = OrderSystem::new(p).unwrap();
            for k in 1..=48 {
                let Ok(params) = prime_params(p, k) else { continue };
                cells += 1;
                let formula = three_case_count(&params, CaseReading::ResidueEqualsC);
                let unified = interior_count(params.c, params.d, params.l) as i64;
                // Walk every interior point of the line and keep those with
                // integral exponents.
                let walk = (1..params.l)
                    .filter(|&v| {
                        let orders = CuspOrders::from_integers(p, &[params.l - v, v]).unwrap();
                        system.exponents(k, &orders).unwrap().is_integral()
                    })
                    .count() as i64;
                let listed = list_cusp_eta(p, k).map_err(|e| e.to_string())?.len() as i64;
                let counted = count_cusp_eta(p, k).map_err(|e| e.to_string())? as i64;
                ensure(
                    formula == unified && unified == walk && walk == listed && listed == counted,
                    || format!("p = {p}, k = {k}: {formula} {unified} {walk} {listed} {counted}"),
                )?;
            }
        }
        ensure(cells > 0, || "empty grid".into())
    });
}

#[test]
fn criterion_04_noncusp_theorem() {
    criterion(4, "exactly two non-cusp quotients", Duration::from_secs(1), || {
        for p in [5u64, 7, 11, 13] {
            for m in 1..=5i64 {
                let k = m * (p as i64 - 1) / 2;
                let pair = noncusp_eta(p, k);
                let scan = enumerate_squarefree(p, k).map_err(|e| e.to_string())?;
                ensure(pair.len() == 2 && scan.noncusp.len() == 2, || format!("p = {p}, m = {m}"))?;
                for e in &pair {
                    ensure(scan.noncusp.contains(e), || format!("{e} missing from the scan"))?;
                    ensure(e.ghn_check() == Ok(true), || format!("{e} fails GHN"))?;
                    let zeros = e.cusp_orders().values().filter(|v| v.is_zero()).count();
                    ensure(zeros == 1, || format!("{e} has {zeros} zero orders"))?;
                    let trivial = e.character().map_err(|e| e.to_string())?.is_trivial();
                    ensure(trivial == (m % 2 == 0), || format!("{e}: trivial character = {trivial}"))?;
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_linear_independence() {
    criterion(5, "Sturm-matrix rank = quotient count", Duration::from_secs(30), || {
        for p in primes_between(5, 32) {
            for k in 1..=24 {
                if prime_params(p, k).is_err() {
                    continue;
                }
                let quotients = enumerate(p, k).map_err(|e| e.to_string())?.all();
                let cert = independence_rank(&quotients, k, p).map_err(|e| e.to_string())?;
                ensure(cert.rank == quotients.len(), || {
                    format!("p = {p}, k = {k}: rank {} of {}", cert.rank, quotients.len())
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_ratio() {
    criterion(6, "ratio at p = 11, k = 240 within 1/100 of 1/5", Duration::from_millis(100), || {
        let r = span_ratio(11, 240).map_err(|e| e.to_string())?;
        let gap = (&r.ratio - rat(1, 5)).abs();
        ensure(gap < rat(1, 100), || format!("ratio {} (gap {gap})", r.ratio))
    });
}

#[test]
fn criterion_07_fractional_lift() {
    criterion(7, "fractional lift at p = 11, k = 6, v = 1", Duration::from_millis(10), || {
        let orders = prime_line_orders(11, 6, 1).map_err(|e| e.to_string())?;
        let cert = fractional_power_lift(11, 6, &orders).map_err(|e| e.to_string())?;
        ensure(cert.root.exponent(1) == rat(54, 5) && cert.root.exponent(11) == rat(6, 5), || {
            format!("root {}", cert.root)
        })?;
        ensure(cert.t == 5 && cert.weight == 30 && cert.ghn, || format!("{cert:?}"))?;
        ensure(cert.lifted.cusp_orders().values().all(|v| *v > Rational::zero()), || {
            format!("orders of {}", cert.lifted)
        })?;
        ensure(cert.classification == Classification::CuspForm, || format!("{:?}", cert.classification))
    });
}

#[test]
fn criterion_08_squarefree_enumeration() {
    criterion(8, "square-free dual scans and pq sandwich", Duration::from_secs(10), || {
        let r = enumerate_squarefree(15, 2).map_err(|e| e.to_string())?;
        ensure(r.scans_agree, || "N = 15 scans disagree".into())?;
        ensure(r.cusp.contains(&q("1:1,3:1,5:1,15:1")), || format!("{:?}", r.cusp))?;
        for (p, qq) in [(5u64, 7u64), (5, 11), (7, 11)] {
            for k in 1..=2 {
                let exact = enumerate_squarefree(p * qq, k).map_err(|e| e.to_string())?.oracle_count as u64;
                let b = pq_upper_bound(p, qq, k);
                ensure(exact <= b.filtered && b.filtered <= b.raw, || {
                    format!("({p}, {qq}), k = {k}: {exact} <= {} <= {}", b.filtered, b.raw)
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_families() {
    criterion(9, "level-8 and level-4p families", Duration::from_secs(1), || {
        for k in 0..=10 {
            ensure(verify_4p_family(2, k) == Ok(true), || format!("level 8, k = {k}"))?;
        }
        for p in [5u64, 7, 11, 13] {
            for k in (2..=20).step_by(2) {
                ensure(verify_4p_family(p, k) == Ok(true), || format!("p = {p}, k = {k}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_character_sums() {
    criterion(10, "character-sum case tables", Duration::from_secs(1), || {
        for p in primes_between(2, 200) {
            ensure(character_sum_a4(p) == character_sum_a4_cases(p), || format!("A4 at {p}"))?;
            ensure(character_sum_a3(p) == character_sum_a3_cases(p), || format!("A3 at {p}"))?;
            ensure(a4_set(p).len() as u64 == mu02(p), || format!("|A4({p})|"))?;
            ensure(a3_set(p).len() as u64 == mu03(p), || format!("|A3({p})|"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_property_suites() {
    criterion(11, "seeded property suites", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_e7a0);
        let levels: Vec<u64> = (1..=70).filter(|&n| is_squarefree(n)).collect();
        for case in 0..200 {
            let n = levels[rng.gen_range(0..levels.len())];
            let divs = divisors(n);
            let mut r: Vec<i64> = divs.iter().map(|_| rng.gen_range(-8..=8)).collect();
            // Shift r₁ so that Σδr ≡ 0 (mod 24), then double if the weight
            // would be half-integral.
            let weighted: i64 = divs.iter().zip(&r).map(|(&d, &x)| d as i64 * x).sum();
            r[0] -= weighted.rem_euclid(24);
            if r.iter().sum::<i64>() % 2 != 0 {
                r.iter_mut().for_each(|x| *x *= 2);
            }
            let e = EtaQuotient::from_exponents(n, &r).unwrap();
            let k = e.weight().ok_or_else(|| format!("case {case}: odd exponent sum"))?;

            let orders = e.cusp_orders();
            ensure(orders.sum() == int(k) * int(sigma1(n) as i64) / int(12), || {
                format!("case {case}: order sum at {e}")
            })?;

            let back = OrderSystem::new(n)
                .unwrap()
                .exponents(k, &orders)
                .map_err(|err| err.to_string())?
                .to_integral();
            ensure(back.as_ref() == Some(&e), || format!("case {case}: round trip of {e}"))?;

            let s = q_expansion(&e, orders.at_infinity().to_integer().try_into().unwrap_or(0) + 8)
                .map_err(|err| err.to_string())?;
            ensure(int(s.leading_exponent()) == *orders.at_infinity(), || {
                format!("case {case}: leading exponent of {e}")
            })?;
            ensure(s.coefficient(s.leading_exponent()) == Some(BigInt::one()), || {
                format!("case {case}: leading coefficient of {e}")
            })?;
        }
        let product = eta_power(1, 1, 50).mul(&eta_power(1, -1, 50));
        ensure(product == QSeries::one(50), || "eta times partitions".into())
    });
}
