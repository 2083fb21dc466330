use etaq_core::dims::{dim_gamma0_p, dim_level1, dim_quadratic, DimensionReport};
use etaq_core::enumerate::{
    count_cusp_eta, enumerate, noncusp_eta, prime_params, three_case_count, CaseReading,
};
use etaq_core::qseries::q_expansion;
use etaq_core::verify::{
    four_p_quotient, fractional_power_lift, independence_rank, level8_quotient, prime_line_orders, ratio_series,
    sweep, verify_4p_family, SweepRow,
};
use etaq_core::{EtaQuotient, QSeries};
use num_traits::{One, Signed, Zero};
use serde_json::{json, to_value, Value};

use crate::output::{Output, Table};

type CmdResult = Result<Output, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn value(v: impl serde::Serialize) -> Value {
    to_value(v).expect("serializable payload")
}

fn positive_weight(k: i64) -> Result<(), String> {
    if k <= 0 {
        return Err(format!("weight must be positive (got {k}); weight 0 is excluded from all counts"));
    }
    Ok(())
}

pub fn enumerate_cmd(level: u64, k: i64, family: bool) -> CmdResult {
    positive_weight(k)?;
    if family {
        return family_cmd(level, k);
    }
    let report = enumerate(level, k).map_err(err)?;
    let mut table = Table::new(&["kind", "quotient", "v_infinity", "classification", "character"]);
    for (kind, list) in [("cusp", &report.cusp), ("noncusp", &report.noncusp)] {
        for e in list {
            let character = e.character().map(|c| c.to_string()).unwrap_or_default();
            table.push(vec![
                kind.into(),
                e.to_string().into(),
                e.cusp_orders().at_infinity().clone().into(),
                e.classify().to_string().into(),
                character.into(),
            ]);
        }
    }
    let mut out = Output::new(value(&report), table);
    if !report.scans_agree {
        out.diagnostics.push(format!(
            "lattice scan found {} quotients, exponent-box scan {}",
            report.lattice_count, report.oracle_count
        ));
    }
    if let Some(n) = report.formula_count {
        if n as usize != report.cusp_count() {
            out.diagnostics
                .push(format!("closed form gives {n} cusp quotients, listing has {}", report.cusp_count()));
            out.failed = true;
        }
    }
    Ok(out)
}

fn family_cmd(level: u64, k: i64) -> CmdResult {
    let (p, e) = match level {
        8 => (2, level8_quotient(k)),
        n if n % 4 == 0 => (n / 4, four_p_quotient(n / 4, k)),
        n => return Err(format!("level {n} is neither 8 nor 4p")),
    };
    let holds = verify_4p_family(p, k).map_err(err)?;
    let mut table = Table::new(&["level", "weight", "quotient", "classification", "holds"]);
    table.push(vec![level.into(), k.into(), e.to_string().into(), e.classify().to_string().into(), holds.into()]);
    let mut out = Output::new(
        json!({"level": level, "weight": k, "quotient": e, "classification": e.classify(), "holds": holds}),
        table,
    );
    out.failed = !holds;
    Ok(out)
}

/// `q − 24*q^2 + 252*q^3 + O(q^4)`, omitting zero terms.
pub fn series_text(s: &QSeries) -> String {
    let mut out = String::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let n = s.leading_exponent() + i as i64;
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let unit = mag.is_one();
        let power = match n {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{n}"),
        };
        match (unit, power.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&power),
            (false, true) => out.push_str(&mag.to_string()),
            (false, false) => out.push_str(&format!("{mag}*{power}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(&format!(" + O(q^{})", s.precision()));
    out
}

pub fn qexp_cmd(eta: &str, level: Option<u64>, terms: usize) -> CmdResult {
    let e: EtaQuotient = match level {
        Some(n) => EtaQuotient::parse_with_level(eta, n),
        None => eta.parse(),
    }
    .map_err(err)?;
    let n0 = e.weighted_sum().div_euclid(24);
    let s = q_expansion(&e, n0 + terms as i64).map_err(err)?;
    let mut table = Table::new(&["n", "coefficient"]);
    for (i, c) in s.coeffs().iter().enumerate() {
        table.push(vec![(s.leading_exponent() + i as i64).into(), c.to_string().into()]);
    }
    let mut out = Output::new(json!({"quotient": e, "level": e.level(), "series": s}), table);
    out.text = Some(series_text(&s));
    Ok(out)
}

fn dims_table(r: &DimensionReport) -> Table {
    let mut t = Table::new(&["level", "weight", "character", "dim_cusp", "dim_eisenstein", "dim_total", "source"]);
    t.push(vec![
        r.level.into(),
        r.weight.into(),
        value(r.character).as_str().unwrap_or_default().into(),
        r.dim_cusp.into(),
        r.dim_eisenstein.into(),
        r.dim_total.into(),
        value(r.source).as_str().unwrap_or_default().into(),
    ]);
    t
}

pub fn dims_cmd(level: u64, k: i64, quadratic: bool) -> CmdResult {
    let report = match (level, quadratic) {
        (1, false) => dim_level1(k),
        (1, true) => return Err("level 1 has no quadratic character".into()),
        (p, false) => dim_gamma0_p(p, k).map_err(err)?,
        (p, true) => dim_quadratic(p, k).map_err(err)?,
    };
    Ok(Output::new(value(&report), dims_table(&report)))
}

pub fn count_cmd(p: u64, k: i64) -> CmdResult {
    positive_weight(k)?;
    let params = prime_params(p, k).map_err(err)?;
    let count = count_cusp_eta(p, k).map_err(err)?;
    let case_c = three_case_count(&params, CaseReading::ResidueEqualsC);
    let case_zero = three_case_count(&params, CaseReading::ResidueIsZero);
    let noncusp = noncusp_eta(p, k).len();
    let mut table = Table::new(&["p", "k", "h", "d", "c", "L", "count_cusp", "three_case", "three_case_alt", "count_noncusp"]);
    table.push(vec![
        p.into(),
        k.into(),
        params.h.into(),
        params.d.into(),
        params.c.into(),
        params.l.into(),
        count.into(),
        case_c.into(),
        case_zero.into(),
        noncusp.into(),
    ]);
    let mut out = Output::new(
        json!({
            "params": params,
            "count_cusp": count,
            "three_case": case_c,
            "three_case_alt": case_zero,
            "count_noncusp": noncusp,
        }),
        table,
    );
    if case_zero != count as i64 {
        out.diagnostics.push(format!(
            "the reading keyed on L mod d = 0 gives {case_zero} instead of {count}"
        ));
    }
    Ok(out)
}

pub fn verify_cmd(level: u64, k: i64) -> CmdResult {
    positive_weight(k)?;
    let report = enumerate(level, k).map_err(err)?;
    let cert = independence_rank(&report.all(), k, level).map_err(err)?;
    let mut table = Table::new(&["level", "weight", "count", "rows", "cols", "rank", "independent"]);
    table.push(vec![
        cert.level.into(),
        cert.weight.into(),
        cert.count.into(),
        cert.rows.into(),
        cert.cols.into(),
        cert.rank.into(),
        cert.independent.into(),
    ]);
    let mut out = Output::new(value(&cert), table);
    for g in &cert.groups {
        if g.rank < g.count {
            out.diagnostics.push(format!(
                "character ({}/.): {} quotients span rank {}",
                g.discriminant, g.count, g.rank
            ));
        }
    }
    out.failed = !cert.independent;
    Ok(out)
}

pub fn ratio_cmd(p: u64, kmax: i64) -> CmdResult {
    let (rows, diagnostics) = ratio_series(p, kmax).map_err(err)?;
    let mut table = Table::new(&["p", "k", "count", "dim", "ratio", "limit"]);
    for r in &rows {
        table.push(vec![
            r.p.into(),
            r.k.into(),
            r.count.into(),
            r.dim.into(),
            r.ratio.clone().into(),
            r.limit.clone().into(),
        ]);
    }
    let mut out = Output::new(value(&rows), table);
    out.diagnostics = diagnostics;
    Ok(out)
}

pub fn lift_cmd(p: u64, k: i64, v1: i64) -> CmdResult {
    positive_weight(k)?;
    let orders = prime_line_orders(p, k, v1).map_err(err)?;
    let cert = fractional_power_lift(p, k, &orders).map_err(err)?;
    let mut table = Table::new(&["t", "root", "lifted", "weight", "ghn", "classification"]);
    table.push(vec![
        cert.t.into(),
        cert.root.to_string().into(),
        cert.lifted.to_string().into(),
        cert.weight.into(),
        cert.ghn.into(),
        cert.classification.to_string().into(),
    ]);
    let mut out = Output::new(value(&cert), table);
    out.failed = !cert.ghn;
    Ok(out)
}

pub fn sweep_cmd(primes: &[u64], kmax: i64) -> CmdResult {
    let (rows, diagnostics) = sweep(primes, kmax);
    let mut table = Table::new(&SweepRow::HEADER);
    for r in &rows {
        table.push(vec![
            r.p.into(),
            r.k.into(),
            r.count_cusp.into(),
            r.count_noncusp.into(),
            r.dim_s.into(),
            r.ratio.clone().into(),
            r.rank.into(),
            r.independent.into(),
        ]);
    }
    let failed = rows.iter().any(|r| !r.independent);
    let mut out = Output::new(value(&rows), table);
    out.diagnostics = diagnostics;
    out.failed = failed;
    Ok(out)
}
