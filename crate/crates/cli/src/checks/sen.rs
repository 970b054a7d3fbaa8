use pdcalc::senhom::{
    build_bokstedt, build_dvr_square, build_perfectoid_serre, build_serre_cmn, build_zpn_serre, dvr_precision_for,
    omega2yn_cohomology, BokstedtVariant, DVRDescriptor,
};
use pdcalc::HomologyReport;
use serde_json::{json, Value};

use super::{guard, Check};

pub fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn report_json(r: &HomologyReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

/// Torsion `[p^e]`, or nothing when `e = 0`.
fn cyclic(p: u64, e: u32) -> Vec<u64> {
    if e == 0 {
        vec![]
    } else {
        vec![p.pow(e)]
    }
}

/// First degree where `r` differs from the expected `(free rank, torsion)`.
fn compare(r: &HomologyReport, expected: impl IntoIterator<Item = (i64, usize, Vec<u64>)>) -> Option<String> {
    for (d, free, mut torsion) in expected {
        torsion.sort_unstable();
        let got = r.at(d);
        if got.free_rank != free || got.torsion != torsion {
            return Some(format!(
                "degree {d}: free rank {} torsion {:?}, expected free rank {free} torsion {torsion:?}",
                got.free_rank, got.torsion
            ));
        }
    }
    None
}

/// `T1`: `Z/p^{v_p(j)+1}` in degree `2pj - 1`. `Jp`: `Z/p^{v_p(j)}` in `2j - 1`.
pub fn bokstedt(p: u64, variant: BokstedtVariant, bound: i64) -> Check {
    let name = format!("sen.bokstedt[p={p},variant={variant},D={bound}]");
    guard(&name, || {
        let r = build_bokstedt(p, variant, bound)?;
        let step = match variant {
            BokstedtVariant::T1 => 2 * p as i64,
            BokstedtVariant::Jp => 2,
        };
        let mut expected = vec![(0, 1, vec![])];
        for j in 1..=((bound + 1) / step) as u64 {
            let e = vp(j, p) + u32::from(variant == BokstedtVariant::T1);
            expected.push((step * j as i64 - 1, 0, cyclic(p, e)));
        }
        Ok(Check::verdict(&name, report_json(&r), compare(&r, expected)))
    })
}

/// `Z/p^{v_p(pk)}` in degree `2kp^n - 1`, zero in even positive degrees.
pub fn cmn(p: u64, n: u32, bound: i64) -> Check {
    let name = format!("sen.cmn[p={p},n={n},D={bound}]");
    guard(&name, || {
        let r = build_serre_cmn(p, n, bound)?;
        let step = 2 * p.pow(n) as i64;
        let mut expected = vec![(0, 1, vec![])];
        expected.extend((1..=bound / 2).map(|d| (2 * d, 0, vec![])));
        for k in 1..=((bound + 1) / step) as u64 {
            expected.push((step * k as i64 - 1, 0, cyclic(p, vp(p * k, p))));
        }
        Ok(Check::verdict(&name, report_json(&r), compare(&r, expected)))
    })
}

/// Free of rank one in even degrees, zero in odd degrees, and every
/// `d^{2p}` kernel of rank one.
pub fn perfectoid(p: u64, bound: i64) -> Check {
    let name = format!("sen.perfectoid[p={p},D={bound}]");
    guard(&name, || {
        let s = build_perfectoid_serre(p, bound)?;
        let expected = (0..=bound).map(|d| (d, usize::from(d % 2 == 0), vec![]));
        let mut failure = compare(&s.report, expected);
        if failure.is_none() {
            if let Some((d, r)) = s.kernel_ranks.iter().find(|(_, &r)| r != 1) {
                failure = Some(format!("kernel in degree {d} has rank {r}"));
            }
        }
        let payload = json!({ "report": report_json(&s.report), "kernel_ranks": s.kernel_ranks });
        Ok(Check::verdict(&name, payload, failure))
    })
}

/// The p-part of `⊕_{j <= k} Z/j`.
pub fn harmonic_torsion(p: u64, k: u64) -> Vec<u64> {
    (1..=k).map(|j| vp(j, p)).filter(|&e| e > 0).map(|e| p.pow(e)).collect()
}

/// Homology `⊕_{j<=k} Z/j` (p-part) in degree `2k - 1`, cohomology
/// `Z ⊕ ⊕_{j<=k} Z/p^{v_p(j)}` in degree `2k`, and their agreement under
/// the universal coefficient theorem.
pub fn omega2yn(p: u64, n: u32, bound: i64) -> Check {
    let name = format!("sen.omega2yn[p={p},n={n},D={bound}]");
    if p == 2 {
        return Check::skipped(&name, "the operator is defined for odd p only");
    }
    guard(&name, || {
        let hom = build_zpn_serre(p, n, bound)?;
        let coh = omega2yn_cohomology(p, n, bound)?;
        let kmax = ((bound + 1) / 2) as u64;
        let mut failure =
            compare(&hom, (1..=kmax).map(|k| (2 * k as i64 - 1, 0, harmonic_torsion(p, k)))).map(|s| format!("homology {s}"));
        if failure.is_none() {
            failure = compare(&coh, (1..=(bound / 2) as u64).map(|k| (2 * k as i64, 1, harmonic_torsion(p, k))))
                .map(|s| format!("cohomology {s}"));
        }
        if failure.is_none() {
            failure = (1..=(bound / 2)).find_map(|k| {
                let (h, c) = (hom.at(2 * k - 1), coh.at(2 * k));
                (h.torsion != c.torsion).then(|| {
                    format!("degree {k}: homology torsion {:?} but cohomology torsion {:?}", h.torsion, c.torsion)
                })
            });
        }
        let payload = json!({ "homology": report_json(&hom), "cohomology": report_json(&coh) });
        Ok(Check::verdict(&name, payload, failure))
    })
}

/// Homology of the `Z/p^n` operator alone (degree `2k - 1` pattern).
pub fn zpn(p: u64, n: u32, bound: i64) -> Check {
    let name = format!("sen.zpn[p={p},n={n},D={bound}]");
    if p == 2 {
        return Check::skipped(&name, "the operator is defined for odd p only");
    }
    guard(&name, || {
        let r = build_zpn_serre(p, n, bound)?;
        let kmax = ((bound + 1) / 2) as u64;
        let failure = compare(&r, (1..=kmax).map(|k| (2 * k as i64 - 1, 0, harmonic_torsion(p, k))));
        Ok(Check::verdict(&name, report_json(&r), failure))
    })
}

/// Reports for different heights agree degree by degree.
pub fn omega2yn_independence(p: u64, heights: &[u32], bound: i64) -> Check {
    let name = format!("sen.omega2yn-height-independence[p={p},n={heights:?},D={bound}]");
    guard(&name, || {
        let mut reports = Vec::new();
        for &n in heights {
            reports.push((n, build_zpn_serre(p, n, bound)?, omega2yn_cohomology(p, n, bound)?));
        }
        let mut failure = None;
        if let Some((n0, h0, c0)) = reports.first() {
            'outer: for (n, h, c) in &reports[1..] {
                for d in -1..=bound {
                    for (what, a, b) in [("homology", h0, h), ("cohomology", c0, c)] {
                        if a.at(d) != b.at(d) {
                            failure = Some(format!(
                                "{what} degree {d}: n = {n0} gives {:?}, n = {n} gives {:?}",
                                a.at(d).torsion,
                                b.at(d).torsion
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        Ok(Check::verdict(&name, json!({ "heights": heights }), failure))
    })
}

/// `π`-adic valuation of `E'(π)` for monic Eisenstein `E` with ascending
/// lower coefficients `c`.
pub fn e_prime_valuation(p: u64, c: &[i64]) -> u32 {
    let e = c.len() as u64;
    let mut terms = vec![(e, e as u32 - 1)];
    terms.extend(c.iter().enumerate().skip(1).map(|(i, &a)| (i as u64 * a.unsigned_abs(), i as u32 - 1)));
    terms.iter().filter(|(a, _)| *a != 0).map(|&(a, k)| e as u32 * vp(a, p) + k).min().unwrap_or(0)
}

/// Degree `2j - 1` is cyclic `R/(j E'(π))`, the `∇` part alone is
/// `⊕_{i<j} R/E'(π)`, and degree `2p - 1` is cyclic of order `|R/pE'(π)|`.
/// Orders are `|R/π^v| = p^v`.
pub fn dvr(p: u64, eisenstein: &[i64], bound: i64, precision: u32) -> Check {
    let poly = {
        let mut s: Vec<String> = vec!["1".into()];
        s.extend(eisenstein.iter().rev().map(ToString::to_string));
        s.join(",")
    };
    let name = format!("sen.dvr[p={p},E={poly},D={bound}]");
    guard(&name, || {
        let precision = precision.max(dvr_precision_for(p, eisenstein, bound));
        let desc = DVRDescriptor::new(p, precision, eisenstein.to_vec())?;
        let sq = build_dvr_square(&desc, bound)?;
        let e = eisenstein.len() as u32;
        let ve = e_prime_valuation(p, eisenstein);
        let jmax = ((bound + 1) / 2) as u64;
        let mut failure = compare(&sq.total, [(0, 1, vec![])]);
        for j in 1..=jmax {
            if failure.is_some() {
                break;
            }
            let v = e * vp(j, p) + ve;
            let got = sq.total.at(2 * j as i64 - 1);
            if got.free_rank != 0 || got.torsion != cyclic(p, v) {
                failure = Some(format!(
                    "degree {}: summand orders {:?}, expected cyclic R/pi^{v} of order {}",
                    2 * j - 1,
                    got.torsion,
                    p.pow(v)
                ));
            }
        }
        if failure.is_none() {
            let copies = |j: u64| if ve > 0 { vec![p.pow(ve); j as usize] } else { vec![] };
            failure = compare(&sq.nabla, (1..=jmax).map(|j| (2 * j as i64 - 1, 0, copies(j))))
                .map(|s| format!("nabla {s}"));
        }
        if failure.is_none() {
            if let Some(x) = sq.extension.as_ref().filter(|x| !x.holds()) {
                failure = Some(format!(
                    "degree {}: order {} (expected {}), cyclic {}",
                    x.degree, x.found_order, x.expected_order, x.cyclic
                ));
            }
        }
        let payload = json!({
            "precision": precision,
            "ramification": e,
            "e_prime_valuation": ve,
            "nabla": report_json(&sq.nabla),
            "total": report_json(&sq.total),
        });
        Ok(Check::verdict(&name, payload, failure))
    })
}
