use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pdcalc::exactalg::{binomial, TruncPoly};
use pdcalc::fgl::{
    apply_right_unit, b4_cobar_class, bp_right_unit, fgl_construct, q_integer, BpRing,
    FglKind, FormalGroupLaw, Lambda,
};
use pdcalc::senhom::fderham_cohomology;
use serde_json::json;

use super::{guard, Check};
use crate::targets::{parse_polynomial, RightUnitTargets};

type Series = TruncPoly<BigRational>;

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn kind_label(kind: &FglKind) -> String {
    match kind {
        FglKind::Additive => "additive".into(),
        FglKind::Multiplicative(Lambda::Symbolic) => "multiplicative".into(),
        FglKind::Multiplicative(Lambda::Value(v)) => format!("multiplicative(lambda={v})"),
        FglKind::Honda { p, n } => format!("honda(p={p},n={n})"),
        FglKind::Custom => "custom".into(),
    }
}

/// Closed forms for `[m](x)` where one is known.
fn closed_form(f: &FormalGroupLaw, m: i64) -> Option<Series> {
    let ring = f.series_ring("x", f.degree());
    let x = TruncPoly::var(&ring, 0);
    match f.kind() {
        FglKind::Additive => Some(x.scale(&int(m))),
        FglKind::Multiplicative(lambda) if m >= 0 => {
            // ((1 + λx)^m - 1)/λ = sum_k C(m, k) λ^{k-1} x^k
            let l = match lambda {
                Lambda::Symbolic => TruncPoly::var(&ring, 1),
                Lambda::Value(v) => TruncPoly::constant(&ring, int(v.clone())),
            };
            let mut out = TruncPoly::zero(&ring);
            for k in 1..=m as u64 {
                out = out.add(&l.pow(k - 1).mul(&x.pow(k)).scale(&int(binomial(m as u64, k))));
            }
            Some(out)
        }
        FglKind::Honda { p, n } if m > 0 => {
            // [p^k](x) = v^{(p^{nk}-1)/(p^n-1)} x^{p^{nk}}
            let (mut q, mut k) = (m as u64, 0u32);
            while q % p == 0 {
                q /= p;
                k += 1;
            }
            if q != 1 {
                return None;
            }
            let pnk = p.checked_pow(n * k)?;
            let mut out = TruncPoly::zero(&ring);
            if pnk <= f.degree() as u64 {
                let vexp = (pnk - 1) / (p.pow(*n) - 1);
                out = TruncPoly::monomial(&ring, vec![pnk as u32, vexp as u32], BigRational::one());
            }
            Some(out)
        }
        _ => None,
    }
}

/// `[m](x)` with the recursion `[m] = F([m-1], x)` and any closed form.
pub fn nseries(kind: FglKind, m: i64, degree: u32) -> Check {
    let name = format!("fgl.nseries[{},m={m},D={degree}]", kind_label(&kind));
    guard(&name, || {
        let f = fgl_construct(kind, degree)?;
        let s = f.n_series(m);
        let x = TruncPoly::var(s.ring(), 0);
        let mut failure = None;
        if f.apply(&f.n_series(m - 1), &x) != s {
            failure = Some(format!("[{m}] != F([{}], x)", m - 1));
        }
        if let Some(want) = closed_form(&f, m) {
            if failure.is_none() && want != s {
                failure = Some(format!("[{m}](x) = {s}, closed form {want}"));
            }
        }
        Ok(Check::verdict(&name, json!({ "series": s.to_string() }), failure))
    })
}

/// `<n>(h) = [n]_q` at `q = 1 + λh` for the multiplicative law.
pub fn q_identity(n_max: u64, degree: u32) -> Check {
    let name = format!("fgl.q-identity[n<={n_max},D={degree}]");
    guard(&name, || {
        let f = fgl_construct(FglKind::Multiplicative(Lambda::Symbolic), degree.max(n_max as u32 + 1))?;
        let mut failure = None;
        for n in 1..=n_max {
            let div = f.divided_n_series(n as i64);
            let q = q_integer(n, div.ring());
            if div != q {
                failure = Some(format!("n = {n}: <n>(h) = {div}, [n]_q = {q}"));
                break;
            }
        }
        Ok(Check::verdict(&name, json!({ "n_max": n_max }), failure))
    })
}

/// `<p^m>(h) = v^{(p^{nm}-1)/(p^n-1)} h^{p^{nm}-1}` for `p^{nm} <= max_power`.
pub fn honda(p: u64, n: u32, max_power: u64) -> Check {
    let name = format!("fgl.honda[p={p},n={n},p^nm<={max_power}]");
    guard(&name, || {
        let mut powers = Vec::new();
        let mut pnm = p.pow(n);
        while pnm <= max_power {
            powers.push(pnm);
            pnm = match pnm.checked_mul(p.pow(n)) {
                Some(v) => v,
                None => break,
            };
        }
        let Some(&top) = powers.last() else {
            return Ok(Check::skipped(&name, "p^n exceeds the power bound"));
        };
        let f = fgl_construct(FglKind::Honda { p, n }, top as u32)?;
        let mut rows = Vec::new();
        let mut failure = None;
        for (i, &pw) in powers.iter().enumerate() {
            let m = i as u32 + 1;
            let pm = p.pow(m) as i64;
            let div = f.divided_n_series(pm);
            let vexp = (pw - 1) / (p.pow(n) - 1);
            let want = TruncPoly::monomial(div.ring(), vec![(pw - 1) as u32, vexp as u32], BigRational::one());
            if failure.is_none() && div != want {
                failure = Some(format!("<{pm}>(h) = {div}, expected {want}"));
            }
            rows.push(json!({ "m": m, "divided": div.to_string() }));
        }
        Ok(Check::verdict(&name, json!(rows), failure))
    })
}

fn target(r: &BpRing, s: &str) -> pdcalc::Result<Series> {
    parse_polynomial(s, &r.ring).map_err(pdcalc::Error::InvalidInput)
}

/// The right unit on Hazewinkel generators. At `p = 2` the displayed
/// polynomials must match exactly; otherwise `η_R(v_k) - v_k = p t_k`
/// modulo `(t_1, ..., t_{k-1})`.
pub fn right_unit(p: u64, n: usize, targets: &RightUnitTargets) -> Check {
    let name = format!("fgl.right-unit[p={p},n={n}]");
    guard(&name, || {
        let (r, eta) = bp_right_unit(p, n)?;
        let mut payload = serde_json::Map::new();
        for (i, e) in eta.iter().enumerate() {
            payload.insert(format!("eta_R(v{})", i + 1), json!(e.to_string()));
        }
        let mut failure = None;
        let mut expect = |label: &str, got: &Series, want: &Series| {
            if failure.is_none() && got != want {
                failure = Some(format!("{label} = {got}, expected {want}"));
            }
        };
        if p == 2 {
            let v1 = r.gen("v", 1);
            expect("eta_R(v1)", &eta[0], &target(&r, &targets.eta_v1)?);
            let sq = v1.pow(2);
            let quarter = apply_right_unit(&r, &eta, &sq).sub(&sq).scale(&BigRational::new(1.into(), 4.into()));
            payload.insert("(eta_R(v1^2) - v1^2)/4".into(), json!(quarter.to_string()));
            expect("(eta_R(v1^2) - v1^2)/4", &quarter, &target(&r, &targets.eta_v1_squared_quarter)?);
            if n >= 2 {
                expect("eta_R(v2)", &eta[1], &target(&r, &targets.eta_v2)?);
            }
        } else {
            for k in 1..=n {
                let low: Vec<usize> = (1..k).filter_map(|i| r.ring.index(&format!("t{i}"))).collect();
                let d = eta[k - 1].sub(&r.gen("v", k)).filter(|e| low.iter().all(|&i| e[i] == 0));
                let want = r.gen("t", k).scale(&int(p));
                expect(&format!("eta_R(v{k}) - v{k} mod lower t"), &d, &want);
            }
        }
        Ok(Check::verdict(&name, serde_json::Value::Object(payload), failure))
    })
}

pub fn b4(targets: &RightUnitTargets) -> Check {
    let name = "fgl.b4";
    guard(name, || {
        let (r, b4) = b4_cobar_class()?;
        let want = target(&r, &targets.b4)?;
        let failure = (b4 != want).then(|| format!("b4 = {b4}, expected {want}"));
        Ok(Check::verdict(name, json!({ "b4": b4.to_string() }), failure))
    })
}

/// Weight `m >= 1` pieces are multiplication by `<m>(h)`, which has
/// constant term `m`: injective, with cokernel of order `m^K`.
pub fn fderham(kind: FglKind, weight: u64, truncation: usize) -> Check {
    let name = format!("fgl.fderham[{},w<={weight},K={truncation}]", kind_label(&kind));
    guard(&name, || {
        let f = fgl_construct(kind, truncation as u32 + 1)?;
        let rows = fderham_cohomology(&f, weight, truncation)?;
        let mut failure = None;
        for c in &rows {
            let order: BigInt =
                c.h1_divisors.iter().map(|d| d.parse::<BigInt>().unwrap_or_else(|_| BigInt::zero())).product();
            let ok = if c.weight == 0 {
                c.h0_free == truncation && c.h1_free == 0
            } else {
                c.h0_free == 0 && c.h1_free == 0 && order == BigInt::from(c.weight).pow(truncation as u32)
            };
            if !ok && failure.is_none() {
                failure = Some(format!(
                    "weight {}: H0 rank {}, H1 rank {}, divisors {:?}",
                    c.weight, c.h0_free, c.h1_free, c.h1_divisors
                ));
            }
        }
        let payload: Vec<_> = rows
            .iter()
            .map(|c| json!({ "weight": c.weight, "h0": c.h0_free, "h1_free": c.h1_free, "h1_divisors": c.h1_divisors }))
            .collect();
        Ok(Check::verdict(&name, json!(payload), failure))
    })
}
