use num_bigint::BigInt;
use num_rational::BigRational;
use pdcalc::dpops::{
    delta_ring_check, dp_weyl_operators, psi_eigenvalues, psi_one_closed_form, psi_tensor_check, psi_two_closed_form,
    DeltaRingContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{guard, strings, Check};

/// First disagreement of `ψ(m)` with `ψ_0 = m` and the closed forms for
/// `ψ_1`, `ψ_2`.
fn psi_mismatch(p: u64, m: &BigInt, psi: &[BigInt]) -> Option<String> {
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    if psi[0] != *m {
        return Some(format!("m = {m}: psi_0 = {}", psi[0]));
    }
    if psi.len() > 1 && q(&psi[1]) != psi_one_closed_form(p, m) {
        return Some(format!("m = {m}: psi_1 = {}, closed form {}", psi[1], psi_one_closed_form(p, m)));
    }
    if psi.len() > 2 && q(&psi[2]) != psi_two_closed_form(p, m) {
        return Some(format!("m = {m}: psi_2 = {}, closed form {}", psi[2], psi_two_closed_form(p, m)));
    }
    None
}

pub fn psi(p: u64, n: usize, m: i64) -> Check {
    let name = format!("cartier.psi[p={p},n={n},m={m}]");
    guard(&name, || {
        let m = BigInt::from(m);
        let psi = psi_eigenvalues(p, n, &m)?;
        let failure = psi_mismatch(p, &m, &psi);
        Ok(Check::verdict(&name, json!({ "psi": strings(&psi) }), failure))
    })
}

/// `ψ_j(m)` integral for `0 <= m <= m_max`, `j < len`, with closed forms.
pub fn psi_range(p: u64, len: usize, m_max: i64) -> Check {
    let name = format!("cartier.psi-integrality[p={p},j<{len},m<={m_max}]");
    guard(&name, || {
        let mut failure = None;
        for m in 0..=m_max {
            let m = BigInt::from(m);
            // Integrality is enforced by the ghost recursion, which errors otherwise.
            let psi = match psi_eigenvalues(p, len, &m) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(format!("m = {m}: {e}"));
                    break;
                }
            };
            if let Some(f) = psi_mismatch(p, &m, &psi) {
                failure = Some(f);
                break;
            }
        }
        Ok(Check::verdict(&name, json!({ "checked": m_max + 1 }), failure))
    })
}

/// `ψ(a + b)` is the Witt sum of `ψ(a)` and `ψ(b)`.
pub fn psi_tensor(p: u64, len: usize, pairs: usize, range: i64, seed: u64) -> Check {
    let name = format!("cartier.psi-tensor[p={p},n={len},pairs={pairs}]");
    guard(&name, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32));
        let mut failure = None;
        for _ in 0..pairs {
            let (a, b) = (rng.gen_range(-range..=range), rng.gen_range(-range..=range));
            if !psi_tensor_check(p, len, &BigInt::from(a), &BigInt::from(b))? {
                failure = Some(format!("a = {a}, b = {b}"));
                break;
            }
        }
        Ok(Check::verdict(&name, json!({ "pairs": pairs }), failure))
    })
}

/// `[∂^{[p^j]}, x] = ∂^{[p^j - 1]}` on `x^m` for `j < n`, `m <= m_max`,
/// plus the valuation match for products of lower operators.
pub fn weyl(p: u64, n: u32, m_max: usize) -> Check {
    let name = format!("cartier.weyl[p={p},j<{n},m<={m_max}]");
    guard(&name, || {
        let r = dp_weyl_operators(p, n, m_max + 1)?.check();
        let failure = r
            .commutator_failures
            .first()
            .map(|(j, m)| format!("commutator fails for j = {j} on x^{m}"))
            .or_else(|| r.valuation_mismatches.first().map(|(j, m)| format!("valuation mismatch for j = {j} on x^{m}")));
        let payload = json!({
            "commutator_failures": r.commutator_failures.len(),
            "valuation_mismatches": r.valuation_mismatches.len(),
        });
        Ok(Check::verdict(&name, payload, failure))
    })
}

/// `φ(δ^k t)` and `δ^k(t)^p + p δ^{k+1}(t)` divisible by `[p]_q` with
/// `p`-integral quotients.
pub fn delta(p: u64, n: u32, k_max: u32, precision: u32, truncation: u32) -> Check {
    let name = format!("cartier.delta[p={p},n={n},k<={k_max},N={precision},K={truncation}]");
    guard(&name, || {
        let ctx = DeltaRingContext::new(p, precision, truncation)?;
        let r = delta_ring_check(n, k_max, &ctx)?;
        let failure = r.steps.iter().find(|s| !(s.phi_divisible && s.sseq_divisible)).map(|s| {
            format!(
                "k = {}: quotient valuations {:?} (phi) and {:?} (sum)",
                s.k, s.phi_quotient_valuation, s.sseq_quotient_valuation
            )
        });
        Ok(Check::verdict(&name, serde_json::to_value(&r.steps).expect("steps serialize"), failure))
    })
}
