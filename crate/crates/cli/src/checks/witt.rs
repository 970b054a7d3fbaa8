use num_bigint::BigInt;
use pdcalc::witt::{
    cartier_additivity, cartier_character, dwork_factorization, frobenius_of_p_identity, gabber_y, pn_identity,
    solve_frobenius, SolveOutcome,
};
use pdcalc::{WittContext, WittVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{guard, strings, Check};
use crate::targets::SolveFailure;

/// `[p] + V(y) = p` in `W_L(Z)`.
pub fn gabber(p: u64, len: usize) -> Check {
    let name = format!("witt.gabber[p={p},L={len}]");
    guard(&name, || {
        let ctx = WittContext::integers(p, len)?;
        let y = gabber_y(p, len)?;
        let lhs = WittVector::teichmuller(&BigInt::from(p), ctx).add(&y.verschiebung())?;
        let rhs = WittVector::from_int(&BigInt::from(p), ctx);
        let failure = (lhs != rhs).then(|| {
            let i = (0..len).find(|&i| lhs.components()[i] != rhs.components()[i]).unwrap_or(0);
            format!("component {i}: {} != {}", lhs.components()[i], rhs.components()[i])
        });
        Ok(Check::verdict(&name, json!({ "y": strings(y.components()) }), failure))
    })
}

/// `p^n = V(p^{n-1})` mod `p^n`, with ghost `(p^n, 0, ...)` over `Z`.
pub fn pn_vanishing(p: u64, n_max: u32, len: usize) -> Check {
    let name = format!("witt.pn-vanishing[p={p},n<={n_max},L={len}]");
    guard(&name, || {
        let mut ghosts = Vec::new();
        let mut failure = None;
        for n in 1..=n_max {
            let r = pn_identity(p, n, len)?;
            if failure.is_none() && !(r.holds_mod_pn && r.ghost_is_pn_then_zero) {
                failure = Some(format!(
                    "n = {n}: identity mod p^n {}, ghost {:?}",
                    r.holds_mod_pn,
                    strings(&r.ghost_of_difference)
                ));
            }
            ghosts.push(json!({ "n": n, "ghost": strings(&r.ghost_of_difference) }));
        }
        Ok(Check::verdict(&name, json!(ghosts), failure))
    })
}

fn outcome_json(o: &SolveOutcome) -> serde_json::Value {
    match o {
        SolveOutcome::Success { x, ghosts_one_mod_p, higher_divisible, all_divisible } => json!({
            "solved": true,
            "x": strings(x.components()),
            "ghosts_one_mod_p": ghosts_one_mod_p,
            "higher_divisible": higher_divisible,
            "all_divisible": all_divisible,
        }),
        SolveOutcome::Failure { stage, .. } => {
            json!({ "solved": false, "stage": stage, "witness": o.witness() })
        }
    }
}

/// `F(x) = y` for Gabber's `y`. Odd primes must succeed with a unit `x`;
/// the designated even case must fail with the recorded witness, and its
/// twists `y [p^m]` must succeed with every component divisible by `p`.
pub fn solve_frobenius_trichotomy(p: u64, len: usize, expected_failure: &SolveFailure, twists: &[u32]) -> Check {
    let name = format!("witt.solve-frobenius[p={p},L={len}]");
    guard(&name, || {
        let y = gabber_y(p, len)?;
        let out = solve_frobenius(&y)?;
        let mut payload = vec![json!({ "input": "y", "outcome": outcome_json(&out) })];
        let mut failure = None;
        if p == expected_failure.p {
            match &out {
                SolveOutcome::Failure { stage, .. }
                    if *stage == expected_failure.stage
                        && out.witness().as_deref() == Some(expected_failure.witness.as_str()) => {}
                other => {
                    failure = Some(format!(
                        "expected failure at stage {} with witness {}, got {}",
                        expected_failure.stage,
                        expected_failure.witness,
                        outcome_json(other)
                    ))
                }
            }
            let ctx = y.context();
            for &m in twists {
                let twisted = y.mul(&WittVector::teichmuller(&BigInt::from(p).pow(m), ctx))?;
                let o = solve_frobenius(&twisted)?;
                if failure.is_none() && !matches!(o, SolveOutcome::Success { all_divisible: true, .. }) {
                    failure = Some(format!("y[{p}^{m}]: {}", outcome_json(&o)));
                }
                payload.push(json!({ "input": format!("y[{p}^{m}]"), "outcome": outcome_json(&o) }));
            }
        } else if !matches!(out, SolveOutcome::Success { ghosts_one_mod_p: true, higher_divisible: true, .. }) {
            failure = Some(format!("expected a unit solution, got {}", outcome_json(&out)));
        }
        Ok(Check::verdict(&name, json!(payload), failure))
    })
}

/// Frobenius applied to Gabber's identity gives `[p^p] = p(1 - y)`.
pub fn frobenius_of_p(p: u64, len: usize) -> Check {
    let name = format!("witt.frobenius-of-p[p={p},L={len}]");
    guard(&name, || {
        let r = frobenius_of_p_identity(p, len)?;
        let payload = json!({
            "gabber_identity": r.gabber_identity,
            "frobenius_applied": r.frobenius_applied,
            "teichmuller_p_pow_p": r.teichmuller_p_pow_p,
            "teichmuller_p_squared": r.teichmuller_p_squared,
        });
        let failure = if !r.gabber_identity {
            Some("[p] + V(y) != p".to_string())
        } else if !r.frobenius_applied {
            Some("F([p] + V(y)) != F(p)".to_string())
        } else if !r.teichmuller_p_pow_p {
            Some("[p^p] != p(1 - y)".to_string())
        } else {
            None
        };
        Ok(Check::verdict(&name, payload, failure))
    })
}

/// Ghost vector of a character with integral `exp`: `a_{n-1} = p^n r` and
/// `a_{k-1} = a_k + p^k r'`.
fn integral_ghost(p: u64, n: usize, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let pw = |e: usize| BigInt::from(p).pow(e as u32);
    let mut a = vec![BigInt::from(0); n];
    a[n - 1] = pw(n) * rng.gen_range(-3i64..=3);
    for k in (1..n).rev() {
        a[k - 1] = &a[k] + pw(k) * rng.gen_range(-3i64..=3);
    }
    a
}

/// Integrality and additivity of the Cartier character on random inputs.
pub fn cartier(p: u64, samples: usize, len: usize, degree: u32, seed: u64) -> Check {
    let name = format!("witt.cartier[p={p},samples={samples},L={len},d={degree}]");
    guard(&name, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
        let ctx = WittContext::integers(p, len)?;
        let mut failure = None;
        for s in 0..samples {
            let a = integral_ghost(p, len, &mut rng);
            let mut comps = || (0..len).map(|_| rng.gen_range(-4i64..=4)).collect::<Vec<_>>();
            let x = WittVector::from_i64(ctx, &comps())?;
            let x2 = WittVector::from_i64(ctx, &comps())?;
            let problem = match cartier_character(&a, &x, degree) {
                Err(e) => Some(e.to_string()),
                Ok(c) if c.g.first_non_p_integral(p).is_some() => Some("g not p-integral".into()),
                Ok(c) if c.g != c.g_from_ghosts => Some("factorised and ghost forms differ".into()),
                Ok(_) => (!cartier_additivity(&a, &x, &x2, degree)?).then(|| "g(x + x') != g(x) g(x')".into()),
            };
            if let Some(what) = problem {
                failure = Some(format!(
                    "sample {s}: a = {:?}, x = {:?}, x' = {:?}: {what}",
                    strings(&a),
                    strings(x.components()),
                    strings(x2.components())
                ));
                break;
            }
        }
        Ok(Check::verdict(&name, json!({ "samples": samples }), failure))
    })
}

/// `exp(sum x_n t^n / n) = prod (1 - r_j t^j)` for `x_n = -sum_{d | n} d r_d^{n/d}`.
pub fn dwork(instances: usize, degree: u32, seed: u64) -> Check {
    let name = format!("witt.dwork[instances={instances},d={degree}]");
    guard(&name, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = degree as usize;
        let mut failure = None;
        for i in 0..instances {
            let r: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
            let x: Vec<BigInt> = (1..=d)
                .map(|n| {
                    -(1..=n)
                        .filter(|j| n % j == 0)
                        .map(|j| BigInt::from(j) * r[j - 1].pow((n / j) as u32))
                        .sum::<BigInt>()
                })
                .collect();
            let f = dwork_factorization(&x, None, degree)?;
            if !f.roundtrip || f.r != r {
                failure = Some(format!(
                    "instance {i}: r = {:?}, recovered {:?}, roundtrip {}",
                    strings(&r),
                    strings(&f.r),
                    f.roundtrip
                ));
                break;
            }
        }
        Ok(Check::verdict(&name, json!({ "instances": instances }), failure))
    })
}
