use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::algebra::{
    element_product, single, DPBasisMonomial, DPModule, DegreeWeights, Derivation, DerivationValues,
    DpElement, GradedLinearMap,
};
use crate::exactalg::{factorial_valuation, int_pow, require_prime, vp_rational};
use crate::{Error, Result};

/// `ε prod_{j=1}^{k-1} γ_{p^j}(u)^{p-1}`, expanded into the `γ` basis.
fn generator_value(p: u64, k: usize, scale: &BigInt) -> DpElement {
    let mut acc = single(DPBasisMonomial::new(0, 0, 1), BigRational::from_integer(scale.clone()));
    let mut pj = 1u64;
    for _ in 1..k {
        pj *= p;
        for _ in 0..p - 1 {
            acc = element_product(&acc, &single(DPBasisMonomial::new(pj, 0, 0), BigRational::one()));
        }
    }
    acc
}

/// `v_p((p^k - p)! / (p^k - 1)!)`, the valuation of `u^{1-p} ∂_u` on `γ_{p^k}`.
pub fn theta_valuation_identity(p: u64, k: u32) -> Result<i64> {
    let pk = num_traits::pow(p, k as usize);
    Ok(factorial_valuation(p, pk - p)? as i64 - factorial_valuation(p, pk - 1)? as i64)
}

fn sen_derivation(p: u64, bound: i64, gamma_scale: &BigInt) -> Result<Derivation> {
    let module = DPModule::new(p, bound, DegreeWeights::perfectoid(p))?;
    let top = (bound / 2).max(1) as u64;
    let mut gamma = vec![DpElement::new()];
    let mut k = 1usize;
    while num_traits::pow(p, k) <= top {
        gamma.push(generator_value(p, k, gamma_scale));
        k += 1;
    }
    let theta = single(DPBasisMonomial::new(0, 0, 1), BigRational::from_integer(BigInt::from(p)));
    let d = super::algebra::pd_derivation_extend(DerivationValues { gamma, theta, shift: -1 }, &module)?;
    for (k, v) in d.values.gamma.iter().enumerate().skip(1) {
        let coef_val = v.values().map(|c| vp_rational(c, p).unwrap_or(0)).min().unwrap_or(0);
        let scale_val = vp_rational(&BigRational::from_integer(gamma_scale.clone()), p).unwrap_or(0);
        let ident = theta_valuation_identity(p, k as u32)?;
        if coef_val - scale_val != 0 || ident != 0 {
            return Err(Error::Internal(format!(
                "valuation identity fails at k = {k}: generator {}, factorial ratio {ident}",
                coef_val - scale_val
            )));
        }
    }
    Ok(d)
}

/// The Sen differential on `Z_p<u> ⊗ Z_p[θ]{1, ε}` as a derivation, before
/// restricting to the `1 → ε` lines.
pub fn perfectoid_derivation(p: u64, bound: i64) -> Result<Derivation> {
    require_prime(p)?;
    sen_derivation(p, bound, &BigInt::one())
}

/// `γ_{p^k}(u) ↦ ε prod_{j<k} γ_{p^j}(u)^{p-1}`, `θ ↦ pε`, as a map from the
/// `ε`-free line to the `ε` line (degree `-1`).
pub fn theta_perfectoid(p: u64, bound: i64) -> Result<GradedLinearMap> {
    perfectoid_derivation(p, bound)?.to_map(|m| m.c == 0, |m| m.c == 1)
}

/// As `theta_perfectoid` with the `γ` generator values scaled by `p^{n-1}`.
pub fn theta_zpn(p: u64, n: u32, bound: i64) -> Result<GradedLinearMap> {
    zpn_derivation(p, n, bound)?.to_map(|m| m.c == 0, |m| m.c == 1)
}

pub fn zpn_derivation(p: u64, n: u32, bound: i64) -> Result<Derivation> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported("the Z/p^n operator is defined for odd p".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("need n >= 2".into()));
    }
    sen_derivation(p, bound, &int_pow(p, n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn perfectoid_generator_values() {
        let d = perfectoid_derivation(3, 40).unwrap();
        let eps = DPBasisMonomial::new(0, 0, 1);
        assert_eq!(d.on_gamma(3), single(eps, r(1)));
        assert!(d.on_gamma(1).is_empty());
        assert_eq!(d.on_monomial(&DPBasisMonomial::new(0, 2, 0)), single(DPBasisMonomial::new(0, 1, 1), r(6)));
        // γ_9 ↦ ε γ_3² = C(6,3) ε γ_6
        assert_eq!(d.on_gamma(9), single(DPBasisMonomial::new(6, 0, 1), r(20)));
    }

    #[test]
    fn perfectoid_squares_to_zero() {
        let d = perfectoid_derivation(2, 30).unwrap();
        for ms in d.module.basis().values() {
            for m in ms {
                let once = d.on_monomial(m);
                assert!(d.apply(&once).is_empty(), "{m}");
            }
        }
    }

    #[test]
    fn zpn_scaling() {
        let d = zpn_derivation(3, 2, 30).unwrap();
        let eps = DPBasisMonomial::new(0, 0, 1);
        assert_eq!(d.on_gamma(3), single(eps, r(3)));
        assert_eq!(d.on_monomial(&DPBasisMonomial::new(0, 1, 0)), single(eps, r(3)));
        assert!(matches!(theta_zpn(2, 2, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn valuation_identity() {
        for p in [2u64, 3, 5] {
            for k in 1..=4 {
                assert_eq!(theta_valuation_identity(p, k).unwrap(), 0);
            }
        }
    }

    #[test]
    fn leibniz_holds_without_carries() {
        // The generator values are fixed with unit 1; products whose base-p
        // addition carries pick up unit mismatches.
        let p = 3u64;
        let d = perfectoid_derivation(p, 60).unwrap();
        let carries = |mut a: u64, mut b: u64| {
            while a > 0 || b > 0 {
                if a % p + b % p >= p {
                    return true;
                }
                a /= p;
                b /= p;
            }
            false
        };
        for (x, y) in d.leibniz_failures() {
            assert!(carries(x.a, y.a), "{x} * {y}");
        }
    }
}
