use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not prime")))
    }
}

/// p-adic valuation; `None` for zero.
pub fn vp(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp_rational(x: &BigRational, p: u64) -> Option<i64> {
    let a = vp(x.numer(), p)? as i64;
    let b = vp(x.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

pub fn digit_sum(mut k: u64, p: u64) -> u64 {
    let mut s = 0;
    while k > 0 {
        s += k % p;
        k /= p;
    }
    s
}

/// v_p(k!) by Legendre: (k - s_p(k)) / (p - 1).
pub fn factorial_valuation(p: u64, k: u64) -> Result<u64> {
    require_prime(p)?;
    Ok((k - digit_sum(k, p)) / (p - 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn int_pow(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(factorial_valuation(2, 4).unwrap(), 3);
        assert_eq!(factorial_valuation(3, 1).unwrap(), 0);
        // 26 = (p^3 - 1) at p = 3, so v_3(26!) = (3 - 1) + (9 - 1).
        assert_eq!(factorial_valuation(3, 26).unwrap(), 2 + 8);
        assert!(factorial_valuation(4, 10).is_err());
    }

    #[test]
    fn legendre_matches_brute_force() {
        for p in [2u64, 3, 5, 7] {
            let mut f = BigInt::one();
            for k in 1..120u64 {
                f *= BigInt::from(k);
                assert_eq!(factorial_valuation(p, k).unwrap(), vp(&f, p).unwrap() as u64);
            }
        }
    }

    #[test]
    fn prime_powers_of_factorial() {
        for p in [2u64, 3, 5] {
            for j in 0..=6u32 {
                let pj = p.pow(j);
                assert_eq!(factorial_valuation(p, pj).unwrap(), (pj - 1) / (p - 1));
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&BigInt::from(-24), 2), Some(3));
        assert_eq!(vp(&BigInt::zero(), 2), None);
        let r = BigRational::new(BigInt::from(9), BigInt::from(8));
        assert_eq!(vp_rational(&r, 2), Some(-3));
        assert_eq!(vp_rational(&r, 3), Some(2));
    }
}
