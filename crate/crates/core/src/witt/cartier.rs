use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::vector::{BaseRing, WittVector};
use crate::exactalg::{int_pow, vp, PolyRing, TruncPoly};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CartierCharacter {
    /// `f(t) = exp(sum_m a_m t^{p^m} / p^m)`.
    pub f: TruncPoly<BigRational>,
    /// `g = prod_j F^j(f)(x_j t^{p^j})`.
    pub g: TruncPoly<BigRational>,
    /// The same character computed as `exp(sum_m a_m w_m(x) t^{p^m} / p^m)`.
    pub g_from_ghosts: TruncPoly<BigRational>,
}

fn series_ring(d: u32) -> Arc<PolyRing> {
    PolyRing::series("t", d)
}

fn p_power(p: u64, m: usize) -> u64 {
    num_traits::pow(p, m)
}

/// `exp(sum_m c_m s^{p^m} / p^m)` truncated at `t^d`, with `s = scale * t^stride`.
fn frobenius_twisted_exp(
    ring: &Arc<PolyRing>,
    p: u64,
    coeffs: &[BigInt],
    scale: &BigInt,
    stride: u64,
    d: u32,
) -> Result<TruncPoly<BigRational>> {
    let mut s = TruncPoly::zero(ring);
    for (m, c) in coeffs.iter().enumerate() {
        let pm = p_power(p, m);
        let deg = pm * stride;
        if deg > d as u64 {
            break;
        }
        let coef = BigRational::new(c * num_traits::pow(scale.clone(), pm as usize), BigInt::from(pm));
        s = s.add(&TruncPoly::monomial(ring, vec![deg as u32], coef));
    }
    s.exp()
}

fn check_p_integral(f: &TruncPoly<BigRational>, p: u64, what: &str) -> Result<()> {
    if let Some((e, c)) = f.first_non_p_integral(p) {
        return Err(Error::IntegralityViolation(format!(
            "{what}: coefficient {c} of {} is not {p}-integral",
            f.ring().monomial_string(&e)
        )));
    }
    Ok(())
}

fn check_inputs(a: &[BigInt], x: &WittVector) -> Result<()> {
    if x.context().base() != BaseRing::Integers {
        return Err(Error::InvalidInput("Cartier character works over Z".into()));
    }
    if a.len() != x.context().len() {
        return Err(Error::InvalidInput(format!(
            "{} ghost slots for a Witt vector of length {}",
            a.len(),
            x.context().len()
        )));
    }
    Ok(())
}

/// `sum_m a_m w_m(x) t^{p^m} / p^m`; no integrality is required.
fn log_from_ghosts(ring: &Arc<PolyRing>, a: &[BigInt], x: &WittVector, d: u32) -> TruncPoly<BigRational> {
    let p = x.context().prime();
    let w = x.ghost();
    let mut s = TruncPoly::zero(ring);
    for (m, am) in a.iter().enumerate() {
        let pm = p_power(p, m);
        if pm > d as u64 {
            break;
        }
        let c = BigRational::new(am * &w.entries()[m], BigInt::from(pm));
        s = s.add(&TruncPoly::monomial(ring, vec![pm as u32], c));
    }
    s
}

/// Coefficients of `t^{p^m}` in `log g`, computed from the factorised form.
/// These equal `a_m w_m(x) / p^m` whether or not `f` is integral.
pub fn cartier_log_coefficients(a: &[BigInt], x: &WittVector, d: u32) -> Result<Vec<BigRational>> {
    check_inputs(a, x)?;
    let p = x.context().prime();
    let ring = series_ring(d);
    let mut log_g = TruncPoly::zero(&ring);
    for (j, xj) in x.components().iter().enumerate() {
        let f_j = frobenius_twisted_exp(&ring, p, &a[j..], xj, p_power(p, j), d)?;
        log_g = log_g.add(&f_j.log()?);
    }
    Ok((0..a.len())
        .map(|m| p_power(p, m))
        .take_while(|&pm| pm <= d as u64)
        .map(|pm| log_g.coeff(&[pm as u32]))
        .collect())
}

/// Evaluate the Cartier pairing of the character with ghost `a` on `x`.
///
/// `f` must lie in `1 + t Z_(p)[[t]]`; that holds exactly when
/// `a_m = a_(m-1) mod p^m` for all `m >= 1`, with `a_m = 0` for `m >= n`.
///
/// `x_j` enters with weight `p^j`, so `g` is a series in `t` with
/// `g(x; t) = prod_j F^j(f)(x_j t^{p^j})`.
pub fn cartier_character(a: &[BigInt], x: &WittVector, d: u32) -> Result<CartierCharacter> {
    check_inputs(a, x)?;
    let p = x.context().prime();
    let ring = series_ring(d);
    let f = frobenius_twisted_exp(&ring, p, a, &BigInt::one(), 1, d)?;
    check_p_integral(&f, p, "f")?;
    let mut g = TruncPoly::one(&ring);
    for (j, xj) in x.components().iter().enumerate() {
        let f_j = frobenius_twisted_exp(&ring, p, &a[j..], xj, p_power(p, j), d)?;
        check_p_integral(&f_j, p, &format!("F^{j}(f)"))?;
        g = g.mul(&f_j);
    }
    let g_from_ghosts = log_from_ghosts(&ring, a, x, d).exp()?;
    Ok(CartierCharacter { f, g, g_from_ghosts })
}

/// `g(x +_W x') = g(x) g(x')` to truncation.
pub fn cartier_additivity(a: &[BigInt], x: &WittVector, x2: &WittVector, d: u32) -> Result<bool> {
    let s = x.add(x2)?;
    let gs = cartier_character(a, &s, d)?.g;
    let g1 = cartier_character(a, x, d)?.g;
    let g2 = cartier_character(a, x2, d)?.g;
    Ok(gs == g1.mul(&g2))
}

#[derive(Clone, Debug)]
pub struct DworkFactors {
    /// `r[j-1] = r_j` for `1 <= j <= D`.
    pub r: Vec<BigInt>,
    pub product: TruncPoly<BigRational>,
    pub exponential: TruncPoly<BigRational>,
    pub roundtrip: bool,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factor `exp(sum x_n t^n / n) = prod_j (1 - r_j t^j)` to degree `D`.
///
/// `x[n-1]` holds `x_n`. `phi` gives the Frobenius lift `phi_p` on the
/// coefficient ring; `None` means the identity, as on `Z`.
pub fn dwork_factorization(
    x: &[BigInt],
    phi: Option<&dyn Fn(u64, &BigInt) -> BigInt>,
    d: u32,
) -> Result<DworkFactors> {
    let d = d as usize;
    if x.len() < d {
        return Err(Error::InvalidInput(format!("need {d} terms, have {}", x.len())));
    }
    for n in 1..=d as u64 {
        for p in prime_factors(n) {
            let v = vp(&BigInt::from(n), p).unwrap();
            let prev = &x[(n / p) as usize - 1];
            let image = phi.map_or_else(|| prev.clone(), |f| f(p, prev));
            if !(&x[n as usize - 1] - image).is_multiple_of(&int_pow(p, v)) {
                return Err(Error::InvalidInput(format!(
                    "congruence x_n = phi_p(x_(n/p)) mod p^v fails at p = {p}, n = {n}"
                )));
            }
        }
    }
    let mut r: Vec<BigInt> = Vec::with_capacity(d);
    for n in 1..=d {
        let mut s = x[n - 1].clone();
        for j in (1..n).filter(|j| n % j == 0) {
            s += BigInt::from(j) * num_traits::pow(r[j - 1].clone(), n / j);
        }
        let (q, rem) = s.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(Error::IntegralityViolation(format!("r_{n} = -{s}/{n} is not integral")));
        }
        r.push(-q);
    }
    let ring = series_ring(d as u32);
    let mut product = TruncPoly::one(&ring);
    for (j, rj) in r.iter().enumerate() {
        let factor = TruncPoly::one(&ring)
            .sub(&TruncPoly::monomial(&ring, vec![j as u32 + 1], BigRational::from_integer(rj.clone())));
        product = product.mul(&factor);
    }
    let mut s = TruncPoly::zero(&ring);
    for (n, xn) in x.iter().take(d).enumerate() {
        s = s.add(&TruncPoly::monomial(
            &ring,
            vec![n as u32 + 1],
            BigRational::new(xn.clone(), BigInt::from(n + 1)),
        ));
    }
    let exponential = s.exp()?;
    let roundtrip = exponential == product;
    Ok(DworkFactors { r, product, exponential, roundtrip })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::WittContext;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn constant_minus_one_gives_one_minus_t() {
        let out = dwork_factorization(&ints(&[-1; 8]), None, 8).unwrap();
        assert_eq!(out.r, ints(&[1, 0, 0, 0, 0, 0, 0, 0]));
        assert!(out.roundtrip);
    }

    #[test]
    fn zero_sequence() {
        let out = dwork_factorization(&ints(&[0; 6]), None, 6).unwrap();
        assert!(out.r.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn two_factor_instance() {
        // (1 - t)^2 (1 - 2t) has power sums x_n = -2 - 2^n.
        let xs: Vec<BigInt> = (1..=8).map(|n| BigInt::from(-2 - (1i64 << n))).collect();
        let out = dwork_factorization(&xs, None, 8).unwrap();
        assert!(out.roundtrip);
        let c = out.product.univariate_coeffs(5);
        let expected: Vec<BigRational> =
            [1, -4, 5, -2, 0].iter().map(|&v| BigRational::from_integer(v.into())).collect();
        assert_eq!(c, expected);
    }

    #[test]
    fn congruence_violation_is_reported() {
        let err = dwork_factorization(&ints(&[1, 0, 0, 0]), None, 4).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(ref m) if m.contains("p = 2, n = 2")), "{err}");
    }

    #[test]
    fn character_of_zero_is_one() {
        let x = WittVector::from_i64(WittContext::integers(2, 2).unwrap(), &[3, 5]).unwrap();
        let ch = cartier_character(&ints(&[0, 0]), &x, 8).unwrap();
        assert_eq!(ch.g, TruncPoly::one(ch.g.ring()));
    }

    #[test]
    fn exp_t_has_witt_polynomial_log() {
        let x = WittVector::from_i64(WittContext::integers(3, 1).unwrap(), &[7]).unwrap();
        let c = cartier_log_coefficients(&ints(&[1]), &x, 6).unwrap();
        assert_eq!(c[0], BigRational::from_integer(7.into()));
        // exp(t) is not integral
        assert!(matches!(
            cartier_character(&ints(&[1]), &x, 6),
            Err(Error::IntegralityViolation(_))
        ));
    }

    #[test]
    fn valid_ghosts_give_integral_characters() {
        // a_1 = 4 r, a_0 = a_1 + 2 r' satisfy the congruences at p = 2, n = 2
        let a = ints(&[4 * 3 + 2 * 5, 4 * 3]);
        let ctx = WittContext::integers(2, 2).unwrap();
        let x = WittVector::from_i64(ctx, &[2, -3]).unwrap();
        let x2 = WittVector::from_i64(ctx, &[-1, 4]).unwrap();
        let ch = cartier_character(&a, &x, 8).unwrap();
        assert_eq!(ch.g, ch.g_from_ghosts);
        assert!(cartier_additivity(&a, &x, &x2, 8).unwrap());
    }
}
