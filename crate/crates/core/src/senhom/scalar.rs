use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{
    int_pow, require_prime, smith_normal_form, smith_normal_form_valued, vp, Matrix, PAdicScalar, ValuedRing,
};
use crate::{Error, Result};

/// Rank and nonunit elementary divisor orders of a matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub rank: usize,
    pub orders: Vec<u64>,
}

/// Coefficients the homology engine can run over.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn summarize(m: &Matrix<Self>, one: &Self) -> Result<Summary>;
}

fn order_u64(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Precision(format!("torsion order {x} exceeds 64 bits")))
}

impl Scalar for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn summarize(m: &Matrix<Self>, _one: &Self) -> Result<Summary> {
        let s = smith_normal_form(m);
        let mut out = Summary::default();
        for d in s.divisors.iter().filter(|d| !d.is_zero()) {
            out.rank += 1;
            if !d.abs().is_one() {
                out.orders.push(order_u64(&d.abs())?);
            }
        }
        Ok(out)
    }
}

fn valued_summary<T: ValuedRing>(m: &Matrix<T>, one: &T, p: u64) -> Result<Summary> {
    let s = smith_normal_form_valued(m, one)?;
    let mut out = Summary::default();
    for d in &s.divisors {
        if let Some(v) = d.valuation() {
            out.rank += 1;
            if v > 0 {
                out.orders.push(order_u64(&int_pow(p, v))?);
            }
        }
    }
    Ok(out)
}

impl Scalar for PAdicScalar {
    fn zero_like(&self) -> Self {
        ValuedRing::zero_like(self)
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negate(&self) -> Self {
        -*self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn summarize(m: &Matrix<Self>, one: &Self) -> Result<Summary> {
        valued_summary(m, one, one.prime())
    }
}

/// `a/b` in `Z/p^n`, for `b` prime to `p`.
pub fn rational_to_padic(x: &BigRational, p: u64, n: u32) -> Result<PAdicScalar> {
    let num = PAdicScalar::from_bigint(p, n, x.numer())?;
    let den = PAdicScalar::from_bigint(p, n, x.denom())?;
    let inv = den
        .inverse()
        .ok_or_else(|| Error::IntegralityViolation(format!("{x} is not p-integral for p = {p}")))?;
    Ok(num * inv)
}

pub fn rational_to_integer(x: &BigRational) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::IntegralityViolation(format!("{x} is not an integer")))
    }
}

/// A totally ramified extension `R = (Z/p^N)[u]/E(u)` with `E` Eisenstein.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DVRDescriptor {
    pub p: u64,
    pub precision: u32,
    /// `c_0, ..., c_{e-1}` of the monic `E(u) = u^e + c_{e-1}u^{e-1} + ... + c_0`.
    pub eisenstein: Vec<i64>,
}

impl DVRDescriptor {
    pub fn new(p: u64, precision: u32, eisenstein: Vec<i64>) -> Result<Self> {
        require_prime(p)?;
        if eisenstein.is_empty() {
            return Err(Error::InvalidInput("E must have degree at least 1".into()));
        }
        let pz = p as i64;
        if eisenstein.iter().any(|c| c % pz != 0) || eisenstein[0] % (pz * pz) == 0 {
            return Err(Error::InvalidInput(format!("{:?} is not Eisenstein at {p}", eisenstein)));
        }
        Ok(DVRDescriptor { p, precision, eisenstein })
    }

    pub fn ramification(&self) -> usize {
        self.eisenstein.len()
    }

    /// Display form such as `u^2 - 3`.
    pub fn polynomial_string(&self) -> String {
        let e = self.ramification();
        let mut s = if e == 1 { "u".to_string() } else { format!("u^{e}") };
        for i in (0..e).rev() {
            let c = self.eisenstein[i];
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { " - " } else { " + " };
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            let a = c.unsigned_abs();
            let body = if i > 0 && a == 1 { mono } else if i > 0 { format!("{a}*{mono}") } else { a.to_string() };
            s.push_str(sign);
            s.push_str(&body);
        }
        s
    }

    pub fn ring(&self) -> Arc<DvrRing> {
        let modulus = int_pow(self.p, self.precision);
        let e = self.ramification();
        let c: Vec<BigInt> = self.eisenstein.iter().map(|&x| BigInt::from(x).mod_floor(&modulus)).collect();
        // π^e = -sum c_i π^i = p w0.
        let w0: Vec<BigInt> =
            self.eisenstein.iter().map(|&x| BigInt::from(-x / self.p as i64).mod_floor(&modulus)).collect();
        let mut ring = DvrRing { p: self.p, n: self.precision, e, modulus, c, w0_inv: vec![] };
        let w0 = DvrElement::raw(Arc::new(ring.clone()), w0);
        ring.w0_inv = w0.unit_inverse().coeffs;
        Arc::new(ring)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrRing {
    p: u64,
    n: u32,
    e: usize,
    modulus: BigInt,
    c: Vec<BigInt>,
    w0_inv: Vec<BigInt>,
}

/// An element of `R`, written `sum a_i π^i` with `i < e`.
#[derive(Clone, Debug)]
pub struct DvrElement {
    ring: Arc<DvrRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for DvrElement {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs && *self.ring == *o.ring
    }
}

impl DvrElement {
    fn raw(ring: Arc<DvrRing>, mut coeffs: Vec<BigInt>) -> Self {
        coeffs.resize(ring.e, BigInt::zero());
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(&ring.modulus);
        }
        DvrElement { ring, coeffs }
    }

    pub fn from_int(ring: &Arc<DvrRing>, k: &BigInt) -> Self {
        DvrElement::raw(ring.clone(), vec![k.clone()])
    }

    pub fn pi(ring: &Arc<DvrRing>) -> Self {
        if ring.e == 1 {
            // π = -c_0
            return DvrElement::raw(ring.clone(), vec![-ring.c[0].clone()]);
        }
        let mut v = vec![BigInt::zero(); ring.e];
        v[1] = BigInt::one();
        DvrElement::raw(ring.clone(), v)
    }

    /// `E'(π)`.
    pub fn e_prime(ring: &Arc<DvrRing>) -> Self {
        let e = ring.e;
        let mut v = vec![BigInt::zero(); e];
        for (i, c) in ring.c.iter().enumerate().skip(1) {
            v[i - 1] += c * BigInt::from(i);
        }
        let mut out = DvrElement::raw(ring.clone(), v);
        // e π^{e-1}
        let pi = DvrElement::pi(ring);
        let mut lead = DvrElement::from_int(ring, &BigInt::from(e));
        for _ in 0..e - 1 {
            lead = lead.times(&pi);
        }
        out = out.plus(&lead);
        out
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn div_pi(&self) -> Self {
        // x/π = sum_{i>=1} a_i π^{i-1} + (a_0/p) π^{e-1} w0^{-1}.
        let r = &self.ring;
        let e = r.e;
        let mut head = vec![BigInt::zero(); e];
        head[..e - 1].clone_from_slice(&self.coeffs[1..]);
        let head = DvrElement::raw(r.clone(), head);
        let mut tail = vec![BigInt::zero(); e];
        tail[e - 1] = &self.coeffs[0] / BigInt::from(r.p);
        let tail = DvrElement::raw(r.clone(), tail).times(&DvrElement::raw(r.clone(), r.w0_inv.clone()));
        head.plus(&tail)
    }

    fn unit_inverse(&self) -> Self {
        let r = &self.ring;
        let p = BigInt::from(r.p);
        let a0 = self.coeffs[0].mod_floor(&p);
        let inv0 = a0.extended_gcd(&p).x.mod_floor(&p);
        let mut y = DvrElement::from_int(r, &inv0);
        let one = DvrElement::from_int(r, &BigInt::one());
        let two = DvrElement::from_int(r, &BigInt::from(2));
        // Newton: y <- y(2 - x y); precision doubles each pass.
        for _ in 0..64 {
            if self.times(&y) == one {
                break;
            }
            y = y.times(&two.plus(&self.times(&y).negate()));
        }
        y
    }
}

impl Scalar for DvrElement {
    fn zero_like(&self) -> Self {
        DvrElement::raw(self.ring.clone(), vec![])
    }
    fn plus(&self, o: &Self) -> Self {
        let v = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        DvrElement::raw(self.ring.clone(), v)
    }
    fn times(&self, o: &Self) -> Self {
        let r = &self.ring;
        let e = r.e;
        let mut prod = vec![BigInt::zero(); 2 * e];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // u^e = -sum c_i u^i
        for k in (e..2 * e).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for i in 0..e {
                prod[k - e + i] -= &top * &r.c[i];
            }
        }
        prod.truncate(e);
        DvrElement::raw(r.clone(), prod)
    }
    fn negate(&self) -> Self {
        DvrElement::raw(self.ring.clone(), self.coeffs.iter().map(|a| -a).collect())
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn summarize(m: &Matrix<Self>, one: &Self) -> Result<Summary> {
        valued_summary(m, one, one.ring.p)
    }
}

impl ValuedRing for DvrElement {
    fn zero_like(&self) -> Self {
        Scalar::zero_like(self)
    }
    fn one_like(&self) -> Self {
        DvrElement::from_int(&self.ring, &BigInt::one())
    }
    fn add(&self, o: &Self) -> Self {
        self.plus(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn mul(&self, o: &Self) -> Self {
        self.times(o)
    }
    /// `π`-adic valuation `min_i (e v_p(a_i) + i)`.
    fn valuation(&self) -> Option<u32> {
        let e = self.ring.e as u32;
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| vp(a, self.ring.p).map(|v| e * v + i as u32))
            .min()
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let vd = d.valuation()?;
        let Some(va) = self.valuation() else { return Some(Scalar::zero_like(self)) };
        if va < vd {
            return None;
        }
        let (mut a, mut b) = (self.clone(), d.clone());
        for _ in 0..vd {
            a = a.div_pi();
            b = b.div_pi();
        }
        Some(a.times(&b.unit_inverse()))
    }
    fn normalizing_unit(&self) -> Self {
        let Some(v) = self.valuation() else { return self.one_like() };
        let mut b = self.clone();
        for _ in 0..v {
            b = b.div_pi();
        }
        b.unit_inverse()
    }
    fn same_ring(&self, o: &Self) -> bool {
        *self.ring == *o.ring
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_validation() {
        assert!(DVRDescriptor::new(3, 8, vec![-3, 0]).is_ok());
        assert!(DVRDescriptor::new(3, 8, vec![-9, 0]).is_err());
        assert!(DVRDescriptor::new(3, 8, vec![-3, 1]).is_err());
        assert_eq!(DVRDescriptor::new(3, 8, vec![-3, 0]).unwrap().polynomial_string(), "u^2 - 3");
    }

    #[test]
    fn pi_arithmetic() {
        let d = DVRDescriptor::new(3, 6, vec![-3, 0, 0]).unwrap();
        let r = d.ring();
        let pi = DvrElement::pi(&r);
        assert_eq!(pi.valuation(), Some(1));
        let pi3 = pi.times(&pi).times(&pi);
        assert_eq!(pi3, DvrElement::from_int(&r, &BigInt::from(3)));
        assert_eq!(pi3.valuation(), Some(3));
        // E'(π) = 3π² has valuation 5.
        assert_eq!(DvrElement::e_prime(&r).valuation(), Some(5));
        let q = pi3.div_exact(&pi).unwrap();
        assert_eq!(q.times(&pi), pi3);
        let u = DvrElement::from_int(&r, &BigInt::from(2)).plus(&pi);
        assert_eq!(u.times(&u.unit_inverse()), u.one_like());
    }

    #[test]
    fn unramified_case() {
        let d = DVRDescriptor::new(5, 6, vec![-5]).unwrap();
        let r = d.ring();
        assert_eq!(DvrElement::pi(&r), DvrElement::from_int(&r, &BigInt::from(5)));
        assert_eq!(DvrElement::e_prime(&r), DvrElement::from_int(&r, &BigInt::one()));
    }
}
