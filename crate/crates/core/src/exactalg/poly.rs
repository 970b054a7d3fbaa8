use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::vp_rational;
use crate::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A polynomial variable with its homological degree and truncation weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub degree: i32,
    /// Contribution of one power of this variable to the truncation bound.
    /// Parameters that should never truncate get weight 0.
    pub weight: u32,
    pub max_exp: Option<u32>,
}

impl Var {
    pub fn new(name: &str) -> Self {
        Var { name: name.to_string(), degree: 0, weight: 1, max_exp: None }
    }

    pub fn degree(mut self, d: i32) -> Self {
        self.degree = d;
        self
    }

    pub fn weight(mut self, w: u32) -> Self {
        self.weight = w;
        self
    }

    pub fn max_exp(mut self, m: u32) -> Self {
        self.max_exp = Some(m);
        self
    }
}

/// Variables plus a truncation rule: terms whose weighted degree exceeds
/// `bound`, or whose exponent exceeds a variable's `max_exp`, are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<Var>,
    bound: Option<u32>,
}

impl PolyRing {
    pub fn new(vars: Vec<Var>, bound: Option<u32>) -> Arc<Self> {
        Arc::new(PolyRing { vars, bound })
    }

    /// Untruncated polynomial ring on the given names.
    pub fn polynomial(names: &[&str]) -> Arc<Self> {
        Self::new(names.iter().map(|n| Var::new(n)).collect(), None)
    }

    /// Univariate series ring truncated above `x^bound`.
    pub fn series(name: &str, bound: u32) -> Arc<Self> {
        Self::new(vec![Var::new(name)], Some(bound))
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn weight(&self, exps: &[u32]) -> u64 {
        exps.iter().zip(&self.vars).map(|(e, v)| *e as u64 * v.weight as u64).sum()
    }

    pub fn hom_degree(&self, exps: &[u32]) -> i64 {
        exps.iter().zip(&self.vars).map(|(e, v)| *e as i64 * v.degree as i64).sum()
    }

    pub fn admits(&self, exps: &[u32]) -> bool {
        if let Some(b) = self.bound {
            if self.weight(exps) > b as u64 {
                return false;
            }
        }
        exps.iter().zip(&self.vars).all(|(e, v)| v.max_exp.map_or(true, |m| *e <= m))
    }

    pub fn monomial_string(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.name.clone() } else { format!("{}^{}", v.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Sparse truncated polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct TruncPoly<C> {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> TruncPoly<C> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        TruncPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: C) -> Self {
        Self::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, exps: Vec<u32>, c: C) -> Self {
        assert_eq!(exps.len(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() && ring.admits(&exps) {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Self::monomial(ring, e, C::one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring.index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Self::var(ring, i)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    /// Coefficients of a univariate polynomial, indexed by exponent.
    pub fn univariate_coeffs(&self, len: usize) -> Vec<C> {
        assert_eq!(self.ring.nvars(), 1, "not univariate");
        (0..len).map(|k| self.coeff(&[k as u32])).collect()
    }

    fn same_ring(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring,
            "polynomials from different rings"
        );
    }

    fn insert_add(terms: &mut BTreeMap<Vec<u32>, C>, e: Vec<u32>, c: C) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_ring(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            Self::insert_add(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = self.map_coeffs(|c| c.clone() * s.clone());
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = f(c);
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        TruncPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_ring(o);
        let n = self.ring.nvars();
        let bound = self.ring.bound.map(|b| b as u64);
        let mut out = BTreeMap::new();
        let mut e = vec![0u32; n];
        for (ea, ca) in &self.terms {
            let wa = self.ring.weight(ea);
            if bound.map_or(false, |b| wa > b) {
                continue;
            }
            for (eb, cb) in &o.terms {
                if bound.map_or(false, |b| wa + self.ring.weight(eb) > b) {
                    continue;
                }
                for i in 0..n {
                    e[i] = ea[i] + eb[i];
                }
                if self.ring.admits(&e) {
                    Self::insert_add(&mut out, e.clone(), ca.clone() * cb.clone());
                }
            }
        }
        TruncPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The ring map sending variable `i` to `images[i]` (all in one target ring).
    pub fn substitute(&self, images: &[TruncPoly<C>]) -> TruncPoly<C> {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .expect("substitution into a ring with no variables");
        let mut powers: Vec<Vec<TruncPoly<C>>> =
            images.iter().map(|_| vec![TruncPoly::one(&target)]).collect();
        let mut out = TruncPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut term = TruncPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-home into another ring, matching variables by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Self> {
        let map: Vec<usize> = self
            .ring
            .vars
            .iter()
            .map(|v| {
                target
                    .index(&v.name)
                    .ok_or_else(|| Error::InvalidInput(format!("no variable {} in target", v.name)))
            })
            .collect::<Result<_>>()?;
        let mut out = TruncPoly::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.nvars()];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] = k;
            }
            if target.admits(&f) {
                Self::insert_add(&mut out.terms, f, c.clone());
            }
        }
        Ok(out)
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| keep(e));
        out
    }

    pub fn is_homogeneous(&self, degree: i64) -> bool {
        self.terms.keys().all(|e| self.ring.hom_degree(e) == degree)
    }

    /// Largest exponent of variable `i` that occurs.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }
}

impl<C: Coeff> fmt::Display for TruncPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest weighted degree first, then reverse lexicographic.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            self.ring.weight(b).cmp(&self.ring.weight(a)).then_with(|| b.cmp(a))
        });
        let mut first = true;
        for (e, c) in terms {
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            let mono = self.ring.monomial_string(e);
            let body = match (cs.as_str(), mono.as_str()) {
                (_, "1") => cs.clone(),
                ("1", m) => m.to_string(),
                (c, m) => format!("{c}*{m}"),
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for TruncPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncPoly({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpLog {
    Exp,
    Log,
}

impl TruncPoly<BigRational> {
    pub fn from_integer_poly(p: &TruncPoly<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &p.terms {
            terms.insert(e.clone(), BigRational::from_integer(c.clone()));
        }
        TruncPoly { ring: p.ring.clone(), terms }
    }

    /// The integer polynomial, if every coefficient is integral.
    pub fn to_integer_poly(&self) -> Option<TruncPoly<BigInt>> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            terms.insert(e.clone(), c.to_integer());
        }
        Some(TruncPoly { ring: self.ring.clone(), terms })
    }

    /// First monomial (in storage order) whose coefficient is not p-integral.
    pub fn first_non_p_integral(&self, p: u64) -> Option<(Vec<u32>, BigRational)> {
        self.terms
            .iter()
            .find(|(_, c)| vp_rational(c, p).map_or(false, |v| v < 0))
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    /// Minimal p-adic valuation over all coefficients; `None` for zero.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.terms.values().filter_map(|c| vp_rational(c, p)).min()
    }

    /// Reduce coefficients into `[0, m)`; denominators must be units mod `m`.
    pub fn reduce_mod(&self, m: &BigInt) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = c.denom();
            let g = d.extended_gcd(m);
            if !g.gcd.is_one() {
                return Err(Error::IntegralityViolation(format!(
                    "coefficient {c} of {} is not invertible mod {m}",
                    self.ring.monomial_string(e)
                )));
            }
            let r = (c.numer() * g.x).mod_floor(m);
            if !r.is_zero() {
                terms.insert(e.clone(), BigRational::from_integer(r));
            }
        }
        Ok(TruncPoly { ring: self.ring.clone(), terms })
    }

    fn check_nilpotent(&self) -> Result<()> {
        if self.ring.bound.is_none() {
            return Err(Error::InvalidInput("exp/log need a truncation bound".into()));
        }
        if let Some(e) = self.terms.keys().find(|e| self.ring.weight(e) == 0) {
            return Err(Error::InvalidInput(format!(
                "term {} has weight 0 and is not topologically nilpotent",
                self.ring.monomial_string(e)
            )));
        }
        Ok(())
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::InvalidInput("exp needs constant term 0".into()));
        }
        self.check_nilpotent()?;
        let mut out = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        let mut k = 1i64;
        loop {
            term = term.mul(self).scale(&rat(1, k));
            if term.is_zero() {
                return Ok(out);
            }
            out = out.add(&term);
            k += 1;
        }
    }

    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != BigRational::one() {
            return Err(Error::InvalidInput("log needs constant term 1".into()));
        }
        let g = self.sub(&Self::one(&self.ring));
        g.check_nilpotent()?;
        let mut out = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        let mut k = 1i64;
        loop {
            power = power.mul(&g);
            if power.is_zero() {
                return Ok(out);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&rat(sign, k)));
            k += 1;
        }
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::InvalidInput("series with zero constant term".into()));
        }
        let ci = c.recip();
        let g = Self::one(&self.ring).sub(&self.scale(&ci));
        g.check_nilpotent()?;
        // 1/(c(1 - g)) = c^{-1} * sum g^k
        let mut out = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        loop {
            power = power.mul(&g);
            if power.is_zero() {
                return Ok(out.scale(&ci));
            }
            out = out.add(&power);
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_denominator(&self) -> BigInt {
        self.terms.values().map(|c| c.denom().abs()).max().unwrap_or_else(BigInt::one)
    }
}

/// Formal exponential or logarithm, truncated at the input's bound.
pub fn truncated_exp_log(f: &TruncPoly<BigRational>, mode: ExpLog) -> Result<TruncPoly<BigRational>> {
    match mode {
        ExpLog::Exp => f.exp(),
        ExpLog::Log => f.log(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(bound: u32) -> Arc<PolyRing> {
        PolyRing::series("t", bound)
    }

    #[test]
    fn log_then_exp_is_identity() {
        let r = series(10);
        let one_plus_t = TruncPoly::<BigRational>::one(&r).add(&TruncPoly::var(&r, 0));
        let back = one_plus_t.log().unwrap().exp().unwrap();
        assert_eq!(back, one_plus_t);
    }

    #[test]
    fn exp_of_log_one_minus_t() {
        let r = series(12);
        let mut s = TruncPoly::zero(&r);
        for n in 1..=12 {
            s = s.add(&TruncPoly::monomial(&r, vec![n], rat(-1, n as i64)));
        }
        let e = s.exp().unwrap();
        assert_eq!(e.to_string(), "-t + 1");
    }

    #[test]
    fn exp_of_t_plus_t_squared() {
        let r = series(3);
        let t = TruncPoly::<BigRational>::var(&r, 0);
        let e = t.add(&t.mul(&t)).exp().unwrap();
        let expected: Vec<BigRational> = vec![rat(1, 1), rat(1, 1), rat(3, 2), rat(7, 6)];
        assert_eq!(e.univariate_coeffs(4), expected);
    }

    #[test]
    fn exp_rejects_constant_term() {
        let r = series(3);
        assert!(TruncPoly::<BigRational>::one(&r).exp().is_err());
        assert!(TruncPoly::<BigRational>::var(&r, 0).log().is_err());
    }

    #[test]
    fn truncation_by_weight_and_exponent() {
        let r = PolyRing::new(vec![Var::new("x"), Var::new("l").weight(0).max_exp(2)], Some(3));
        let x = TruncPoly::<BigInt>::var(&r, 0);
        let l = TruncPoly::<BigInt>::var(&r, 1);
        let p = x.add(&l).pow(5);
        assert!(p.terms().all(|(e, _)| e[0] <= 3 && e[1] <= 2));
        assert_eq!(p.coeff(&[3, 2]), BigInt::from(10));
    }

    #[test]
    fn display_is_readable() {
        let r = PolyRing::polynomial(&["v1", "t1"]);
        let v = TruncPoly::<BigInt>::var(&r, 0);
        let t = TruncPoly::<BigInt>::var(&r, 1);
        let p = v.add(&t.scale(&BigInt::from(2))).sub(&v.mul(&t));
        assert_eq!(p.to_string(), "-v1*t1 + v1 + 2*t1");
    }

    #[test]
    fn inverse_series() {
        let r = series(6);
        let t = TruncPoly::<BigRational>::var(&r, 0);
        let f = TruncPoly::constant(&r, rat(3, 1)).add(&t);
        assert_eq!(f.mul(&f.inverse().unwrap()), TruncPoly::one(&r));
    }

    #[test]
    fn reduction_mod_prime() {
        let r = series(4);
        let f = TruncPoly::monomial(&r, vec![1], rat(1, 2)).add(&TruncPoly::monomial(&r, vec![2], rat(3, 1)));
        let g = f.reduce_mod(&BigInt::from(3)).unwrap();
        assert_eq!(g.to_string(), "2*t");
        assert!(f.reduce_mod(&BigInt::from(2)).is_err());
    }
}
