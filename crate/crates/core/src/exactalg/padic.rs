use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::arith::require_prime;
use crate::{Error, Result};

/// An element of `Z/p^N`, stored as a reduced residue.
///
/// The modulus must fit in 63 bits so that products fit in `u128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicScalar {
    p: u64,
    n: u32,
    modulus: u64,
    r: u64,
}

fn modulus_of(p: u64, n: u32) -> Result<u64> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let mut m: u64 = 1;
    for _ in 0..n {
        m = m
            .checked_mul(p)
            .filter(|m| *m < (1u64 << 63))
            .ok_or_else(|| Error::Precision(format!("{p}^{n} does not fit in 63 bits")))?;
    }
    Ok(m)
}

impl PAdicScalar {
    pub fn new(p: u64, n: u32, value: i64) -> Result<Self> {
        Self::from_bigint(p, n, &BigInt::from(value))
    }

    pub fn from_bigint(p: u64, n: u32, value: &BigInt) -> Result<Self> {
        let modulus = modulus_of(p, n)?;
        let r = value.mod_floor(&BigInt::from(modulus)).to_u64().unwrap();
        Ok(PAdicScalar { p, n, modulus, r })
    }

    pub fn zero(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 0)
    }

    pub fn one(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 1)
    }

    fn with(&self, r: u64) -> Self {
        PAdicScalar { r, ..*self }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.r
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.r)
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn symmetric(&self) -> BigInt {
        if self.r > self.modulus / 2 {
            BigInt::from(self.r) - BigInt::from(self.modulus)
        } else {
            BigInt::from(self.r)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }

    fn check(&self, other: &Self) {
        assert!(
            self.same_ring(other),
            "Z/{}^{} scalar combined with Z/{}^{} scalar",
            self.p,
            self.n,
            other.p,
            other.n
        );
    }

    /// `None` for zero, otherwise the exponent of p dividing the residue.
    pub fn valuation(&self) -> Option<u32> {
        if self.r == 0 {
            return None;
        }
        let (mut r, mut v) = (self.r, 0);
        while r % self.p == 0 {
            r /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self) -> bool {
        self.r % self.p != 0
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let e = BigInt::from(self.r).extended_gcd(&BigInt::from(self.modulus));
        Some(self.with(e.x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.with(1 % self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self / d` when `v(self) >= v(d)`; the quotient is one of the
    /// `p^{v(d)}` solutions, chosen canonically in `[0, p^{N - v(d)})`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check(d);
        let vd = d.valuation()?;
        if self.r == 0 {
            return Some(self.with(0));
        }
        if self.valuation()? < vd {
            return None;
        }
        let pv = self.p.pow(vd);
        let m = self.modulus / pv;
        let a = self.r / pv;
        let u = d.r / pv;
        let inv = BigInt::from(u).extended_gcd(&BigInt::from(m)).x.mod_floor(&BigInt::from(m));
        let q = (BigInt::from(a) * inv).mod_floor(&BigInt::from(m));
        Some(self.with(q.to_u64().unwrap()))
    }
}

impl Add for PAdicScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        self.with(((self.r as u128 + o.r as u128) % self.modulus as u128) as u64)
    }
}

impl Sub for PAdicScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        self.with(((self.r as u128 + self.modulus as u128 - o.r as u128) % self.modulus as u128) as u64)
    }
}

impl Mul for PAdicScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        self.with(((self.r as u128 * o.r as u128) % self.modulus as u128) as u64)
    }
}

impl Neg for PAdicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        self.with((self.modulus - self.r) % self.modulus)
    }
}

impl fmt::Debug for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.r, self.p, self.n)
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

impl From<PAdicScalar> for BigInt {
    fn from(x: PAdicScalar) -> BigInt {
        x.to_bigint()
    }
}
