use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactalg::{int_pow, require_prime, PAdicScalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    /// `Z/p^N` for the context's prime.
    ModPrimePower(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittContext {
    p: u64,
    len: usize,
    base: BaseRing,
}

impl WittContext {
    pub fn new(p: u64, len: usize, base: BaseRing) -> Result<Self> {
        require_prime(p)?;
        if len == 0 {
            return Err(Error::InvalidInput("Witt length must be at least 1".into()));
        }
        if let BaseRing::ModPrimePower(0) = base {
            return Err(Error::InvalidInput("Z/p^0 is the zero ring".into()));
        }
        Ok(WittContext { p, len, base })
    }

    pub fn integers(p: u64, len: usize) -> Result<Self> {
        Self::new(p, len, BaseRing::Integers)
    }

    pub fn modular(p: u64, len: usize, n: u32) -> Result<Self> {
        Self::new(p, len, BaseRing::ModPrimePower(n))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn with_len(&self, len: usize) -> Result<Self> {
        Self::new(self.p, len, self.base)
    }

    fn modulus(&self) -> Option<BigInt> {
        match self.base {
            BaseRing::Integers => None,
            BaseRing::ModPrimePower(n) => Some(int_pow(self.p, n)),
        }
    }

    fn reduce(&self, x: BigInt) -> BigInt {
        match self.modulus() {
            None => x,
            Some(m) => x.mod_floor(&m),
        }
    }
}

/// Ghost coordinates `w_0, ..., w_{L-1}`, reduced in the base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    ctx: WittContext,
    entries: Vec<BigInt>,
}

impl GhostVector {
    pub fn new(ctx: WittContext, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != ctx.len {
            return Err(Error::InvalidInput(format!(
                "{} ghost entries for length {}",
                entries.len(),
                ctx.len
            )));
        }
        let entries = entries.into_iter().map(|e| ctx.reduce(e)).collect();
        Ok(GhostVector { ctx, entries })
    }

    pub fn context(&self) -> WittContext {
        self.ctx
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Witt vector with these ghost coordinates (base `Z` only).
    pub fn inverse(&self) -> Result<WittVector> {
        if self.ctx.base != BaseRing::Integers {
            return Err(Error::InvalidInput(
                "ghost inversion needs a torsion-free base".into(),
            ));
        }
        ghost_inverse_raw(self.ctx.p, &self.entries).map(|c| WittVector { ctx: self.ctx, comps: c })
    }
}

/// `w_j(x) = sum_{i<=j} p^i x_i^{p^{j-i}}` over `Z`.
fn ghost_raw(p: u64, comps: &[BigInt]) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    // powers[i] tracks x_i^{p^{j-i}} as j grows
    let mut powers: Vec<BigInt> = comps.to_vec();
    let mut out = Vec::with_capacity(comps.len());
    for j in 0..comps.len() {
        let mut w = BigInt::zero();
        let mut pi = BigInt::one();
        for i in 0..=j {
            w += &pi * &powers[i];
            pi *= &pb;
        }
        out.push(w);
        for pw in powers.iter_mut().take(j + 1) {
            *pw = num_traits::pow(pw.clone(), p as usize);
        }
    }
    out
}

fn ghost_inverse_raw(p: u64, g: &[BigInt]) -> Result<Vec<BigInt>> {
    let pb = BigInt::from(p);
    let mut comps: Vec<BigInt> = Vec::with_capacity(g.len());
    let mut powers: Vec<BigInt> = Vec::new();
    for (j, gj) in g.iter().enumerate() {
        // powers[i] = x_i^{p^{j-i}} for i < j
        let mut rest = gj.clone();
        let mut pi = BigInt::one();
        for pw in &powers {
            rest -= &pi * pw;
            pi *= &pb;
        }
        let (q, r) = rest.div_rem(&pi);
        if !r.is_zero() {
            return Err(Error::NotAWittVector { index: j });
        }
        comps.push(q.clone());
        powers.push(q);
        for pw in powers.iter_mut() {
            *pw = num_traits::pow(pw.clone(), p as usize);
        }
    }
    Ok(comps)
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    ctx: WittContext,
    comps: Vec<BigInt>,
}

impl WittVector {
    pub fn new(ctx: WittContext, comps: Vec<BigInt>) -> Result<Self> {
        if comps.len() != ctx.len {
            return Err(Error::InvalidInput(format!(
                "{} components for length {}",
                comps.len(),
                ctx.len
            )));
        }
        let comps = comps.into_iter().map(|c| ctx.reduce(c)).collect();
        Ok(WittVector { ctx, comps })
    }

    pub fn from_i64(ctx: WittContext, comps: &[i64]) -> Result<Self> {
        Self::new(ctx, comps.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(ctx: WittContext) -> Self {
        WittVector { ctx, comps: vec![BigInt::zero(); ctx.len] }
    }

    pub fn one(ctx: WittContext) -> Self {
        Self::teichmuller(&BigInt::one(), ctx)
    }

    pub fn context(&self) -> WittContext {
        self.ctx
    }

    pub fn components(&self) -> &[BigInt] {
        &self.comps
    }

    /// Components as `Z/p^N` scalars (modular base only).
    pub fn component_scalars(&self) -> Option<Vec<PAdicScalar>> {
        match self.ctx.base {
            BaseRing::Integers => None,
            BaseRing::ModPrimePower(n) => self
                .comps
                .iter()
                .map(|c| PAdicScalar::from_bigint(self.ctx.p, n, c).ok())
                .collect(),
        }
    }

    pub fn ghost(&self) -> GhostVector {
        let g = ghost_raw(self.ctx.p, &self.comps);
        GhostVector::new(self.ctx, g).expect("length preserved")
    }

    /// Ghost coordinates of the integer lift of the components.
    fn lifted_ghost(&self) -> Vec<BigInt> {
        ghost_raw(self.ctx.p, &self.comps)
    }

    fn from_lifted_ghost(ctx: WittContext, g: &[BigInt]) -> Result<Self> {
        // Ghosts of integer vectors always invert; a failure is a bug.
        let comps = ghost_inverse_raw(ctx.p, g).map_err(|e| {
            Error::Internal(format!("ghost arithmetic left W(Z): {e}"))
        })?;
        WittVector::new(ctx, comps)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ctx != o.ctx {
            return Err(Error::InvalidInput(format!(
                "Witt contexts differ: {:?} vs {:?}",
                self.ctx, o.ctx
            )));
        }
        Ok(())
    }

    fn combine(&self, o: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        self.check(o)?;
        let (a, b) = (self.lifted_ghost(), o.lifted_ghost());
        let g: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        Self::from_lifted_ghost(self.ctx, &g)
    }

    /// Sum; over `Z/p^N` the components are lifted to `Z`, added there and
    /// reduced, which is well defined by functoriality.
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, |x, y| x - y)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.combine(o, |x, y| x * y)
    }

    pub fn neg(&self) -> Self {
        let g: Vec<BigInt> = self.lifted_ghost().into_iter().map(|x| -x).collect();
        Self::from_lifted_ghost(self.ctx, &g).expect("negation stays integral")
    }

    pub fn pow(&self, e: u32) -> Self {
        let g: Vec<BigInt> =
            self.lifted_ghost().into_iter().map(|x| num_traits::pow(x, e as usize)).collect();
        Self::from_lifted_ghost(self.ctx, &g).expect("powers stay integral")
    }

    pub fn teichmuller(a: &BigInt, ctx: WittContext) -> Self {
        let mut comps = vec![BigInt::zero(); ctx.len];
        comps[0] = a.clone();
        WittVector::new(ctx, comps).expect("length matches")
    }

    /// The image of the integer `m`, whose ghost vector is constant.
    pub fn from_int(m: &BigInt, ctx: WittContext) -> Self {
        let g = vec![m.clone(); ctx.len];
        Self::from_lifted_ghost(ctx, &g).expect("integers are Witt vectors")
    }

    /// `V(x) = (0, x_0, ..., x_{L-2})` at fixed length.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![BigInt::zero()];
        comps.extend(self.comps.iter().take(self.ctx.len - 1).cloned());
        WittVector { ctx: self.ctx, comps }
    }

    /// `F: W_L -> W_{L-1}` with `w_i(F x) = w_{i+1}(x)`.
    pub fn frobenius(&self) -> Result<Self> {
        if self.ctx.len < 2 {
            return Err(Error::InvalidInput("Frobenius needs length at least 2".into()));
        }
        let g = self.lifted_ghost();
        Self::from_lifted_ghost(self.ctx.with_len(self.ctx.len - 1)?, &g[1..])
    }

    pub fn truncate(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.ctx.len {
            return Err(Error::InvalidInput(format!("cannot truncate to length {len}")));
        }
        Ok(WittVector { ctx: self.ctx.with_len(len)?, comps: self.comps[..len].to_vec() })
    }

    /// `delta(x) = (F(x) - x^p)/p` in `W_{L-1}(Z)`.
    pub fn delta(&self) -> Result<Self> {
        if self.ctx.base != BaseRing::Integers {
            return Err(Error::InvalidInput("delta needs the torsion-free base Z".into()));
        }
        if self.ctx.len < 2 {
            return Err(Error::InvalidInput("delta needs length at least 2".into()));
        }
        let p = self.ctx.p;
        let g = self.lifted_ghost();
        let pb = BigInt::from(p);
        let d: Vec<BigInt> = (0..self.ctx.len - 1)
            .map(|i| {
                let t = &g[i + 1] - num_traits::pow(g[i].clone(), p as usize);
                let (q, r) = t.div_rem(&pb);
                debug_assert!(r.is_zero(), "ghost congruence w_(i+1) = w_i^p mod p");
                q
            })
            .collect();
        Self::from_lifted_ghost(self.ctx.with_len(self.ctx.len - 1)?, &d)
    }

    /// Reduce components of a vector over `Z` into `Z/p^n`.
    pub fn reduce(&self, n: u32) -> Result<Self> {
        WittVector::new(WittContext::modular(self.ctx.p, self.ctx.len, n)?, self.comps.clone())
    }

    /// Integer lift of the components.
    pub fn lift(&self) -> Self {
        WittVector {
            ctx: WittContext::integers(self.ctx.p, self.ctx.len).unwrap(),
            comps: self.comps.clone(),
        }
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[p={}, {:?}]{}", self.ctx.p, self.ctx.base, self)
    }
}
