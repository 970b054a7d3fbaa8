use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exactalg::{binomial, require_prime, PolyRing, TruncPoly};
use crate::{Error, Result};

type Series = TruncPoly<BigRational>;

/// `Z/p^N[q]/(q-1)^K` with `φ(q) = q^p` and `d = [p]_q`, computed over `Q`
/// in the variable `h = q - 1`.
#[derive(Clone, Debug)]
pub struct DeltaRingContext {
    pub p: u64,
    pub precision: u32,
    pub truncation: u32,
    ring: Arc<PolyRing>,
}

impl DeltaRingContext {
    pub fn new(p: u64, precision: u32, truncation: u32) -> Result<Self> {
        require_prime(p)?;
        if truncation < 2 || precision < 1 {
            return Err(Error::InvalidInput("need K >= 2 and N >= 1".into()));
        }
        Ok(DeltaRingContext { p, precision, truncation, ring: PolyRing::series("h", truncation - 1) })
    }

    pub fn h(&self) -> Series {
        TruncPoly::var(&self.ring, 0)
    }

    pub fn from_coeffs(&self, c: &[BigRational]) -> Series {
        c.iter().enumerate().fold(TruncPoly::zero(&self.ring), |acc, (i, a)| {
            acc.add(&TruncPoly::monomial(&self.ring, vec![i as u32], a.clone()))
        })
    }

    /// `[p]_q = sum_{i=1}^p C(p, i) h^{i-1}`.
    pub fn d(&self) -> Series {
        let c: Vec<BigRational> = (1..=self.p).map(|i| BigRational::from_integer(binomial(self.p, i))).collect();
        self.from_coeffs(&c)
    }

    pub fn phi(&self, f: &Series) -> Series {
        let one = TruncPoly::one(&self.ring);
        let image = one.add(&self.h()).pow(self.p).sub(&one);
        f.substitute(&[image])
    }

    pub fn delta(&self, f: &Series) -> Series {
        let inv_p = BigRational::new(BigInt::from(1), BigInt::from(self.p));
        self.phi(f).sub(&f.pow(self.p)).scale(&inv_p)
    }

    pub fn divide_by_d(&self, f: &Series) -> Result<Series> {
        Ok(f.mul(&self.d().inverse()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaStep {
    pub k: u32,
    /// Smallest `p`-adic valuation among the coefficients of `φ(δ^k t)/d`.
    pub phi_quotient_valuation: Option<i64>,
    /// Same for `(δ^k(t)^p + p δ^{k+1}(t))/d`.
    pub sseq_quotient_valuation: Option<i64>,
    pub phi_divisible: bool,
    pub sseq_divisible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub p: u64,
    pub n: u32,
    pub precision: u32,
    pub truncation: u32,
    pub steps: Vec<DeltaStep>,
}

impl DeltaReport {
    pub fn all_divisible(&self) -> bool {
        self.steps.iter().all(|s| s.phi_divisible && s.sseq_divisible)
    }
}

/// Divisibility by `[p]_q` of `φ(δ^k t)` and `δ^k(t)^p + p δ^{k+1}(t)` for
/// `t = (q-1)^{n(p-1)} / [p]_q` and `k <= bound`.
pub fn delta_ring_check(n: u32, bound: u32, ctx: &DeltaRingContext) -> Result<DeltaReport> {
    let e = n as u64 * (ctx.p - 1);
    if e >= ctx.truncation as u64 {
        return Err(Error::Precision(format!(
            "(q-1)^{e} vanishes modulo (q-1)^{}; raise the truncation",
            ctx.truncation
        )));
    }
    let x = ctx.h().pow(e);
    delta_ring_check_element(&x, n, bound, ctx)
}

/// As `delta_ring_check` with an explicit numerator `x`.
pub fn delta_ring_check_element(x: &Series, n: u32, bound: u32, ctx: &DeltaRingContext) -> Result<DeltaReport> {
    let p = ctx.p;
    let pq = BigRational::from_integer(BigInt::from(p));
    let valuation = |f: &Series| f.min_valuation(p);
    // Valuations at or above N vanish in Z/p^N; only negatives matter here.
    let ok = |v: Option<i64>| v.map_or(true, |v| v >= 0);
    let mut cur = ctx.divide_by_d(x)?;
    let mut steps = Vec::new();
    for k in 0..=bound {
        let next = ctx.delta(&cur);
        let q1 = ctx.divide_by_d(&ctx.phi(&cur))?;
        let q2 = ctx.divide_by_d(&cur.pow(p).add(&next.scale(&pq)))?;
        let (v1, v2) = (valuation(&q1), valuation(&q2));
        steps.push(DeltaStep {
            k,
            phi_quotient_valuation: v1,
            sseq_quotient_valuation: v2,
            phi_divisible: ok(v1),
            sseq_divisible: ok(v2),
        });
        cur = next;
    }
    Ok(DeltaReport { p, n, precision: ctx.precision, truncation: ctx.truncation, steps })
}
