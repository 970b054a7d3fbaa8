use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::vector::{BaseRing, GhostVector, WittContext, WittVector};
use crate::exactalg::{int_pow, require_prime};
use crate::{Error, Result};

/// The Witt vector over `Z` with ghost coordinates `1 - p^{p^{j+1} - 1}`.
pub fn gabber_y(p: u64, len: usize) -> Result<WittVector> {
    require_prime(p)?;
    let ctx = WittContext::integers(p, len)?;
    let g = (0..len)
        .map(|j| {
            let e = num_traits::pow(p, j + 1) - 1;
            BigInt::one() - num_traits::pow(BigInt::from(p), e as usize)
        })
        .collect();
    GhostVector::new(ctx, g)?.inverse()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// `x` has length `L + 1` and satisfies `F(x) = y`.
    Success {
        x: WittVector,
        /// Every ghost coordinate of `x` is `1 mod p`.
        ghosts_one_mod_p: bool,
        /// `x_j` divisible by `p` for all `j >= 1`.
        higher_divisible: bool,
        /// Every component divisible by `p`.
        all_divisible: bool,
    },
    /// At `stage` the recursion demands `p^stage * x_stage = residue`
    /// modulo `p^(stage+1)`, which has no solution.
    Failure { stage: usize, coefficient: BigInt, residue: BigInt, modulus: BigInt },
}

impl SolveOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, SolveOutcome::Success { .. })
    }

    pub fn witness(&self) -> Option<String> {
        match self {
            SolveOutcome::Failure { stage, coefficient, residue, modulus } => {
                Some(format!("{coefficient}x_{stage} ≡ {residue} (mod {modulus})"))
            }
            _ => None,
        }
    }
}

fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Solve `F(x) = y` by the ghost recursion
/// `p^n x_n = w_{n-1}(y) - sum_{i<n} p^i x_i^{p^{n-i}}`, with `x_0` the
/// residue of `w_0(y)` in `[0, p)`.
///
/// Solvability does not depend on the lift chosen for `x_0`. A vector over
/// `Z/p^N` is lifted to `Z`; its decisions are only trusted with
/// `N >= L + 2`, since stage `L` is decided modulo `p^(L+1)`.
pub fn solve_frobenius(y: &WittVector) -> Result<SolveOutcome> {
    let ctx = y.context();
    let (p, len) = (ctx.prime(), ctx.len());
    if let BaseRing::ModPrimePower(n) = ctx.base() {
        if (n as usize) < len + 2 {
            return Err(Error::Precision(format!(
                "need at least {} p-adic digits for length {len}, have {n}",
                len + 2
            )));
        }
    }
    let g: Vec<BigInt> = y.lift().ghost().entries().to_vec();
    let pb = BigInt::from(p);
    let mut x: Vec<BigInt> = vec![g[0].mod_floor(&pb)];
    for n in 1..=len {
        let mut rest = g[n - 1].clone();
        let mut pi = BigInt::one();
        for (i, xi) in x.iter().enumerate() {
            rest -= &pi * num_traits::pow(xi.clone(), num_traits::pow(p as usize, n - i));
            pi *= &pb;
        }
        // pi == p^n
        let (q, r) = rest.div_rem(&pi);
        if !r.is_zero() {
            let modulus = &pi * &pb;
            return Ok(SolveOutcome::Failure {
                stage: n,
                coefficient: pi,
                residue: symmetric_mod(&rest, &modulus),
                modulus,
            });
        }
        x.push(q);
    }
    let xz = WittVector::new(WittContext::integers(p, len + 1)?, x.clone())?;
    let xv = match ctx.base() {
        BaseRing::Integers => xz.clone(),
        BaseRing::ModPrimePower(n) => xz.reduce(n)?,
    };
    if xz.frobenius()?.ghost().entries() != g.as_slice() {
        return Err(Error::Internal("solve_frobenius produced a wrong preimage".into()));
    }
    let pdiv = |c: &BigInt| c.is_multiple_of(&pb);
    let ghosts_one_mod_p =
        xz.ghost().entries().iter().all(|w| (w - BigInt::one()).is_multiple_of(&pb));
    Ok(SolveOutcome::Success {
        x: xv,
        ghosts_one_mod_p,
        higher_divisible: x[1..].iter().all(pdiv),
        all_divisible: x.iter().all(pdiv),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOfP {
    pub p: u64,
    pub len: usize,
    /// `[p] + V(y) = p` in `W_L(Z)`.
    pub gabber_identity: bool,
    /// `F([p] + V(y)) = F(p) = p` in `W_{L-1}(Z)`.
    pub frobenius_applied: bool,
    /// `[p^p] = p(1 - y)`.
    pub teichmuller_p_pow_p: bool,
    /// `[p^2] = p(1 - y)`; agrees with the previous line only at `p = 2`.
    pub teichmuller_p_squared: bool,
}

/// Applies `F` to `[p] + V(y) = p` and reports which Teichmüller identity
/// survives. Since `FV = p` and `F[p] = [p^p]`, the exact consequence is
/// `[p^p] = p(1 - y)`.
pub fn frobenius_of_p_identity(p: u64, len: usize) -> Result<FrobeniusOfP> {
    if len < 2 {
        return Err(Error::InvalidInput("need length at least 2".into()));
    }
    let ctx = WittContext::integers(p, len)?;
    let y = gabber_y(p, len)?;
    let pw = WittVector::from_int(&BigInt::from(p), ctx);
    let lhs = WittVector::teichmuller(&BigInt::from(p), ctx).add(&y.verschiebung())?;
    let rhs = pw.mul(&WittVector::one(ctx).sub(&y)?)?;
    let tp = |e: u32| WittVector::teichmuller(&int_pow(p, e), ctx);
    Ok(FrobeniusOfP {
        p,
        len,
        gabber_identity: lhs == pw,
        frobenius_applied: lhs.frobenius()? == pw.frobenius()?,
        teichmuller_p_pow_p: tp(p as u32) == rhs,
        teichmuller_p_squared: tp(2) == rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnIdentity {
    /// `p^n = V(p^{n-1})` in `W_L(Z/p^n)`.
    pub holds_mod_pn: bool,
    /// Ghost coordinates of `p^n - V(p^{n-1})` over `Z`.
    pub ghost_of_difference: Vec<BigInt>,
    pub ghost_is_pn_then_zero: bool,
}

pub fn pn_identity(p: u64, n: u32, len: usize) -> Result<PnIdentity> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let pn = int_pow(p, n);
    let pn1 = int_pow(p, n - 1);
    let zc = WittContext::integers(p, len)?;
    let diff =
        WittVector::from_int(&pn, zc).sub(&WittVector::from_int(&pn1, zc).verschiebung())?;
    let g = diff.ghost().entries().to_vec();
    let ghost_is_pn_then_zero = g[0] == pn && g[1..].iter().all(|x| x.is_zero());
    let mc = WittContext::modular(p, len, n)?;
    let holds_mod_pn =
        WittVector::from_int(&pn, mc) == WittVector::from_int(&pn1, mc).verschiebung();
    Ok(PnIdentity { holds_mod_pn, ghost_of_difference: g, ghost_is_pn_then_zero })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gabber_y_small_cases() {
        let y = gabber_y(3, 2).unwrap();
        assert_eq!(y.components(), &[BigInt::from(-8), BigInt::from(-2016)]);
        let y = gabber_y(2, 1).unwrap();
        assert_eq!(y.components(), &[BigInt::from(-1)]);
    }

    #[test]
    fn gabber_identity() {
        for p in [2u64, 3, 5] {
            let ctx = WittContext::integers(p, 5).unwrap();
            let y = gabber_y(p, 5).unwrap();
            let lhs = WittVector::teichmuller(&BigInt::from(p), ctx).add(&y.verschiebung()).unwrap();
            assert_eq!(lhs, WittVector::from_int(&BigInt::from(p), ctx));
        }
    }

    #[test]
    fn frobenius_preimage_trichotomy() {
        let y5 = gabber_y(5, 4).unwrap();
        match solve_frobenius(&y5).unwrap() {
            SolveOutcome::Success { ghosts_one_mod_p, higher_divisible, .. } => {
                assert!(ghosts_one_mod_p && higher_divisible)
            }
            f => panic!("expected success, got {f:?}"),
        }
        let y2 = gabber_y(2, 4).unwrap();
        let out = solve_frobenius(&y2).unwrap();
        assert_eq!(out.witness().unwrap(), "4x_2 ≡ -2 (mod 8)");
    }

    #[test]
    fn twisted_p2_is_solvable() {
        for m in [2u32, 3] {
            let ctx = WittContext::integers(2, 4).unwrap();
            let y = gabber_y(2, 4).unwrap();
            let t = WittVector::teichmuller(&int_pow(2, m), ctx);
            let out = solve_frobenius(&y.mul(&t).unwrap()).unwrap();
            assert!(matches!(out, SolveOutcome::Success { all_divisible: true, .. }), "{out:?}");
        }
    }

    #[test]
    fn modular_input_needs_guard_digits() {
        let y = gabber_y(3, 3).unwrap();
        assert!(matches!(solve_frobenius(&y.reduce(4).unwrap()), Err(Error::Precision(_))));
        assert!(solve_frobenius(&y.reduce(5).unwrap()).unwrap().is_success());
    }

    #[test]
    fn frobenius_of_p() {
        let r2 = frobenius_of_p_identity(2, 4).unwrap();
        assert!(r2.gabber_identity && r2.frobenius_applied);
        assert!(r2.teichmuller_p_pow_p && r2.teichmuller_p_squared);
        let r3 = frobenius_of_p_identity(3, 3).unwrap();
        assert!(r3.teichmuller_p_pow_p);
        assert!(!r3.teichmuller_p_squared);
    }

    #[test]
    fn pn_vanishing() {
        for p in [2u64, 3] {
            for n in 1..=4 {
                let r = pn_identity(p, n, 6).unwrap();
                assert!(r.holds_mod_pn && r.ghost_is_pn_then_zero, "p={p} n={n}");
            }
        }
    }
}
