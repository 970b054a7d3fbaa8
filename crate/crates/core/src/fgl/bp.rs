use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactalg::{int_pow, require_prime, PolyRing, TruncPoly, Var};
use crate::{Error, Result};

type Poly = TruncPoly<BigRational>;

/// `Q[l_1..l_N, v_1..v_N, t_1..t_N]` graded by `|x_n| = 2p^n - 2`.
#[derive(Clone, Debug)]
pub struct BpRing {
    pub p: u64,
    pub n: usize,
    pub ring: Arc<PolyRing>,
}

impl BpRing {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        require_prime(p)?;
        let mut vars = Vec::new();
        for prefix in ["l", "v", "t"] {
            for i in 1..=n {
                let deg = 2 * num_traits::pow(p, i) as i32 - 2;
                vars.push(Var::new(&format!("{prefix}{i}")).degree(deg));
            }
        }
        Ok(BpRing { p, n, ring: PolyRing::new(vars, None) })
    }

    fn idx(&self, prefix: &str, i: usize) -> usize {
        let base = match prefix {
            "l" => 0,
            "v" => self.n,
            _ => 2 * self.n,
        };
        base + i - 1
    }

    /// `l_i`, `v_i` or `t_i`; index 0 of `l` and `t` is 1.
    pub fn gen(&self, prefix: &str, i: usize) -> Poly {
        if i == 0 && prefix != "v" {
            return TruncPoly::one(&self.ring);
        }
        TruncPoly::var(&self.ring, self.idx(prefix, i))
    }

    /// Substitute `v_i -> images[i-1]`, keeping `l` and `t`.
    fn substitute_v(&self, f: &Poly, images: &[Poly]) -> Poly {
        let mut all: Vec<Poly> = (0..3 * self.n).map(|k| TruncPoly::var(&self.ring, k)).collect();
        for (i, im) in images.iter().enumerate() {
            all[self.n + i] = im.clone();
        }
        f.substitute(&all)
    }

    fn substitute_l(&self, f: &Poly, images: &[Poly]) -> Poly {
        let mut all: Vec<Poly> = (0..3 * self.n).map(|k| TruncPoly::var(&self.ring, k)).collect();
        for (i, im) in images.iter().enumerate() {
            all[i] = im.clone();
        }
        f.substitute(&all)
    }
}

/// Hazewinkel generators `v_n` as polynomials in `l_i`, from
/// `p l_n = sum_{i<n} l_i v_{n-i}^{p^i}`.
pub fn hazewinkel_generators(p: u64, n: usize) -> Result<(BpRing, Vec<Poly>)> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidInput("need 1 <= N <= 4".into()));
    }
    let r = BpRing::new(p, n)?;
    let mut v: Vec<Poly> = Vec::new();
    for k in 1..=n {
        let mut vk = r.gen("l", k).scale(&BigRational::from_integer(BigInt::from(p)));
        for i in 1..k {
            vk = vk.sub(&r.gen("l", i).mul(&v[k - i - 1].pow(num_traits::pow(p, i))));
        }
        v.push(vk);
    }
    Ok((r, v))
}

/// `l_n` as polynomials in the `v_i` over `Q`.
pub fn log_generators_in_v(r: &BpRing) -> Vec<Poly> {
    let p = r.p;
    let inv_p = BigRational::new(BigInt::one(), BigInt::from(p));
    let mut l: Vec<Poly> = Vec::new();
    for k in 1..=r.n {
        let mut s = r.gen("v", k);
        for i in 1..k {
            s = s.add(&l[i - 1].mul(&r.gen("v", k - i).pow(num_traits::pow(p, i))));
        }
        l.push(s.scale(&inv_p));
    }
    l
}

/// `η_R(v_n)` for `n <= N` in `Q[v, t]`, checked to be `Z_(p)`-integral.
///
/// Uses `η_R(l_n) = sum_{i<=n} l_i t_{n-i}^{p^i}` and pushes it through the
/// Hazewinkel recursion, then rewrites `l` in terms of `v`.
pub fn bp_right_unit(p: u64, n: usize) -> Result<(BpRing, Vec<Poly>)> {
    if n == 0 || n > 3 {
        return Err(Error::InvalidInput("need 1 <= N <= 3".into()));
    }
    let r = BpRing::new(p, n)?;
    let eta_l: Vec<Poly> = (1..=n)
        .map(|k| {
            let mut s = TruncPoly::zero(&r.ring);
            for i in 0..=k {
                s = s.add(&r.gen("l", i).mul(&r.gen("t", k - i).pow(num_traits::pow(p, i))));
            }
            s
        })
        .collect();
    let mut eta_v: Vec<Poly> = Vec::new();
    for k in 1..=n {
        let mut e = eta_l[k - 1].scale(&BigRational::from_integer(BigInt::from(p)));
        for i in 1..k {
            e = e.sub(&eta_l[i - 1].mul(&eta_v[k - i - 1].pow(num_traits::pow(p, i))));
        }
        eta_v.push(e);
    }
    let l_in_v = log_generators_in_v(&r);
    let out: Vec<Poly> = eta_v.iter().map(|e| r.substitute_l(e, &l_in_v)).collect();
    for (k, e) in out.iter().enumerate() {
        if let Some((m, c)) = e.first_non_p_integral(p) {
            return Err(Error::Internal(format!(
                "η_R(v_{}) has non-integral coefficient {c} on {}",
                k + 1,
                r.ring.monomial_string(&m)
            )));
        }
    }
    Ok((r, out))
}

/// The ring map `η_R` applied to a polynomial in the `v_i`.
pub fn apply_right_unit(r: &BpRing, eta_v: &[Poly], f: &Poly) -> Poly {
    r.substitute_v(f, eta_v)
}

/// `(1/2)((η_R(v_1^4) - v_1^4)/8 - (η_R(v_1 v_2) - v_1 v_2))` at `p = 2`.
pub fn b4_cobar_class() -> Result<(BpRing, Poly)> {
    let (r, eta) = bp_right_unit(2, 2)?;
    let v1 = r.gen("v", 1);
    let v2 = r.gen("v", 2);
    let v14 = v1.pow(4);
    let v1v2 = v1.mul(&v2);
    let a = apply_right_unit(&r, &eta, &v14).sub(&v14);
    let b = apply_right_unit(&r, &eta, &v1v2).sub(&v1v2);
    let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let b4 = a.scale(&eighth).sub(&b).scale(&half);
    if let Some((m, c)) = b4.first_non_p_integral(2) {
        return Err(Error::Internal(format!(
            "b_4 has non-integral coefficient {c} on {}",
            r.ring.monomial_string(&m)
        )));
    }
    Ok((r, b4))
}

/// Reduce modulo `p` and the listed generators (each set to zero).
pub fn reduce_mod_ideal(r: &BpRing, f: &Poly, kill: &[(&str, usize)]) -> Result<Poly> {
    let idx: Vec<usize> = kill.iter().map(|(pre, i)| r.idx(pre, *i)).collect();
    f.filter(|e| idx.iter().all(|&k| e[k] == 0)).reduce_mod(&int_pow(r.p, 1))
}

impl BpRing {
    /// Strip `l` variables: the named generators of `Q[v, t]` only.
    pub fn describe(&self, f: &Poly) -> String {
        f.to_string()
    }

    pub fn is_zero_free_of_l(&self, f: &Poly) -> bool {
        f.terms().all(|(e, _)| e[..self.n].iter().all(|&k| k == 0)) || f.is_zero()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn parse(r: &BpRing, terms: &[(i64, &[(&str, usize, u32)])]) -> Poly {
        let mut f = TruncPoly::zero(&r.ring);
        for (c, mono) in terms {
            let mut t = TruncPoly::constant(&r.ring, BigRational::from_integer(BigInt::from(*c)));
            for (pre, i, e) in mono.iter() {
                t = t.mul(&r.gen(pre, *i).pow(*e as u64));
            }
            f = f.add(&t);
        }
        f
    }

    #[test]
    fn hazewinkel_v2() {
        let (r, v) = hazewinkel_generators(2, 2).unwrap();
        assert_eq!(v[0], parse(&r, &[(2, &[("l", 1, 1)])]));
        // v_2 = 2 l_2 - l_1 (2 l_1)^2
        assert_eq!(v[1], parse(&r, &[(2, &[("l", 2, 1)]), (-4, &[("l", 1, 3)])]));
        assert!(v[1].is_homogeneous(6));
    }

    #[test]
    fn right_unit_low_degrees() {
        let (r, eta) = bp_right_unit(2, 2).unwrap();
        assert_eq!(eta[0], parse(&r, &[(1, &[("v", 1, 1)]), (2, &[("t", 1, 1)])]));
        let expected = parse(
            &r,
            &[
                (1, &[("v", 2, 1)]),
                (-5, &[("v", 1, 1), ("t", 1, 2)]),
                (-3, &[("v", 1, 2), ("t", 1, 1)]),
                (2, &[("t", 2, 1)]),
                (-4, &[("t", 1, 3)]),
            ],
        );
        assert_eq!(eta[1], expected);
    }

    #[test]
    fn b4_matches_display() {
        let (r, b4) = b4_cobar_class().unwrap();
        let expected = parse(
            &r,
            &[
                (5, &[("t", 1, 4)]),
                (9, &[("t", 1, 3), ("v", 1, 1)]),
                (7, &[("t", 1, 2), ("v", 1, 2)]),
                (-2, &[("t", 1, 1), ("t", 2, 1)]),
                (2, &[("t", 1, 1), ("v", 1, 3)]),
                (-1, &[("t", 1, 1), ("v", 2, 1)]),
                (-1, &[("t", 2, 1), ("v", 1, 1)]),
            ],
        );
        assert_eq!(b4, expected);
        assert!(b4.is_homogeneous(8));
        let red = reduce_mod_ideal(&r, &b4, &[("v", 1), ("v", 2)]).unwrap();
        assert_eq!(red, parse(&r, &[(1, &[("t", 1, 4)])]));
    }
}
