use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactalg::{int_pow, require_prime, PolyRing, TruncPoly, Var};
use crate::{Error, Result};

type Series = TruncPoly<BigRational>;

/// How the parameter `λ` of the multiplicative law is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    /// A formal variable named `lambda`.
    Symbolic,
    Value(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    /// `X + Y + λXY`.
    Multiplicative(Lambda),
    /// Over `F_p[v]` with `[p](x) = v x^{p^n}`.
    Honda { p: u64, n: u32 },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffRing {
    Integers,
    Rationals,
    /// `Z/p^N`; `N = 1` is `F_p`.
    ModPrimePower { p: u64, n: u32 },
}

impl CoeffRing {
    fn modulus(&self) -> Option<BigInt> {
        match self {
            CoeffRing::ModPrimePower { p, n } => Some(int_pow(*p, *n)),
            _ => None,
        }
    }
}

/// A formal group law `F(X, Y)` truncated at total `(X, Y)`-degree `D`.
///
/// The series ring has variables `X`, `Y` and optionally one parameter
/// (`lambda` or `v`) of truncation weight 0.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    kind: FglKind,
    coeffs: CoeffRing,
    degree: u32,
    param: Option<String>,
    law: Series,
}

/// Associativity is checked to full degree when cheap. Laws built from a
/// logarithm are associative by construction, so for those the trivariate
/// check stops here.
const ASSOC_CHECK_CAP: u32 = 16;

fn bivariate_ring(d: u32, param: Option<&str>) -> Arc<PolyRing> {
    let mut vars = vec![Var::new("X"), Var::new("Y")];
    if let Some(p) = param {
        vars.push(Var::new(p).weight(0));
    }
    PolyRing::new(vars, Some(d))
}

fn series_ring(name: &str, d: u32, param: Option<&str>) -> Arc<PolyRing> {
    let mut vars = vec![Var::new(name)];
    if let Some(p) = param {
        vars.push(Var::new(p).weight(0));
    }
    PolyRing::new(vars, Some(d))
}

fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl FormalGroupLaw {
    pub fn kind(&self) -> &FglKind {
        &self.kind
    }

    pub fn coeff_ring(&self) -> &CoeffRing {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn param(&self) -> Option<&str> {
        self.param.as_deref()
    }

    pub fn series(&self) -> &Series {
        &self.law
    }

    fn reduce(&self, f: Series) -> Series {
        match self.coeffs.modulus() {
            None => f,
            Some(m) => f.reduce_mod(&m).expect("integral coefficients"),
        }
    }

    /// Univariate ring `name` (+ parameter) truncated at degree `d`.
    pub fn series_ring(&self, name: &str, d: u32) -> Arc<PolyRing> {
        series_ring(name, d, self.param.as_deref())
    }

    /// Images of `X`, `Y` (and the parameter) for substitution into `target`.
    fn images(&self, target: &Arc<PolyRing>, a: Series, b: Series) -> Vec<Series> {
        let mut v = vec![a, b];
        if let Some(p) = &self.param {
            v.push(TruncPoly::var_named(target, p));
        }
        v
    }

    /// `F(a, b)` for series `a`, `b` without constant term in one ring.
    pub fn apply(&self, a: &Series, b: &Series) -> Series {
        let images = self.images(a.ring(), a.clone(), b.clone());
        self.reduce(self.law.substitute(&images))
    }

    /// `F(t, t)` as a univariate series.
    fn diagonal(&self, ring: &Arc<PolyRing>) -> Series {
        let x = TruncPoly::var(ring, 0);
        self.apply(&x, &x)
    }

    fn compose(&self, outer: &Series, inner: &Series) -> Series {
        let mut images = vec![inner.clone()];
        if let Some(p) = &self.param {
            images.push(TruncPoly::var_named(inner.ring(), p));
        }
        self.reduce(outer.substitute(&images))
    }

    /// Formal inverse `ι(x)` with `F(x, ι(x)) = 0`.
    pub fn inverse_series(&self) -> Series {
        let ring = self.series_ring("x", self.degree);
        let x = TruncPoly::var(&ring, 0);
        // ι = -x - (F(x, ι) - x - ι); one more correct degree per pass.
        let mut iota = x.neg();
        for _ in 0..self.degree {
            let f = self.apply(&x, &iota);
            let next = self.reduce(iota.sub(&f));
            if next == iota {
                break;
            }
            iota = next;
        }
        iota
    }

    /// `[m](x)`, by doubling (`[2k] = [2]∘[k]`) and adding `x`.
    pub fn n_series(&self, m: i64) -> Series {
        let ring = self.series_ring("x", self.degree);
        let x = TruncPoly::var(&ring, 0);
        let pos = self.n_series_nonneg(m.unsigned_abs(), &ring, &x);
        if m >= 0 {
            pos
        } else {
            self.compose(&self.inverse_series(), &pos)
        }
    }

    fn n_series_nonneg(&self, m: u64, ring: &Arc<PolyRing>, x: &Series) -> Series {
        match m {
            0 => TruncPoly::zero(ring),
            1 => x.clone(),
            _ if m % 2 == 0 => {
                let half = self.n_series_nonneg(m / 2, ring, x);
                self.compose(&self.diagonal(ring), &half)
            }
            _ => {
                let prev = self.n_series_nonneg(m - 1, ring, x);
                self.apply(&prev, x)
            }
        }
    }

    /// `⟨m⟩(ħ) = [m](ħ)/ħ`, truncated at `ħ^{D-1}`.
    pub fn divided_n_series(&self, m: i64) -> Series {
        let nm = self.n_series(m);
        let ring = self.series_ring("h", self.degree.saturating_sub(1));
        let mut out = TruncPoly::zero(&ring);
        for (e, c) in nm.terms() {
            let mut f = e.clone();
            f[0] -= 1; // every term of [m](x) has x-degree >= 1
            out = out.add(&TruncPoly::monomial(&ring, f, c.clone()));
        }
        out
    }

    fn check_axioms(&self, assoc_degree: u32) -> Result<()> {
        let ring = self.law.ring().clone();
        let x = TruncPoly::var(&ring, 0);
        let y = TruncPoly::var(&ring, 1);
        let zero = TruncPoly::zero(&ring);
        let first_bad = |a: &Series, b: &Series| -> Option<u32> {
            a.sub(b).terms().map(|(e, _)| e[0] + e[1]).min()
        };
        if let Some(d) = first_bad(&self.apply(&x, &zero), &x) {
            return Err(Error::InvalidFgl { degree: d, what: "F(X,0) != X".into() });
        }
        if let Some(d) = first_bad(&self.apply(&zero, &y), &y) {
            return Err(Error::InvalidFgl { degree: d, what: "F(0,Y) != Y".into() });
        }
        if let Some(d) = first_bad(&self.apply(&y, &x), &self.law) {
            return Err(Error::InvalidFgl { degree: d, what: "F not commutative".into() });
        }
        let mut vars = vec![Var::new("X"), Var::new("Y"), Var::new("Z")];
        if let Some(p) = &self.param {
            vars.push(Var::new(p).weight(0));
        }
        let tri = PolyRing::new(vars, Some(assoc_degree));
        let law = self.law.filter(|e| e[0] + e[1] <= assoc_degree);
        let sub = |a: Series, b: Series| {
            let mut im = vec![a, b];
            if let Some(p) = &self.param {
                im.push(TruncPoly::var_named(&tri, p));
            }
            self.reduce(law.substitute(&im))
        };
        let (tx, ty, tz) =
            (TruncPoly::var(&tri, 0), TruncPoly::var(&tri, 1), TruncPoly::var(&tri, 2));
        let left = sub(sub(tx.clone(), ty.clone()), tz.clone());
        let right = sub(tx, sub(ty, tz));
        if let Some(d) = left.sub(&right).terms().map(|(e, _)| e[0] + e[1] + e[2]).min() {
            return Err(Error::InvalidFgl { degree: d, what: "not associative".into() });
        }
        Ok(())
    }

    /// Wrap and validate a user-supplied law in variables `X`, `Y` (and an
    /// optional weight-0 parameter as third variable).
    pub fn custom(law: Series, coeffs: CoeffRing) -> Result<Self> {
        let ring = law.ring().clone();
        let names: Vec<&str> = ring.vars().iter().map(|v| v.name.as_str()).collect();
        if names.len() < 2 || names[0] != "X" || names[1] != "Y" || names.len() > 3 {
            return Err(Error::InvalidInput("custom law must use variables X, Y[, param]".into()));
        }
        let degree = ring
            .bound()
            .ok_or_else(|| Error::InvalidInput("custom law needs a truncation bound".into()))?;
        let fgl = FormalGroupLaw {
            kind: FglKind::Custom,
            coeffs,
            degree,
            param: names.get(2).map(|s| s.to_string()),
            law,
        };
        fgl.check_axioms(degree)?;
        Ok(fgl)
    }
}

/// Logarithm of the Honda law over `Q` with `v = 1`:
/// `sum_k x^{q^k} / p^k`, `q = p^n`.
fn honda_log(p: u64, n: u32, ring: &Arc<PolyRing>, d: u32) -> Series {
    let q = num_traits::pow(p, n as usize);
    let mut log = TruncPoly::zero(ring);
    let (mut qk, mut pk) = (1u64, BigInt::one());
    while qk <= d as u64 {
        log = log.add(&TruncPoly::monomial(ring, vec![qk as u32], BigRational::new(BigInt::one(), pk.clone())));
        qk *= q;
        pk *= BigInt::from(p);
    }
    log
}

/// Compositional inverse of `x + ...` by Newton iteration,
/// `g <- g - (f(g) - x)/f'(g)`, which doubles the correct degree each pass.
fn compositional_inverse(f: &Series, d: u32) -> Result<Series> {
    let ring = f.ring().clone();
    let x = TruncPoly::var(&ring, 0);
    let mut fp = TruncPoly::zero(&ring);
    for (e, c) in f.terms() {
        if e[0] > 0 {
            fp = fp.add(&TruncPoly::monomial(&ring, vec![e[0] - 1], c * rational(e[0] as i64)));
        }
    }
    let mut g = x.clone();
    for _ in 0..=2 * (32 - d.leading_zeros()) {
        let r = f.substitute(&[g.clone()]).sub(&x);
        if r.is_zero() {
            return Ok(g);
        }
        g = g.sub(&r.mul(&fp.substitute(&[g.clone()]).inverse()?));
    }
    Err(Error::Internal("compositional inverse did not converge".into()))
}

/// Honda laws are expensive at large degree (`p = 2, n = 1, D = 64` takes
/// seconds), so each `(p, n, D)` is built once per process.
fn honda_law(p: u64, n: u32, d: u32) -> Result<Series> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u32), Series>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("cache").get(&(p, n, d)) {
        return Ok(f.clone());
    }
    let f = build_honda_law(p, n, d)?;
    cache.lock().expect("cache").insert((p, n, d), f.clone());
    Ok(f)
}

fn build_honda_law(p: u64, n: u32, d: u32) -> Result<Series> {
    let uni = PolyRing::series("x", d);
    let log = honda_log(p, n, &uni, d);
    let exp = compositional_inverse(&log, d)?;
    // exp(log X + log Y) by Horner in s = log X + log Y.
    let bi = bivariate_ring(d, None);
    let embed = |f: &Series, var: usize| {
        let im = TruncPoly::var(&bi, var);
        f.substitute(&[im])
    };
    let s = embed(&log, 0).add(&embed(&log, 1));
    let coeffs = exp.univariate_coeffs(d as usize + 1);
    let mut acc = TruncPoly::zero(&bi);
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        // k - 1 more factors of s follow, each raising the degree by >= 1.
        let keep = d - (k as u32 - 1);
        acc = acc.add(&TruncPoly::constant(&bi, c.clone())).mul(&s).filter(|e| e[0] + e[1] <= keep);
    }
    if let Some((e, c)) = acc.first_non_p_integral(p) {
        return Err(Error::Internal(format!(
            "Honda law coefficient {c} of {} is not p-integral",
            bi.monomial_string(&e)
        )));
    }
    // Reduce mod p and restore v from the grading: X^i Y^j carries v^{(i+j-1)/(q-1)}.
    let reduced = acc.reduce_mod(&BigInt::from(p))?;
    let q1 = num_traits::pow(p, n as usize) - 1;
    let ring = bivariate_ring(d, Some("v"));
    let mut law = TruncPoly::zero(&ring);
    for (e, c) in reduced.terms() {
        let tot = (e[0] + e[1]) as u64 - 1;
        if tot % q1 != 0 {
            return Err(Error::Internal("Honda law term off the grading".into()));
        }
        law = law.add(&TruncPoly::monomial(&ring, vec![e[0], e[1], (tot / q1) as u32], c.clone()));
    }
    Ok(law)
}

/// Build a formal group law to total degree `d`.
///
/// The Honda law is obtained from its logarithm over `Z_(p)`; integrality
/// of every coefficient is checked before reducing mod `p`.
pub fn fgl_construct(kind: FglKind, d: u32) -> Result<FormalGroupLaw> {
    if d == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let (coeffs, param, law, assoc) = match &kind {
        FglKind::Additive => {
            let r = bivariate_ring(d, None);
            let law = TruncPoly::var(&r, 0).add(&TruncPoly::var(&r, 1));
            (CoeffRing::Integers, None, law, d)
        }
        FglKind::Multiplicative(lambda) => {
            let (r, l, param) = match lambda {
                Lambda::Symbolic => {
                    let r = bivariate_ring(d, Some("lambda"));
                    let l = TruncPoly::var(&r, 2);
                    (r, l, Some("lambda".to_string()))
                }
                Lambda::Value(v) => {
                    let r = bivariate_ring(d, None);
                    let l = TruncPoly::constant(&r, BigRational::from_integer(v.clone()));
                    (r, l, None)
                }
            };
            let (x, y) = (TruncPoly::var(&r, 0), TruncPoly::var(&r, 1));
            let law = x.add(&y).add(&l.mul(&x).mul(&y));
            (CoeffRing::Integers, param, law, d)
        }
        FglKind::Honda { p, n } => {
            require_prime(*p)?;
            if *n == 0 {
                return Err(Error::InvalidInput("Honda height must be at least 1".into()));
            }
            let law = honda_law(*p, *n, d)?;
            (CoeffRing::ModPrimePower { p: *p, n: 1 }, Some("v".to_string()), law, d.min(ASSOC_CHECK_CAP))
        }
        FglKind::Custom => {
            return Err(Error::InvalidInput("use FormalGroupLaw::custom for custom laws".into()))
        }
    };
    let fgl = FormalGroupLaw { kind, coeffs, degree: d, param, law };
    fgl.check_axioms(assoc)?;
    Ok(fgl)
}

/// `(log_F, exp_F)` to degree `d`, via the invariant differential
/// `log_F'(x) = 1 / ∂_Y F(x, 0)`.
pub fn fgl_log_exp(f: &FormalGroupLaw) -> Result<(Series, Series)> {
    if f.coeffs.modulus().is_some() {
        return Err(Error::InvalidInput("logarithm needs a Q-algebra".into()));
    }
    let d = f.degree;
    let ring = f.series_ring("x", d);
    let x = TruncPoly::var(&ring, 0);
    // ∂_Y F(x, 0): the terms of F linear in Y, with Y removed.
    let mut dy = TruncPoly::zero(&ring);
    for (e, c) in f.law.terms() {
        if e[1] == 1 {
            let mut g = vec![e[0]];
            if f.param.is_some() {
                g.push(e[2]);
            }
            dy = dy.add(&TruncPoly::monomial(&ring, g, c.clone()));
        }
    }
    // 1/(1 + u) with u nilpotent in x; the parameter has weight 0.
    let u = dy.sub(&TruncPoly::one(&ring));
    let mut inv = TruncPoly::one(&ring);
    let mut power = TruncPoly::one(&ring);
    loop {
        power = power.mul(&u).neg();
        if power.is_zero() {
            break;
        }
        inv = inv.add(&power);
    }
    let mut log = TruncPoly::zero(&ring);
    for (e, c) in inv.terms() {
        let mut g = e.clone();
        g[0] += 1;
        log = log.add(&TruncPoly::monomial(&ring, g, c.clone() / rational(e[0] as i64 + 1)));
    }
    // exp_F = compositional inverse of log_F.
    let mut g = x.clone();
    for _ in 0..d {
        let mut im = vec![g.clone()];
        if let Some(p) = &f.param {
            im.push(TruncPoly::var_named(&ring, p));
        }
        let next = x.sub(&log.substitute(&im).sub(&g));
        if next == g {
            break;
        }
        g = next;
    }
    Ok((log, g))
}

#[derive(Clone, Debug)]
pub struct TateQuotient {
    pub divided: Series,
    /// When `⟨m⟩(ħ)` is a single term `c · param^a · ħ^b`, its data `(c, a, b)`.
    /// Then `c · param^a` is killed in the quotient once `ħ` is inverted.
    pub monomial: Option<(BigRational, u32, u32)>,
}

/// `R[[ħ]]/⟨m⟩(ħ)` presented by its generator `⟨m⟩(ħ)`.
pub fn tate_quotient_series(f: &FormalGroupLaw, m: i64) -> TateQuotient {
    let divided = f.divided_n_series(m);
    let monomial = if divided.len() == 1 {
        let (e, c) = divided.terms().next().unwrap();
        Some((c.clone(), e.get(1).copied().unwrap_or(0), e[0]))
    } else {
        None
    };
    TateQuotient { divided, monomial }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_series() {
        let f = fgl_construct(FglKind::Additive, 8).unwrap();
        assert_eq!(f.n_series(7).to_string(), "7*x");
        assert_eq!(f.divided_n_series(5).to_string(), "5");
        let (log, exp) = fgl_log_exp(&f).unwrap();
        assert_eq!(log.to_string(), "x");
        assert_eq!(exp.to_string(), "x");
    }

    #[test]
    fn multiplicative_two_series() {
        let f = fgl_construct(FglKind::Multiplicative(Lambda::Symbolic), 6).unwrap();
        assert_eq!(f.n_series(2).to_string(), "x^2*lambda + 2*x");
        let (log, _) = fgl_log_exp(&f).unwrap();
        assert_eq!(log.coeff(&[3, 2]), rational(1) / rational(3));
        assert_eq!(log.coeff(&[2, 1]), rational(-1) / rational(2));
    }

    #[test]
    fn honda_p_series() {
        let f = fgl_construct(FglKind::Honda { p: 2, n: 1 }, 8).unwrap();
        assert_eq!(f.n_series(2).to_string(), "x^2*v");
        let f = fgl_construct(FglKind::Honda { p: 3, n: 1 }, 9).unwrap();
        assert_eq!(f.n_series(3).to_string(), "x^3*v");
        let q = tate_quotient_series(&fgl_construct(FglKind::Honda { p: 2, n: 1 }, 8).unwrap(), 4);
        assert_eq!(q.monomial.unwrap().1, 3);
    }

    #[test]
    fn negative_series_inverts() {
        let f = fgl_construct(FglKind::Multiplicative(Lambda::Value(BigInt::from(1))), 7).unwrap();
        let x = f.n_series(1);
        let minus = f.n_series(-1);
        assert!(f.apply(&x, &minus).is_zero());
    }

    #[test]
    fn custom_law_rejects_non_associative() {
        let r = bivariate_ring(4, None);
        let (x, y) = (TruncPoly::var(&r, 0), TruncPoly::var(&r, 1));
        let bad = x.add(&y).add(&x.mul(&x).mul(&y).mul(&y));
        assert!(matches!(
            FormalGroupLaw::custom(bad, CoeffRing::Integers),
            Err(Error::InvalidFgl { .. })
        ));
        let good = x.add(&y).add(&x.mul(&y));
        assert!(FormalGroupLaw::custom(good, CoeffRing::Integers).is_ok());
    }
}
