use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactalg::{int_pow, require_prime, PolyRing, TruncPoly, Var};
use crate::{Error, Result};

/// Witt sum and product polynomials `S_i(X, Y)`, `P_i(X, Y)` over `Z`.
#[derive(Clone, Debug)]
pub struct StructurePolys {
    pub ring: Arc<PolyRing>,
    pub sum: Vec<TruncPoly<BigInt>>,
    pub product: Vec<TruncPoly<BigInt>>,
}

type Cache = Mutex<HashMap<(u64, usize), Arc<OnceLock<Arc<StructurePolys>>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Structure polynomials for `(p, L)`, computed once by ghost recursion.
///
/// Only small `(p, L)` are feasible: the degree of `S_{L-1}` is `p^{L-1}`.
pub fn witt_structure_polynomials(p: u64, len: usize) -> Result<Arc<StructurePolys>> {
    require_prime(p)?;
    if len == 0 {
        return Err(Error::InvalidInput("length must be at least 1".into()));
    }
    let slot = {
        let mut map = cache().lock().expect("structure cache poisoned");
        map.entry((p, len)).or_default().clone()
    };
    if let Some(s) = slot.get() {
        return Ok(s.clone());
    }
    let computed = Arc::new(compute(p, len)?);
    Ok(slot.get_or_init(|| computed).clone())
}

fn ghost_poly(p: u64, xs: &[TruncPoly<BigInt>], j: usize) -> TruncPoly<BigInt> {
    let mut w = TruncPoly::zero(xs[0].ring());
    for (i, x) in xs.iter().enumerate().take(j + 1) {
        let e = num_traits::pow(p, j - i);
        w = w.add(&x.pow(e).scale(&int_pow(p, i as u32)));
    }
    w
}

fn exact_div(f: &TruncPoly<BigInt>, d: &BigInt) -> Result<TruncPoly<BigInt>> {
    let mut out = TruncPoly::zero(f.ring());
    for (e, c) in f.terms() {
        let (q, r) = c.div_rem(d);
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "structure polynomial coefficient {c} not divisible by {d}"
            )));
        }
        out = out.add(&TruncPoly::monomial(f.ring(), e.clone(), q));
    }
    Ok(out)
}

fn compute(p: u64, len: usize) -> Result<StructurePolys> {
    let mut vars: Vec<Var> = (0..len).map(|i| Var::new(&format!("X{i}"))).collect();
    vars.extend((0..len).map(|i| Var::new(&format!("Y{i}"))));
    let ring = PolyRing::new(vars, None);
    let xs: Vec<_> = (0..len).map(|i| TruncPoly::var(&ring, i)).collect();
    let ys: Vec<_> = (0..len).map(|i| TruncPoly::var(&ring, len + i)).collect();

    let mut sum: Vec<TruncPoly<BigInt>> = Vec::new();
    let mut product: Vec<TruncPoly<BigInt>> = Vec::new();
    for n in 0..len {
        let (wx, wy) = (ghost_poly(p, &xs, n), ghost_poly(p, &ys, n));
        let mut s = wx.add(&wy);
        let mut m = wx.mul(&wy);
        for i in 0..n {
            let e = num_traits::pow(p, n - i);
            let c = int_pow(p, i as u32);
            s = s.sub(&sum[i].pow(e).scale(&c));
            m = m.sub(&product[i].pow(e).scale(&c));
        }
        let pn = int_pow(p, n as u32);
        sum.push(exact_div(&s, &pn)?);
        product.push(exact_div(&m, &pn)?);
    }
    Ok(StructurePolys { ring, sum, product })
}

/// Evaluate an integer polynomial at integer values of its variables.
pub fn eval_int_poly(f: &TruncPoly<BigInt>, values: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (e, c) in f.terms() {
        let mut t = c.clone();
        for (k, v) in e.iter().zip(values) {
            if *k > 0 {
                t *= num_traits::pow(v.clone(), *k as usize);
            }
        }
        acc += t;
    }
    acc
}

impl StructurePolys {
    fn eval(&self, polys: &[TruncPoly<BigInt>], x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let vals: Vec<BigInt> = x.iter().chain(y).cloned().collect();
        polys.iter().map(|f| eval_int_poly(f, &vals)).collect()
    }

    pub fn eval_sum(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.eval(&self.sum, x, y)
    }

    pub fn eval_product(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.eval(&self.product, x, y)
    }
}
