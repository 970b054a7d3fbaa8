use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::padic::PAdicScalar;
use crate::{Error, Result};

/// `U * A * V = D` with `D` diagonal and the diagonal a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// The `min(rows, cols)` diagonal entries of `D`, zeros last.
    pub divisors: Vec<T>,
}

/// Orders of the nontrivial cyclic factors of the cokernel, and the number
/// of zero divisors (free summands coming from the diagonal part).
pub fn divisor_orders(divisors: &[BigInt]) -> (usize, Vec<BigInt>) {
    let zeros = divisors.iter().filter(|d| d.is_zero()).count();
    let orders = divisors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
    (zeros, orders)
}

fn row_axpy(m: &mut Matrix<BigInt>, dst: usize, src: usize, q: &BigInt) {
    // row_dst -= q * row_src
    for j in 0..m.cols() {
        let t = &m[(src, j)] * q;
        m[(dst, j)] -= t;
    }
}

fn col_axpy(m: &mut Matrix<BigInt>, dst: usize, src: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let t = &m[(i, src)] * q;
        m[(i, dst)] -= t;
    }
}

/// Smith normal form over `Z` with unimodular transforms.
///
/// Pivoting takes the smallest nonzero absolute value, first in row-major
/// order, so the output is deterministic.
pub fn smith_normal_form(a: &Matrix<BigInt>) -> SmithDecomposition<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m, BigInt::zero(), BigInt::one());
    let mut v = Matrix::identity(n, BigInt::zero(), BigInt::one());

    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // Move the smallest leftover in the pivot row/column to the pivot.
                let mut best = (t, t);
                for i in t + 1..m {
                    if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    d.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // Enforce the divisibility chain.
            let bad = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..n {
                d[(t, j)] = -d[(t, j)].clone();
            }
            for j in 0..m {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    let divisors = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SmithDecomposition { u, d, v, divisors }
}

/// A commutative local ring whose ideals are the powers of one uniformizer,
/// such as `Z/p^N` or a truncated discrete valuation ring.
pub trait ValuedRing: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` exactly for zero.
    fn valuation(&self) -> Option<u32>;
    /// A quotient `self / d`, defined when `v(self) >= v(d)`.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    /// A unit `w` such that `self * w` is the canonical generator of its ideal.
    fn normalizing_unit(&self) -> Self;
    fn same_ring(&self, o: &Self) -> bool;
}

impl ValuedRing for PAdicScalar {
    fn zero_like(&self) -> Self {
        PAdicScalar::zero(self.prime(), self.precision()).unwrap()
    }
    fn one_like(&self) -> Self {
        PAdicScalar::one(self.prime(), self.precision()).unwrap()
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn valuation(&self) -> Option<u32> {
        PAdicScalar::valuation(self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        PAdicScalar::div_exact(self, d)
    }
    fn normalizing_unit(&self) -> Self {
        match PAdicScalar::valuation(self) {
            None => self.one_like(),
            Some(v) => {
                let pv = PAdicScalar::from_bigint(
                    self.prime(),
                    self.precision(),
                    &num_traits::pow(BigInt::from(self.prime()), v as usize),
                )
                .unwrap();
                // pv / self is a unit; pick the canonical quotient.
                pv.div_exact(self).unwrap()
            }
        }
    }
    fn same_ring(&self, o: &Self) -> bool {
        PAdicScalar::same_ring(self, o)
    }
}

fn vrow_axpy<T: ValuedRing>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    for j in 0..m.cols() {
        let t = m[(src, j)].mul(q);
        m[(dst, j)] = m[(dst, j)].sub(&t);
    }
}

fn vcol_axpy<T: ValuedRing>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    for i in 0..m.rows() {
        let t = m[(i, src)].mul(q);
        m[(i, dst)] = m[(i, dst)].sub(&t);
    }
}

/// Smith normal form over a valued local ring. The pivot is the leftmost
/// entry of minimal valuation (ties broken by row), so the chain
/// `d_1 | d_2 | ...` holds by construction.
pub fn smith_normal_form_valued<T: ValuedRing>(
    a: &Matrix<T>,
    one: &T,
) -> Result<SmithDecomposition<T>> {
    if a.entries().any(|x| !x.same_ring(one)) {
        return Err(Error::InvalidInput("matrix entries from different rings".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let zero = one.zero_like();
    let mut d = a.clone();
    let mut u = Matrix::identity(m, zero.clone(), one.clone());
    let mut v = Matrix::identity(n, zero.clone(), one.clone());

    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, u32)> = None;
        for j in t..n {
            for i in t..m {
                if let Some(val) = d[(i, j)].valuation() {
                    if best.map_or(true, |(_, _, b)| val < b) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let w = d[(t, t)].normalizing_unit();
        for j in 0..n {
            d[(t, j)] = d[(t, j)].mul(&w);
        }
        for j in 0..m {
            u[(t, j)] = u[(t, j)].mul(&w);
        }
        let pivot = d[(t, t)].clone();
        for i in t + 1..m {
            if d[(i, t)].valuation().is_none() {
                continue;
            }
            let q = d[(i, t)].div_exact(&pivot).ok_or_else(|| {
                Error::Internal("minimal-valuation pivot failed to divide".into())
            })?;
            vrow_axpy(&mut d, i, t, &q);
            vrow_axpy(&mut u, i, t, &q);
        }
        for j in t + 1..n {
            if d[(t, j)].valuation().is_none() {
                continue;
            }
            let q = d[(t, j)].div_exact(&pivot).ok_or_else(|| {
                Error::Internal("minimal-valuation pivot failed to divide".into())
            })?;
            vcol_axpy(&mut d, j, t, &q);
            vcol_axpy(&mut v, j, t, &q);
        }
    }
    let divisors = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    Ok(SmithDecomposition { u, d, v, divisors })
}
