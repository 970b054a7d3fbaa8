use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactalg::{binomial, int_pow, require_prime, vp, Matrix};
use crate::witt::{WittContext, WittVector};
use crate::Result;

/// `(ψ_0(m), ..., ψ_{n-1}(m))`: the Witt components with ghost `(m, m, ...)`.
pub fn psi_eigenvalues(p: u64, n: usize, m: &BigInt) -> Result<Vec<BigInt>> {
    let ctx = WittContext::integers(p, n)?;
    Ok(WittVector::from_int(m, ctx).components().to_vec())
}

/// `ψ_1(m) = (m - m^p)/p`.
pub fn psi_one_closed_form(p: u64, m: &BigInt) -> BigRational {
    BigRational::new(m - num_traits::pow(m.clone(), p as usize), BigInt::from(p))
}

/// `ψ_2(m) = (m/p²)(1 - m^{p²-1} - p^{1-p} sum_j (-1)^j C(p,j) m^{(p-1)(j+1)})`.
pub fn psi_two_closed_form(p: u64, m: &BigInt) -> BigRational {
    let pz = BigRational::from_integer(BigInt::from(p));
    let mq = BigRational::from_integer(m.clone());
    let pw = |e: u64| BigRational::from_integer(num_traits::pow(m.clone(), e as usize));
    let mut sum = BigRational::zero();
    for j in 0..=p {
        let term = BigRational::from_integer(binomial(p, j)) * pw((p - 1) * (j + 1));
        sum = if j % 2 == 0 { sum + term } else { sum - term };
    }
    let inner = BigRational::one() - pw(p * p - 1) - sum / BigRational::from_integer(int_pow(p, p as u32 - 1));
    mq / (pz.clone() * pz) * inner
}

/// `ψ(a + b) = ψ(a) +_W ψ(b)`.
pub fn psi_tensor_check(p: u64, n: usize, a: &BigInt, b: &BigInt) -> Result<bool> {
    let ctx = WittContext::integers(p, n)?;
    let lhs = WittVector::from_int(&(a + b), ctx.clone());
    let rhs = WittVector::from_int(a, ctx.clone()).add(&WittVector::from_int(b, ctx))?;
    Ok(lhs == rhs)
}

/// `x·` and `∂^{[p^j]}` (`j < n`) on `span{x^0, ..., x^M}`.
#[derive(Clone, Debug)]
pub struct WeylOperators {
    pub p: u64,
    pub bound: usize,
    /// Multiplication by `x`; `x^M` goes to zero.
    pub x: Matrix<BigInt>,
    /// `dp[j]` is `∂^{[p^j]}`.
    pub dp: Vec<Matrix<BigInt>>,
}

/// `∂^{[k]}` on `span{x^0..x^M}`: `x^m ↦ C(m, k) x^{m-k}`.
pub fn divided_derivative(k: u64, bound: usize) -> Matrix<BigInt> {
    let rows = (0..=bound)
        .map(|i| {
            (0..=bound)
                .map(|m| if m >= i && (m - i) as u64 == k { binomial(m as u64, k) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows, bound + 1)
}

pub fn dp_weyl_operators(p: u64, n: u32, bound: usize) -> Result<WeylOperators> {
    require_prime(p)?;
    let x = Matrix::from_rows(
        (0..=bound)
            .map(|i| (0..=bound).map(|m| BigInt::from(u8::from(i == m + 1))).collect())
            .collect(),
        bound + 1,
    );
    let dp = (0..n).map(|j| divided_derivative(num_traits::pow(p, j as usize), bound)).collect();
    Ok(WeylOperators { p, bound, x, dp })
}

fn mul(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
    a.mul_with(b, &BigInt::zero(), |x, y| x + y, |x, y| x * y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylReport {
    /// `j` values where `[∂^{[p^j]}, x] = ∂^{[p^j - 1]}` fails on `x^m`, `m < M`.
    pub commutator_failures: Vec<(u32, usize)>,
    /// `(j, m)` where `v_p C(m, p^j - 1)` differs from the valuation of
    /// `prod_{k<j} (∂^{[p^k]})^{p-1}` on `x^m`.
    pub valuation_mismatches: Vec<(u32, usize)>,
}

impl WeylOperators {
    pub fn check(&self) -> WeylReport {
        let p = self.p;
        let mut commutator_failures = Vec::new();
        let mut valuation_mismatches = Vec::new();
        for (j, d) in self.dp.iter().enumerate() {
            let pj = num_traits::pow(p, j);
            let comm = {
                let a = mul(d, &self.x);
                let b = mul(&self.x, d);
                let rows = (0..a.rows())
                    .map(|i| (0..a.cols()).map(|c| &a[(i, c)] - &b[(i, c)]).collect())
                    .collect();
                Matrix::from_rows(rows, a.cols())
            };
            let lower = divided_derivative(pj - 1, self.bound);
            // x^M leaves the span, so the last column is not meaningful.
            for m in 0..self.bound {
                if (0..=self.bound).any(|i| comm[(i, m)] != lower[(i, m)]) {
                    commutator_failures.push((j as u32, m));
                }
            }
            let mut prod = divided_derivative(0, self.bound);
            for k in 0..j {
                let dk = divided_derivative(num_traits::pow(p, k), self.bound);
                for _ in 0..p - 1 {
                    prod = mul(&dk, &prod);
                }
            }
            for m in 0..=self.bound {
                let target = m.checked_sub((pj - 1) as usize);
                let lhs = binomial(m as u64, pj - 1);
                let rhs = target.map_or(BigInt::zero(), |t| prod[(t, m)].clone());
                if lhs.is_zero() != rhs.is_zero() || (!lhs.is_zero() && vp(&lhs, p) != vp(&rhs, p)) {
                    valuation_mismatches.push((j as u32, m));
                }
            }
        }
        WeylReport { commutator_failures, valuation_mismatches }
    }
}
