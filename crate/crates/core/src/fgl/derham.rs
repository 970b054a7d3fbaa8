use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::law::{CoeffRing, FormalGroupLaw};
use crate::exactalg::{Matrix, PolyRing, TruncPoly};
use crate::{Error, Result};

/// `[n]_q = 1 + q + ... + q^{n-1}` at `q = 1 + λħ`, in a ring whose first
/// variable is `ħ` and which has a variable named `lambda`.
pub fn q_integer(n: u64, ring: &Arc<PolyRing>) -> TruncPoly<BigRational> {
    let h = TruncPoly::var(ring, 0);
    let lambda = TruncPoly::var_named(ring, "lambda");
    let q = TruncPoly::one(ring).add(&lambda.mul(&h));
    let mut acc = TruncPoly::zero(ring);
    let mut power = TruncPoly::one(ring);
    for _ in 0..n {
        acc = acc.add(&power);
        power = power.mul(&q);
    }
    acc
}

/// Weight `m` piece of the two-term complex: multiplication by `⟨m⟩(ħ)`
/// on `A[[ħ]]/ħ^K`, as a `K x K` matrix in the basis `1, ħ, ..., ħ^{K-1}`.
#[derive(Clone, Debug)]
pub struct WeightComponent {
    pub weight: u64,
    pub divided: Vec<BigInt>,
    pub matrix: Matrix<BigInt>,
}

#[derive(Clone, Debug)]
pub struct FDeRhamComplex {
    pub truncation: usize,
    pub weights: Vec<WeightComponent>,
}

/// The complex for weights `0..=w`, with `ħ` truncated at `ħ^k`.
///
/// Needs integer coefficients and no free parameter; the law must be known
/// to degree at least `k`.
pub fn f_derham_complex(f: &FormalGroupLaw, w: u64, k: usize) -> Result<FDeRhamComplex> {
    if f.param().is_some() {
        return Err(Error::InvalidInput("specialize the parameter to an integer first".into()));
    }
    if matches!(f.coeff_ring(), CoeffRing::ModPrimePower { .. }) {
        return Err(Error::Unsupported("f-de Rham matrices are built over Z".into()));
    }
    if (f.degree() as usize) < k {
        return Err(Error::Precision(format!(
            "law known to degree {} but ħ^{} requested",
            f.degree(),
            k
        )));
    }
    let weights = (0..=w)
        .map(|m| {
            let coeffs = if m == 0 {
                vec![BigInt::zero(); k]
            } else {
                let div = f.divided_n_series(m as i64);
                div.univariate_coeffs(k)
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.is_integer() {
                            Ok(c.to_integer())
                        } else {
                            Err(Error::IntegralityViolation(format!(
                                "⟨{m}⟩ has coefficient {c} at ħ^{i}"
                            )))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let rows = (0..k)
                .map(|r| {
                    (0..k)
                        .map(|c| if r >= c { coeffs[r - c].clone() } else { BigInt::zero() })
                        .collect()
                })
                .collect();
            Ok(WeightComponent { weight: m, divided: coeffs, matrix: Matrix::from_rows(rows, k) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FDeRhamComplex { truncation: k, weights })
}
