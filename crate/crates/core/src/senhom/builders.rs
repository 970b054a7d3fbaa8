use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::{
    kernel_ranks, rows_to_report, total_fiber_rows, two_term_homology, two_term_rows, HomologyBase,
    OperatorFamily, TwoTermComplex,
};
use super::scalar::{rational_to_integer, rational_to_padic, DVRDescriptor, DvrElement, Scalar};
use crate::dpops::{
    single, theta_perfectoid, theta_zpn, DPBasisMonomial, DPModule, DegreeWeights, DpElement, GradedLinearMap,
};
use crate::exactalg::{int_pow, require_prime, smith_normal_form, vp, vp_rational, Matrix, PAdicScalar};
use crate::fgl::{f_derham_complex, FormalGroupLaw};
use crate::report::HomologyReport;
use crate::{Error, Result};

/// Headroom added to the largest torsion exponent expected in range.
pub const PRECISION_GUARD: u32 = 4;

/// Largest `e` with `p^e <= k` (0 for `k < p`).
fn max_vp_upto(p: u64, k: i64) -> u32 {
    let (mut e, mut pe) = (0, p as i64);
    while pe <= k {
        e += 1;
        pe = pe.saturating_mul(p as i64);
    }
    e
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Z[g]` on one generator of degree `w`, through degree `top`.
fn polynomial_basis(p: u64, w: i64, top: i64) -> Result<BTreeMap<i64, Vec<DPBasisMonomial>>> {
    let weights = DegreeWeights { gamma: 1, theta: w, eps: 1 };
    Ok(DPModule::new(p, top, weights)?.without_gamma().without_eps().basis())
}

/// `g^j ↦ c j g^{j-1}` on `Z[g]`, `|g| = w`.
fn scaled_derivative(p: u64, w: i64, c: i64, top: i64) -> Result<GradedLinearMap> {
    let basis = polynomial_basis(p, w, top)?;
    GradedLinearMap::from_fn(basis.clone(), basis, -w, top, |m| {
        if m.b == 0 {
            DpElement::new()
        } else {
            single(DPBasisMonomial::new(0, m.b - 1, 0), rat(c * m.b as i64))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BokstedtVariant {
    /// `Z_p[θ]`, `|θ| = 2p`, `θ^j ↦ jp θ^{j-1}`.
    T1,
    /// `Z_p[x]`, `|x| = 2`, `x^j ↦ j x^{j-1}`.
    Jp,
}

impl std::fmt::Display for BokstedtVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BokstedtVariant::T1 => "T1",
            BokstedtVariant::Jp => "Jp",
        })
    }
}

pub fn build_bokstedt(p: u64, variant: BokstedtVariant, bound: i64) -> Result<HomologyReport> {
    require_prime(p)?;
    let top = bound + 1;
    let (w, c, extra) = match variant {
        BokstedtVariant::T1 => (2 * p as i64, p as i64, 1),
        BokstedtVariant::Jp => (2, 1, 0),
    };
    let n = max_vp_upto(p, top / w) + extra + PRECISION_GUARD;
    let map = scaled_derivative(p, w, c, top)?;
    let rep = two_term_homology(&TwoTermComplex { map, base: HomologyBase::PAdic { p, precision: n } }, bound, "bokstedt")?;
    Ok(rep.param("p", p).param("variant", variant).param("bound", bound))
}

/// `Z_p[x, y]/x²` with `|x| = 2p^n - 1`, `|y| = 2p^n` and
/// `d(y^m) = mp y^{m-1} x`.
pub fn build_serre_cmn(p: u64, n: u32, bound: i64) -> Result<HomologyReport> {
    require_prime(p)?;
    let pn = num_traits::pow(p as i64, n as usize);
    let top = bound + 1;
    let weights = DegreeWeights { gamma: 1, theta: 2 * pn, eps: 2 * pn - 1 };
    let module = DPModule::new(p, top, weights)?.without_gamma();
    let basis = module.basis();
    let pick = |c: u8| -> BTreeMap<i64, Vec<DPBasisMonomial>> {
        basis
            .iter()
            .map(|(d, v)| (*d, v.iter().copied().filter(|m| m.c == c).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    };
    let map = GradedLinearMap::from_fn(pick(0), pick(1), -1, top, |m| {
        if m.b == 0 {
            DpElement::new()
        } else {
            single(DPBasisMonomial::new(0, m.b - 1, 1), rat(m.b as i64 * p as i64))
        }
    })?;
    let precision = max_vp_upto(p, top / (2 * pn)) + 1 + PRECISION_GUARD;
    let rep = two_term_homology(&TwoTermComplex { map, base: HomologyBase::PAdic { p, precision } }, bound, "serre_cmn")?;
    Ok(rep.param("p", p).param("n", n).param("bound", bound))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectoidSerre {
    pub report: HomologyReport,
    /// `n ↦` rank of the kernel on the `ε`-free part of degree `2np`.
    pub kernel_ranks: BTreeMap<u64, usize>,
}

pub fn build_perfectoid_serre(p: u64, bound: i64) -> Result<PerfectoidSerre> {
    let map = theta_perfectoid(p, bound + 1)?;
    let base = HomologyBase::PAdic { p, precision: PRECISION_GUARD };
    let ranks = kernel_ranks(&map, base)?;
    let report = two_term_homology(&TwoTermComplex { map, base }, bound, "perfectoid_serre")?
        .param("p", p)
        .param("bound", bound);
    let step = 2 * p as i64;
    let kernel_ranks = (1..)
        .map(|n: i64| (n, n * step))
        .take_while(|&(_, d)| d <= bound)
        .map(|(n, d)| (n as u64, ranks.get(&d).copied().unwrap_or(0)))
        .collect();
    Ok(PerfectoidSerre { report, kernel_ranks })
}

pub fn build_zpn_serre(p: u64, n: u32, bound: i64) -> Result<HomologyReport> {
    let map = theta_zpn(p, n, bound + 1)?;
    let precision = max_vp_upto(p, (bound + 1) / 2) + PRECISION_GUARD;
    let rep = two_term_homology(&TwoTermComplex { map, base: HomologyBase::PAdic { p, precision } }, bound, "zpn_serre")?;
    Ok(rep.param("p", p).param("n", n).param("bound", bound))
}

/// Matrix expressing `γ_j(y) c^{k-j}` (columns) in the basis
/// `γ_i(x) c^{k-i}` (rows), for `y = x - p^{n-1} c`.
pub fn omega2yn_basis_change(p: u64, n: u32, k: usize) -> Matrix<BigRational> {
    let step = BigRational::from_integer(int_pow(p, n.saturating_sub(1)));
    let mut rows = vec![vec![BigRational::zero(); k + 1]; k + 1];
    for j in 0..=k {
        let mut coef = BigRational::one();
        for i in 0..=j {
            if i > 0 {
                coef = -coef * &step / rat(i as i64);
            }
            rows[j - i][j] = coef.clone();
        }
    }
    Matrix::from_rows(rows, k + 1)
}

/// Relations `(x - p^{n-1}c) γ_a(x) c^{k-1-a}` in the `γ_j(x) c^{k-j}` basis.
fn omega2yn_relations(p: u64, n: u32, k: usize) -> Vec<Vec<BigInt>> {
    let step = int_pow(p, n - 1);
    (0..k)
        .map(|a| {
            let mut row = vec![BigInt::zero(); k + 1];
            row[a + 1] = BigInt::from(a + 1);
            row[a] = -step.clone();
            row
        })
        .collect()
}

/// Cohomology of `Z_p<x>[c]/(x - p^{n-1}c)`, `|x| = |c| = 2`, presented as
/// `Z_p<y>[c]/y`. Degrees in the report are cohomological.
pub fn omega2yn_cohomology(p: u64, n: u32, bound: i64) -> Result<HomologyReport> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("need n >= 1".into()));
    }
    let kmax = (bound.max(0) / 2) as usize;
    let precision = max_vp_upto(p, kmax as i64) + PRECISION_GUARD;
    let one = PAdicScalar::one(p, precision)?;
    let mut report = HomologyReport::new("omega2yn", Some(precision))
        .param("p", p)
        .param("n", n)
        .param("bound", bound)
        .param("grading", "cohomological");
    for k in 0..=kmax {
        let b = omega2yn_basis_change(p, n, k);
        for i in 0..=k {
            if !b[(i, i)].is_one() {
                return Err(Error::Internal("basis change is not unitriangular".into()));
            }
            for j in 0..=k {
                if vp_rational(&b[(i, j)], p).is_some_and(|v| v < 0) {
                    return Err(Error::InvalidInput(format!(
                        "basis change has non-integral entry {} at n = {n}",
                        b[(i, j)]
                    )));
                }
            }
        }
        // In the y basis the relations are (j+1) γ_{j+1}(y) c^{k-1-j}.
        let expected: Vec<u64> = (1..=k as u64)
            .filter_map(|j| vp(&BigInt::from(j), p).filter(|&v| v > 0).map(|v| p.pow(v)))
            .collect();
        let summary = if k == 0 {
            Default::default()
        } else {
            let rel = omega2yn_relations(p, n, k);
            let m = rel
                .iter()
                .map(|r| r.iter().map(|x| rational_to_padic(&BigRational::from_integer(x.clone()), p, precision)).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            PAdicScalar::summarize(&Matrix::from_rows(m, k + 1), &one)?
        };
        let mut found = summary.orders.clone();
        found.sort_unstable();
        let mut exp_sorted = expected.clone();
        exp_sorted.sort_unstable();
        if found != exp_sorted || summary.rank != k {
            return Err(Error::Internal(format!(
                "relation module in degree {} disagrees with the y presentation",
                2 * k
            )));
        }
        report.push(2 * k as i64, k + 1 - summary.rank, &found);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCheck {
    pub degree: i64,
    pub expected_order: u64,
    pub found_order: u64,
    pub cyclic: bool,
}

impl ExtensionCheck {
    pub fn holds(&self) -> bool {
        self.cyclic && self.expected_order == self.found_order
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvrSquare {
    pub nabla: HomologyReport,
    pub total: HomologyReport,
    /// Present when `2p - 1` is within the bound.
    pub extension: Option<ExtensionCheck>,
}

/// `π`-adic valuation of `E'(π)`, read off the integer coefficients.
fn e_prime_valuation(p: u64, eisenstein: &[i64]) -> u32 {
    let e = eisenstein.len() as u32;
    let mut coeffs: Vec<i64> = eisenstein.to_vec();
    coeffs.push(1);
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(i, &c)| vp(&BigInt::from(c * i as i64), p).map(|v| e * v + i as u32 - 1))
        .min()
        .unwrap_or(0)
}

/// Largest `π`-adic exponent of a torsion order up to `bound`: `v_π(j E'(π))`.
fn dvr_max_valuation(p: u64, eisenstein: &[i64], bound: i64) -> u32 {
    let e = eisenstein.len() as u32;
    e * max_vp_upto(p, bound / 2 + 1) + e_prime_valuation(p, eisenstein)
}

/// `Z/p^N` precision for `build_dvr_square` at this bound, with headroom.
pub fn dvr_precision_for(p: u64, eisenstein: &[i64], bound: i64) -> u32 {
    let e = eisenstein.len() as u32;
    dvr_max_valuation(p, eisenstein, bound).div_ceil(e) + PRECISION_GUARD
}

/// `R<σ>[x]` with `∇ γ_a(σ) = E'(π) γ_{a-1}(σ)` and `Θ x^b = b x^{b-1}`.
pub fn build_dvr_square(desc: &DVRDescriptor, bound: i64) -> Result<DvrSquare> {
    let p = desc.p;
    let e = desc.ramification() as u32;
    let need = dvr_max_valuation(p, &desc.eisenstein, bound).div_ceil(e) + 1;
    if desc.precision < need {
        return Err(Error::Precision(format!("precision {} below the required {need}", desc.precision)));
    }
    let ring = desc.ring();
    let ep = DvrElement::e_prime(&ring);
    let one = DvrElement::from_int(&ring, &BigInt::one());
    let top = bound + 1;
    let module = DPModule::new(p, top, DegreeWeights { gamma: 2, theta: 2, eps: 1 })?.without_eps();
    let basis = module.basis();
    let nabla = GradedLinearMap::from_fn(basis.clone(), basis.clone(), -2, top, |m| {
        if m.a == 0 {
            DpElement::new()
        } else {
            single(DPBasisMonomial::new(m.a - 1, m.b, 0), BigRational::one())
        }
    })?;
    let theta = GradedLinearMap::from_fn(basis.clone(), basis, -2, top, |m| {
        if m.b == 0 {
            DpElement::new()
        } else {
            single(DPBasisMonomial::new(m.a, m.b - 1, 0), rat(m.b as i64))
        }
    })?;
    let to_r = |x: &BigRational| -> Result<DvrElement> { Ok(DvrElement::from_int(&ring, &rational_to_integer(x)?)) };
    let nabla_conv = |x: &BigRational| -> Result<DvrElement> { Ok(to_r(x)?.times(&ep)) };
    let label = |r: HomologyReport| {
        r.param("p", p).param("E", desc.polynomial_string()).param("bound", bound)
    };
    let nabla_rows = two_term_rows(&nabla, &nabla_conv, &one, bound)?;
    let nabla_report = label(rows_to_report("dvr_nabla", Some(desc.precision), nabla_rows));

    let fam = OperatorFamily::new(vec![nabla, theta])?;
    let conv = |i: usize, x: &BigRational| -> Result<DvrElement> {
        if i == 0 {
            nabla_conv(x)
        } else {
            to_r(x)
        }
    };
    let total_rows = total_fiber_rows(&fam, &conv, &one, -2, bound)?;
    let total = label(rows_to_report("dvr_total", Some(desc.precision), total_rows));

    let deg = 2 * p as i64 - 1;
    let extension = (deg <= bound).then(|| {
        let g = total.at(deg);
        ExtensionCheck {
            degree: deg,
            expected_order: p.pow(e + e_prime_valuation(p, &desc.eisenstein)),
            found_order: g.torsion.iter().product(),
            cyclic: g.free_rank == 0 && g.torsion.len() == 1,
        }
    });
    Ok(DvrSquare { nabla: nabla_report, total, extension })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCohomology {
    pub weight: u64,
    pub h0_free: usize,
    pub h1_free: usize,
    /// Nonunit elementary divisors of H¹, as decimal strings.
    pub h1_divisors: Vec<String>,
}

/// Weight by weight cohomology of the F-de Rham complex of `A[t]`, `A = Z`,
/// modulo `ħ^k`.
pub fn fderham_cohomology(f: &FormalGroupLaw, w: u64, k: usize) -> Result<Vec<WeightCohomology>> {
    let complex = f_derham_complex(f, w, k)?;
    Ok(complex
        .weights
        .iter()
        .map(|c| {
            if c.weight == 0 {
                // No t^{-1} dt, so weight 0 has nothing in degree one.
                return WeightCohomology { weight: 0, h0_free: c.matrix.cols(), h1_free: 0, h1_divisors: vec![] };
            }
            let s = smith_normal_form(&c.matrix);
            let nonzero: Vec<&BigInt> = s.divisors.iter().filter(|d| !d.is_zero()).collect();
            WeightCohomology {
                weight: c.weight,
                h0_free: c.matrix.cols() - nonzero.len(),
                h1_free: c.matrix.rows() - nonzero.len(),
                h1_divisors: nonzero.iter().filter(|d| !d.abs().is_one()).map(|d| d.abs().to_string()).collect(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vp_u(j: u64, p: u64) -> u32 {
        vp(&BigInt::from(j), p).unwrap()
    }

    #[test]
    fn bokstedt_patterns() {
        let t1 = build_bokstedt(3, BokstedtVariant::T1, 40).unwrap();
        assert_eq!(t1.at(0).free_rank, 1);
        assert_eq!(t1.at(5).torsion, vec![3]);
        assert_eq!(t1.at(17).torsion, vec![9]);
        let jp = build_bokstedt(3, BokstedtVariant::Jp, 40).unwrap();
        assert_eq!(jp.at(5).torsion, vec![3]);
        assert!(jp.at(3).is_zero());
        for j in 1..=20u64 {
            let want: Vec<u64> = Some(3u64.pow(vp_u(j, 3))).filter(|&o| o > 1).into_iter().collect();
            assert_eq!(jp.at(2 * j as i64 - 1).torsion, want, "j = {j}");
        }
    }

    #[test]
    fn serre_cmn_pattern() {
        let r = build_serre_cmn(2, 1, 12).unwrap();
        assert_eq!(r.at(3).torsion, vec![2]);
        assert_eq!(r.at(7).torsion, vec![4]);
        assert_eq!(r.at(11).torsion, vec![2]);
        assert_eq!(r.at(0).free_rank, 1);
        assert!((1..=6).all(|d| r.at(2 * d).is_zero()));
        let r = build_serre_cmn(3, 2, 20).unwrap();
        assert_eq!(r.at(17).torsion, vec![3]);
    }

    #[test]
    fn perfectoid_is_polynomial() {
        let s = build_perfectoid_serre(3, 60).unwrap();
        for d in 0..=60 {
            let g = s.report.at(d);
            if d % 2 == 0 {
                assert_eq!((g.free_rank, g.torsion.len()), (1, 0), "degree {d}");
            } else {
                assert!(g.is_zero(), "degree {d}");
            }
        }
        assert!(s.kernel_ranks.values().all(|&r| r == 1));
        assert_eq!(s.kernel_ranks.len(), 10);
    }

    #[test]
    fn zpn_low_degree() {
        let r = build_zpn_serre(3, 2, 10).unwrap();
        assert_eq!(r.at(5).torsion, vec![3]);
        assert!(matches!(build_zpn_serre(2, 2, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn omega2yn_groups() {
        let r = omega2yn_cohomology(3, 2, 18).unwrap();
        assert_eq!(r.at(0).free_rank, 1);
        assert_eq!((r.at(6).free_rank, r.at(6).torsion.clone()), (1, vec![3]));
        assert_eq!(r.at(18).torsion, vec![3, 3, 9]);
        assert!(matches!(omega2yn_cohomology(3, 1, 18), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn dvr_unramified_matches_jp() {
        let p = 3;
        let bound = 24;
        let desc = DVRDescriptor::new(p, dvr_precision_for(p, &[-3], bound), vec![-3]).unwrap();
        let sq = build_dvr_square(&desc, bound).unwrap();
        let jp = build_bokstedt(p, BokstedtVariant::Jp, bound).unwrap();
        for d in 0..=bound {
            assert_eq!(sq.total.at(d), jp.at(d), "degree {d}");
        }
        assert!(sq.extension.unwrap().holds());
    }

    #[test]
    fn dvr_ramified() {
        let p = 3;
        let e = [-3, 0];
        let bound = 12;
        let desc = DVRDescriptor::new(p, dvr_precision_for(p, &e, bound), e.to_vec()).unwrap();
        let sq = build_dvr_square(&desc, bound).unwrap();
        // E' = 2π: R/2π ≅ R/π in degree 1 and R/4π ≅ R/π in degree 3.
        assert_eq!(sq.total.at(1).torsion, vec![3]);
        assert_eq!(sq.total.at(3).torsion, vec![3]);
        assert_eq!(sq.total.at(0).free_rank, 1);
        // Degree 5 = 2p - 1 has the order of R/3·2π, but the linear square
        // splits by Künneth: R/E' ⊕ R/3 = R/π ⊕ R/π², not cyclic.
        let ext = sq.extension.unwrap();
        assert_eq!((ext.expected_order, ext.found_order), (27, 27));
        assert_eq!(sq.total.at(5).torsion, vec![3, 9]);
        assert!(!ext.holds());
        // (R/E') ⊗ (R/3) lands in even degree 6.
        assert_eq!(sq.total.at(6).torsion, vec![3]);
        // ∇ alone: j copies of R/E' in degree 2j - 1.
        assert_eq!(sq.nabla.at(5).torsion, vec![3, 3, 3]);
        let low = DVRDescriptor::new(p, 1, e.to_vec()).unwrap();
        assert!(matches!(build_dvr_square(&low, bound), Err(Error::Precision(_))));
    }

    #[test]
    fn fderham_additive() {
        use crate::fgl::{fgl_construct, FglKind};
        let f = fgl_construct(FglKind::Additive, 8).unwrap();
        let w = fderham_cohomology(&f, 6, 4).unwrap();
        assert_eq!(w[0].h0_free, 4);
        assert_eq!(w[0].h1_free, 0);
        for c in &w[1..] {
            let m = c.weight;
            let want: Vec<String> = if m == 1 { vec![] } else { vec![m.to_string(); 4] };
            assert_eq!(c.h1_divisors, want);
            assert_eq!((c.h0_free, c.h1_free), (0, 0));
        }
    }
}
