use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use pdcalc::dpops::{DPBasisMonomial, GradedLinearMap, OperatorCube};
use pdcalc::senhom::{
    build_bokstedt, build_dvr_square, build_perfectoid_serre, build_serre_cmn, cube_total_fiber,
    dvr_precision_for, kernel_ranks, two_term_homology, BokstedtVariant, DVRDescriptor, HomologyBase,
    OperatorFamily, TwoTermComplex,
};
use proptest::prelude::*;

fn basis(n: usize) -> BTreeMap<i64, Vec<DPBasisMonomial>> {
    [(0, (0..n as u64).map(|a| DPBasisMonomial::new(a, 0, 0)).collect())].into()
}

fn matrix_map(rows: &[Vec<i64>], n: usize) -> GradedLinearMap {
    let m = rows.len();
    GradedLinearMap::from_fn(basis(n), basis(m), 0, i64::MAX / 4, |x| {
        let mut e = BTreeMap::new();
        for (i, row) in rows.iter().enumerate() {
            if row[x.a as usize] != 0 {
                e.insert(DPBasisMonomial::new(i as u64, 0, 0), BigRational::from_integer(row[x.a as usize].into()));
            }
        }
        e
    })
    .unwrap()
}

/// Determinant by Gaussian elimination over Q.
fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let mut d = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else { return BigInt::zero() };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d.to_integer()
}

fn integer_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..5, 1usize..5).prop_flat_map(|(n, m)| {
        (Just(n), prop::collection::vec(prop::collection::vec(-6i64..7, n), m))
    })
}

fn scalar_family(vals: &[i64]) -> OperatorFamily {
    let vals: Vec<BigRational> = vals.iter().map(|&v| BigRational::from_integer(v.into())).collect();
    OperatorFamily::new(OperatorCube::scalars(&vals).unwrap().ops).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_term_long_exact_sequence((n, rows) in integer_matrix()) {
        let m = rows.len();
        let map = matrix_map(&rows, n);
        let h = two_term_homology(&TwoTermComplex { map: map.clone(), base: HomologyBase::Integers }, 0, "t").unwrap();
        let (h0, h1) = (h.at(0), h.at(-1));
        // A subgroup of Z^n is free; the Euler characteristic is n - m.
        prop_assert!(h0.torsion.is_empty());
        prop_assert_eq!(h0.free_rank as i64 - h1.free_rank as i64, n as i64 - m as i64);
        prop_assert_eq!(kernel_ranks(&map, HomologyBase::Integers).unwrap()[&0], h0.free_rank);
        if n == m {
            let d = det(&rows).abs();
            if d.is_zero() {
                prop_assert!(h1.free_rank > 0);
            } else {
                let order: BigInt = h1.torsion.iter().map(|&o| BigInt::from(o)).product();
                prop_assert_eq!(order, d);
            }
        }
    }

    #[test]
    fn total_fiber_ignores_operator_order(vals in prop::collection::vec(-12i64..13, 1..4), rot in 0usize..3) {
        let mut turned = vals.clone();
        turned.rotate_left(rot % vals.len());
        let lo = -(vals.len() as i64) - 1;
        let a = cube_total_fiber(&scalar_family(&vals), HomologyBase::Integers, lo, 1, "c").unwrap();
        let b = cube_total_fiber(&scalar_family(&turned), HomologyBase::Integers, lo, 1, "c").unwrap();
        prop_assert_eq!(a.degrees, b.degrees);
    }
}

#[test]
fn zero_cubes_have_binomial_ranks() {
    for k in 1..=4usize {
        let r = cube_total_fiber(&scalar_family(&vec![0; k]), HomologyBase::Integers, -(k as i64) - 1, 1, "z")
            .unwrap();
        let mut euler = 0i64;
        for i in 0..=k {
            let g = r.at(-(i as i64));
            let binom = (0..i).fold(1usize, |acc, j| acc * (k - j) / (j + 1));
            assert_eq!((g.free_rank, g.torsion.len()), (binom, 0), "k = {k}, degree -{i}");
            euler += if i % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) };
        }
        assert_eq!(euler, 0);
    }
}

#[test]
fn perfectoid_homology_is_polynomial() {
    for p in [2u64, 3, 5] {
        let bound = 20 * p as i64;
        let s = build_perfectoid_serre(p, bound).unwrap();
        for d in 0..=bound {
            let g = s.report.at(d);
            let want = if d % 2 == 0 { (1, 0) } else { (0, 0) };
            assert_eq!((g.free_rank, g.torsion.len()), want, "p = {p}, degree {d}");
        }
    }
}

#[test]
fn serre_even_degrees_vanish() {
    for (p, n) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let r = build_serre_cmn(p, n, 40).unwrap();
        assert_eq!(r.at(0).free_rank, 1);
        for d in 1..=20 {
            assert!(r.at(2 * d).is_zero(), "p = {p}, n = {n}, degree {}", 2 * d);
        }
    }
}

#[test]
fn unramified_dvr_square_is_jp() {
    for p in [2u64, 5] {
        let bound = 30;
        let e = [-(p as i64)];
        let desc = DVRDescriptor::new(p, dvr_precision_for(p, &e, bound), e.to_vec()).unwrap();
        let sq = build_dvr_square(&desc, bound).unwrap();
        let jp = build_bokstedt(p, BokstedtVariant::Jp, bound).unwrap();
        for d in 0..=bound {
            assert_eq!(sq.total.at(d), jp.at(d), "p = {p}, degree {d}");
        }
    }
}

#[test]
fn single_scalar_fiber_is_cyclic() {
    for v in [1i64, 2, 6, -9, 12] {
        let r = cube_total_fiber(&scalar_family(&[v]), HomologyBase::Integers, -2, 1, "s").unwrap();
        let want: Vec<u64> = if v.unsigned_abs() > 1 { vec![v.unsigned_abs()] } else { vec![] };
        assert_eq!(r.at(-1).torsion, want);
        assert!(r.at(0).is_zero());
    }
}
