use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use pdcalc::exactalg::{divisor_orders, factorial_valuation, smith_normal_form, PolyRing, TruncPoly};
use pdcalc::{Matrix, PAdicScalar};
use proptest::prelude::*;

fn matrix(rows: &[Vec<i64>]) -> Matrix<BigInt> {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
}

fn mul(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
    a.mul_with(b, &BigInt::zero(), |x, y| x + y, |x, y| x * y)
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// `Z^n / A Z^n` counted inside `(Z/d)^n`, `d = |det A|`: returns
/// `(|coker|, #{x : kx = 0})`.
fn brute_force_coker(a: &[Vec<i64>], d: i64, k: i64) -> (usize, usize) {
    let n = a.len();
    let norm = |v: Vec<i64>| v.into_iter().map(|x| x.rem_euclid(d)).collect::<Vec<_>>();
    let mut lattice: HashSet<Vec<i64>> = HashSet::from([vec![0; n]]);
    let mut frontier = vec![vec![0; n]];
    while let Some(v) = frontier.pop() {
        for j in 0..n {
            let w = norm((0..n).map(|i| v[i] + a[i][j]).collect());
            if lattice.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    let total = (d as usize).pow(n as u32);
    let mut killed = 0;
    let mut x = vec![0i64; n];
    for _ in 0..total {
        if lattice.contains(&norm(x.iter().map(|c| c * k).collect())) {
            killed += 1;
        }
        for c in x.iter_mut() {
            *c += 1;
            if *c < d {
                break;
            }
            *c = 0;
        }
    }
    (total / lattice.len(), killed / lattice.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn padic_matches_integers(a in -10_000i64..10_000, b in -10_000i64..10_000, p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..8) {
        let m = BigInt::from(p).pow(n);
        let (x, y) = (PAdicScalar::new(p, n, a).unwrap(), PAdicScalar::new(p, n, b).unwrap());
        let r = |v: BigInt| v.mod_floor(&m);
        prop_assert_eq!((x + y).to_bigint(), r(BigInt::from(a) + b));
        prop_assert_eq!((x - y).to_bigint(), r(BigInt::from(a) - b));
        prop_assert_eq!((x * y).to_bigint(), r(BigInt::from(a) * b));
        prop_assert_eq!((-x).to_bigint(), r(-BigInt::from(a)));
    }

    #[test]
    fn smith_is_an_equivalence(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(-9i64..10, 9)) {
        let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 3 + j]).collect()).collect();
        let m = matrix(&a);
        let s = smith_normal_form(&m);
        prop_assert_eq!(mul(&mul(&s.u, &m), &s.v), s.d.clone());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let nz: Vec<&BigInt> = s.divisors.iter().filter(|d| !d.is_zero()).collect();
        for w in nz.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
    }

    #[test]
    fn smith_coker_matches_enumeration(n in 1usize..4, seed in prop::collection::vec(-5i64..6, 9), k in 2i64..7) {
        let a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 3 + j]).collect()).collect();
        let d = det(&a).abs();
        prop_assume!(d > 0 && d.pow(n as u32) <= 40_000);
        let s = smith_normal_form(&matrix(&a));
        let (zeros, orders) = divisor_orders(&s.divisors);
        prop_assert_eq!(zeros, 0);
        let size: BigInt = orders.iter().product();
        let killed: BigInt = orders.iter().map(|o| o.gcd(&BigInt::from(k))).product();
        let (bf_size, bf_killed) = brute_force_coker(&a, d, k);
        prop_assert_eq!(size, BigInt::from(bf_size));
        prop_assert_eq!(killed, BigInt::from(bf_killed));
    }

    #[test]
    fn truncated_multiplication_is_a_commutative_monoid(cs in prop::collection::vec(-4i64..5, 18), bound in 2u32..7) {
        let ring: Arc<PolyRing> = PolyRing::new(vec![pdcalc::Var::new("x"), pdcalc::Var::new("y")], Some(bound));
        let poly = |c: &[i64]| {
            let mut f = TruncPoly::zero(&ring);
            for (k, &v) in c.iter().enumerate() {
                let e = vec![(k % 3) as u32, (k / 3) as u32];
                if ring.admits(&e) {
                    f = f.add(&TruncPoly::monomial(&ring, e, BigRational::from_integer(BigInt::from(v))));
                }
            }
            f
        };
        let (f, g, h) = (poly(&cs[..6]), poly(&cs[6..12]), poly(&cs[12..]));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }
}

#[test]
fn factorial_valuation_at_prime_powers() {
    for p in [2u64, 3, 5] {
        for j in 0..=6u32 {
            let pj = p.pow(j);
            assert_eq!(factorial_valuation(p, pj).unwrap(), (pj - 1) / (p - 1), "p = {p}, j = {j}");
        }
    }
}

#[test]
fn negative_divisors_are_normalized() {
    let s = smith_normal_form(&matrix(&[vec![-6]]));
    assert!(s.divisors[0].is_positive());
}
