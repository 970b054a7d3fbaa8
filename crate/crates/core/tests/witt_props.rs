use num_bigint::BigInt;
use pdcalc::witt::{
    cartier_additivity, gabber_y, pn_identity, solve_frobenius, SolveOutcome, WittContext, WittVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vector(p: u64, comps: &[i64]) -> WittVector {
    WittVector::from_i64(WittContext::integers(p, comps.len()).unwrap(), comps).unwrap()
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

/// Length and components sized so that ghost coordinates stay manageable.
fn witt_pair() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    (primes(), 1usize..=5).prop_flat_map(|(p, len)| {
        (Just(p), prop::collection::vec(-6i64..7, len), prop::collection::vec(-6i64..7, len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ghost_map_is_a_ring_map((p, a, b) in witt_pair()) {
        let (x, y) = (vector(p, &a), vector(p, &b));
        let (gx, gy) = (x.ghost(), y.ghost());
        let sum: Vec<BigInt> = gx.entries().iter().zip(gy.entries()).map(|(u, v)| u + v).collect();
        let prod: Vec<BigInt> = gx.entries().iter().zip(gy.entries()).map(|(u, v)| u * v).collect();
        let (gs, gp) = (x.add(&y).unwrap().ghost(), x.mul(&y).unwrap().ghost());
        prop_assert_eq!(gs.entries(), sum.as_slice());
        prop_assert_eq!(gp.entries(), prod.as_slice());
    }

    #[test]
    fn verschiebung_and_frobenius((p, a, b) in witt_pair()) {
        prop_assume!(a.len() >= 2);
        let (x, y) = (vector(p, &a), vector(p, &b));
        prop_assert_eq!(x.add(&y).unwrap().verschiebung(), x.verschiebung().add(&y.verschiebung()).unwrap());
        let f = |v: &WittVector| v.frobenius().unwrap();
        prop_assert_eq!(f(&x.add(&y).unwrap()), f(&x).add(&f(&y)).unwrap());
        prop_assert_eq!(f(&x.mul(&y).unwrap()), f(&x).mul(&f(&y)).unwrap());
        // FV = p on W_{L-1}.
        let pw = WittVector::from_int(&BigInt::from(p), x.context()).truncate(a.len() - 1).unwrap();
        prop_assert_eq!(f(&x.verschiebung()), x.truncate(a.len() - 1).unwrap().mul(&pw).unwrap());
        // x V(y) = V(F(x) y), with V: W_{L-1} -> W_L.
        let fy = f(&x).mul(&y.truncate(a.len() - 1).unwrap()).unwrap();
        let mut comps = vec![BigInt::from(0)];
        comps.extend(fy.components().iter().cloned());
        let rhs = WittVector::new(x.context(), comps).unwrap();
        prop_assert_eq!(x.mul(&y.verschiebung()).unwrap(), rhs);
    }

    #[test]
    fn teichmuller_is_multiplicative(p in primes(), len in 1usize..=5, a in -20i64..21, b in -20i64..21) {
        let ctx = WittContext::integers(p, len).unwrap();
        let t = |v: i64| WittVector::teichmuller(&BigInt::from(v), ctx);
        prop_assert_eq!(t(a).mul(&t(b)).unwrap(), t(a * b));
    }

    #[test]
    fn reduction_commutes_with_arithmetic((p, a, b) in witt_pair(), n in 1u32..6) {
        let (x, y) = (vector(p, &a), vector(p, &b));
        let red = |v: &WittVector| v.reduce(n).unwrap();
        prop_assert_eq!(red(&x.add(&y).unwrap()), red(&x).add(&red(&y)).unwrap());
        prop_assert_eq!(red(&x.mul(&y).unwrap()), red(&x).mul(&red(&y)).unwrap());
    }

    #[test]
    fn solve_frobenius_inverts_frobenius(p in primes(), comps in prop::collection::vec(-5i64..6, 2..=4)) {
        let x = vector(p, &comps);
        let y = x.frobenius().unwrap();
        match solve_frobenius(&y).unwrap() {
            SolveOutcome::Success { x: sol, .. } => prop_assert_eq!(sol.frobenius().unwrap(), y),
            other => prop_assert!(false, "F(x) not solved: {:?}", other),
        }
    }
}

#[test]
fn gabber_identity_and_pn_vanishing() {
    for p in [2u64, 3, 5] {
        let ctx = WittContext::integers(p, 6).unwrap();
        let y = gabber_y(p, 6).unwrap();
        let lhs = WittVector::teichmuller(&BigInt::from(p), ctx).add(&y.verschiebung()).unwrap();
        assert_eq!(lhs, WittVector::from_int(&BigInt::from(p), ctx), "p = {p}");
    }
    for p in [2u64, 3] {
        for n in 1..=4 {
            let r = pn_identity(p, n, 6).unwrap();
            assert!(r.holds_mod_pn && r.ghost_is_pn_then_zero, "p = {p}, n = {n}");
        }
    }
}

/// Ghost vectors `a` with `a_m = a_{m-1} mod p^m` and `a_{n-1} = 0 mod p^n`.
fn integral_character(p: u64, n: usize, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let mut a = vec![BigInt::from(0); n];
    let pw = |e: usize| BigInt::from(p).pow(e as u32);
    a[n - 1] = pw(n) * rng.gen_range(-3i64..4);
    for k in (1..n).rev() {
        a[k - 1] = &a[k] + pw(k) * rng.gen_range(-3i64..4);
    }
    a
}

#[test]
fn cartier_character_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3] {
        let n = 2;
        for _ in 0..50 {
            let a = integral_character(p, n, &mut rng);
            let mut comps = || (0..n).map(|_| rng.gen_range(-4i64..5)).collect::<Vec<_>>();
            let (x, x2) = (vector(p, &comps()), vector(p, &comps()));
            assert!(cartier_additivity(&a, &x, &x2, 8).unwrap(), "p = {p}, a = {a:?}");
        }
    }
}
