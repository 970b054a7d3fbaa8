use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pdcalc::dpops::{
    base_p_digits, dp_weyl_operators, element_product, gamma_factorization_unit, gamma_factorization_valuation,
    monomial_product, perfectoid_derivation, psi_eigenvalues, psi_one_closed_form, psi_tensor_check,
    psi_two_closed_form, single, DPBasisMonomial, DpElement, OperatorCube,
};
use proptest::prelude::*;

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn carry_free(p: u64, a: u64, b: u64) -> bool {
    let (da, db) = (base_p_digits(a, p), base_p_digits(b, p));
    (0..da.len().max(db.len())).all(|i| da.get(i).unwrap_or(&0) + db.get(i).unwrap_or(&0) < p)
}

fn vp(n: &BigInt, p: u64) -> u32 {
    let (mut n, p, mut v) = (n.clone(), BigInt::from(p), 0);
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_on_carry_free_products(
        p in primes(),
        (a1, a2) in (0u64..40, 0u64..40),
        (b1, b2) in (0u64..3, 0u64..3),
        c in 0u8..2,
    ) {
        prop_assume!(carry_free(p, a1, a2));
        let d = perfectoid_derivation(p, 200).unwrap();
        let (x, y) = (DPBasisMonomial::new(a1, b1, c), DPBasisMonomial::new(a2, b2, 0));
        let (k, xy) = monomial_product(&x, &y).unwrap();
        let lhs: DpElement = d
            .on_monomial(&xy)
            .into_iter()
            .map(|(m, v)| (m, v * BigRational::from_integer(k.clone())))
            .collect();
        let ex = single(x, BigRational::one());
        let ey = single(y, BigRational::one());
        let mut rhs = element_product(&d.on_monomial(&x), &ey);
        for (m, v) in element_product(&ex, &d.on_monomial(&y)) {
            let e = rhs.entry(m).or_insert_with(BigRational::zero);
            *e += v;
            if e.is_zero() {
                rhs.remove(&m);
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sen_differential_squares_to_zero(p in primes(), a in 0u64..60, b in 0u64..4, c in 0u8..2) {
        let d = perfectoid_derivation(p, 300).unwrap();
        let once = d.on_monomial(&DPBasisMonomial::new(a, b, c));
        prop_assert!(once.keys().all(|m| m.c == 1));
        prop_assert!(d.apply(&once).is_empty());
    }

    #[test]
    fn psi_components_are_integral_and_additive(p in primes(), m in -200i64..200, k in -200i64..200) {
        let m = BigInt::from(m);
        let psi = psi_eigenvalues(p, 3, &m).unwrap();
        prop_assert_eq!(&psi[0], &m);
        prop_assert_eq!(BigRational::from_integer(psi[1].clone()), psi_one_closed_form(p, &m));
        prop_assert_eq!(BigRational::from_integer(psi[2].clone()), psi_two_closed_form(p, &m));
        prop_assert!(psi_tensor_check(p, 3, &m, &BigInt::from(k)).unwrap());
    }

    #[test]
    fn scalar_operators_commute(vals in prop::collection::vec(-30i64..30, 1..4)) {
        let vals: Vec<BigRational> = vals.into_iter().map(|v| BigRational::from_integer(v.into())).collect();
        prop_assert!(OperatorCube::scalars(&vals).is_ok());
    }
}

#[test]
fn gamma_factorization_constant_is_a_unit() {
    for p in [2u64, 3, 5, 7] {
        for m in 1..=10_000u64 {
            assert_eq!(gamma_factorization_valuation(p, m).unwrap(), 0, "p = {p}, m = {m}");
        }
        for m in 1..=300u64 {
            assert_eq!(vp(&gamma_factorization_unit(p, m), p), 0, "p = {p}, m = {m}");
        }
    }
}

#[test]
fn divided_power_weyl_relations() {
    for (p, n) in [(2u64, 4u32), (3, 3), (5, 2)] {
        let r = dp_weyl_operators(p, n, 60).unwrap().check();
        assert!(r.commutator_failures.is_empty(), "p = {p}: {:?}", r.commutator_failures);
        assert!(r.valuation_mismatches.is_empty(), "p = {p}: {:?}", r.valuation_mismatches);
    }
}
