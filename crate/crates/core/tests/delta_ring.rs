use deltap::cyclotomic::{CyclotomicElement, CyclotomicField};
use deltap::delta::{check_delta_ring_axioms, delta_p_int, delta_p_rational, eval_commutator, eval_cp, FrobeniusRing};
use deltap::scalar::{int, rat};
use deltap::{PrimeSet, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

const PRIMES: [u64; 3] = [3, 5, 7];

fn ps(v: &[u64]) -> PrimeSet {
    PrimeSet::new(v.to_vec()).unwrap()
}

/// (a − a^p)/p in i128, for the small values used here.
fn fermat_quotient_i128(a: i128, p: u32) -> i128 {
    let ap = a.pow(p);
    assert_eq!((a - ap) % p as i128, 0);
    (a - ap) / p as i128
}

fn local_rational() -> impl Strategy<Value = Rational> {
    // denominators built from 2 and 11 only
    (-500i64..500, 0u32..3, 0u32..2).prop_map(|(n, e2, e11)| rat(n, 2i64.pow(e2) * 11i64.pow(e11)))
}

#[test]
fn commutator_at_two() {
    // δ_3(2) = −2, δ_5(2) = −6, δ_3(−6) = 70, δ_5(−2) = 6
    let c = eval_commutator(3, 5, &int(2), &int(-2), &int(-6)).unwrap();
    assert_eq!(c, int(64));
    let lhs = fermat_quotient_i128(fermat_quotient_i128(2, 5), 3) - fermat_quotient_i128(fermat_quotient_i128(2, 3), 5);
    assert_eq!(lhs, 64);
}

#[test]
fn fermat_quotients_of_small_integers() {
    for &p in &PRIMES {
        for a in -40i64..=40 {
            let got = delta_p_int(&BigInt::from(a), p);
            assert_eq!(got, BigInt::from(fermat_quotient_i128(a as i128, p as u32)), "a = {a}, p = {p}");
        }
    }
}

#[test]
fn denominators_at_p_are_rejected() {
    assert!(delta_p_rational(&rat(1, 3), 3).is_err());
    assert!(delta_p_rational(&rat(1, 3), 5).is_ok());
}

#[test]
fn axioms_on_zeta_four() {
    let field = CyclotomicField::for_primes(4, &ps(&PRIMES)).unwrap();
    let samples: Vec<CyclotomicElement> = (0..12i64)
        .map(|k| CyclotomicElement::new(&field, vec![rat(k - 6, 1 + (k % 2)), rat(3 - k, 4)]))
        .collect();
    assert!(check_delta_ring_axioms(&samples, &ps(&PRIMES)).unwrap().passed());
}

#[test]
fn frobenius_on_zeta() {
    let field = CyclotomicField::for_primes(8, &ps(&[3, 5])).unwrap();
    let z = CyclotomicElement::zeta_pow(&field, 1);
    for p in [3u64, 5] {
        assert_eq!(z.frobenius(p).unwrap(), CyclotomicElement::zeta_pow(&field, p));
    }
}

proptest! {
    #[test]
    fn sum_rule(a in local_rational(), b in local_rational(), k in 0usize..3) {
        let p = PRIMES[k];
        let lhs = delta_p_rational(&(&a + &b), p).unwrap();
        let rhs = delta_p_rational(&a, p).unwrap() + delta_p_rational(&b, p).unwrap() + eval_cp(p, &a, &b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_rule(a in local_rational(), b in local_rational(), k in 0usize..3) {
        let p = PRIMES[k];
        let (da, db) = (delta_p_rational(&a, p).unwrap(), delta_p_rational(&b, p).unwrap());
        let lhs = delta_p_rational(&(&a * &b), p).unwrap();
        let pw = |x: &Rational| num_traits::pow(x.clone(), p as usize);
        let rhs = pw(&a) * &db + pw(&b) * &da + int(p as i64) * da * db;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutation(a in local_rational(), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let (p, q) = (PRIMES[i], PRIMES[j]);
        let dp = delta_p_rational(&a, p).unwrap();
        let dq = delta_p_rational(&a, q).unwrap();
        let lhs = delta_p_rational(&dq, p).unwrap() - delta_p_rational(&dp, q).unwrap();
        prop_assert_eq!(lhs, eval_commutator(p, q, &a, &dp, &dq).unwrap());
    }

    #[test]
    fn additivity_defect_matches_binomials(a in -30i64..30, b in -30i64..30, k in 0usize..3) {
        let p = PRIMES[k] as u32;
        let (a, b) = (a as i128, b as i128);
        let expected = (a.pow(p) + b.pow(p) - (a + b).pow(p)) / p as i128;
        let got = eval_cp(p as u64, &int(a as i64), &int(b as i64));
        prop_assert_eq!(got, Rational::from_integer(BigInt::from(expected)));
    }

    #[test]
    fn cyclotomic_frobenius_is_multiplicative(
        a in proptest::collection::vec(-20i64..20, 2),
        b in proptest::collection::vec(-20i64..20, 2),
        k in 0usize..3,
    ) {
        let field = CyclotomicField::for_primes(4, &ps(&PRIMES)).unwrap();
        let x = CyclotomicElement::new(&field, a.iter().map(|&v| int(v)).collect());
        let y = CyclotomicElement::new(&field, b.iter().map(|&v| int(v)).collect());
        let p = PRIMES[k];
        let lhs = (x.clone() * y.clone()).frobenius(p).unwrap();
        prop_assert_eq!(lhs, x.frobenius(p).unwrap() * y.frobenius(p).unwrap());
    }
}
