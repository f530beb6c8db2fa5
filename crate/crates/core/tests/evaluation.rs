use deltap::arith::big_pow;
use deltap::character::{build_elliptic_character, build_gm_character, Group};
use deltap::cyclotomic::{CyclotomicElement, CyclotomicField};
use deltap::elliptic::{CurvePoint, WeierstrassCurve};
use deltap::evaluation::{
    apply_symbol, continuation_witness, eval_elliptic_character, eval_gm_character, evaluate, torsion_test, AdelePoint,
    GlobalPoint,
};
use deltap::scalar::{int, rat, CommRing};
use deltap::{Error, PrimeSet, Rational, Symbol};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ps(v: &[u64]) -> PrimeSet {
    PrimeSet::new(v.to_vec()).unwrap()
}

fn rational(u: i64) -> GlobalPoint {
    GlobalPoint::Gm(CyclotomicElement::from_rational(&CyclotomicField::new(1), int(u)))
}

fn zeta_power(m: u64, k: u64) -> GlobalPoint {
    GlobalPoint::Gm(CyclotomicElement::zeta_pow(&CyclotomicField::new(m), k))
}

/// A rational with p-adic valuation ≥ 0 reduced mod p^n.
fn residue(q: &Rational, p: u64, n: u32) -> BigInt {
    let modulus = big_pow(p, n);
    let inv = q.denom().modinv(&modulus).expect("denominator prime to p");
    (q.numer() * inv).mod_floor(&modulus)
}

/// (1/p)·∏_{l ≠ p}(1 − 1/l)·log(u^{1−p}) as an exact rational partial sum
/// of log(1 + x), accurate mod p^n.
fn gm_value_oracle(u: i64, primes: &[u64], p: u64, n: u32) -> BigInt {
    let x = Rational::one() / num_traits::pow(int(u), p as usize - 1) - Rational::one();
    let mut sum = Rational::zero();
    let mut xn = Rational::one();
    for k in 1..=(3 * (n as i64 + 6)) {
        xn *= &x;
        let term = &xn / int(k);
        sum += if k % 2 == 1 { term } else { -term };
    }
    let cross: Rational = primes.iter().filter(|&&l| l != p).map(|&l| Rational::one() - rat(1, l as i64)).product();
    residue(&(sum * cross / int(p as i64)), p, n)
}

#[test]
fn closed_form_at_rational_points() {
    let primes = [3u64, 5];
    let c = build_gm_character(&ps(&primes), 8).unwrap();
    for u in [2i64, 7, -11] {
        let r = evaluate(&c, &rational(u), 15).unwrap();
        for comp in &r.components {
            assert_eq!(comp.value.coeffs()[0], gm_value_oracle(u, &primes, comp.prime, 15), "u = {u}, p = {}", comp.prime);
        }
    }
}

#[test]
fn two_is_not_in_the_kernel() {
    let c = build_gm_character(&ps(&[3, 5]), 8).unwrap();
    let r = evaluate(&c, &rational(2), 15).unwrap();
    let v3 = r.component(3).unwrap();
    assert_eq!(v3.precision, 15);
    assert!(!v3.is_zero());
}

#[test]
fn roots_of_unity_vanish_to_twenty_digits() {
    let c = build_gm_character(&ps(&[3, 5]), 8).unwrap();
    for m in [4u64, 7, 8] {
        let r = evaluate(&c, &zeta_power(m, 1), 20).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!(r.is_zero(), "zeta_{m}");
    }
}

#[test]
fn non_units_are_rejected() {
    let c = build_gm_character(&ps(&[3, 5]), 8).unwrap();
    assert!(matches!(evaluate(&c, &rational(6), 10), Err(Error::NotUnit { prime: 3, .. })));
}

#[test]
fn elliptic_kernel() {
    let f1 = CyclotomicField::new(1);
    let origin = CurvePoint::affine(int(0), int(0));
    let e11 = WeierstrassCurve::named("11a").unwrap();
    assert!(e11.scalar_mul(&BigInt::from(5), &origin).unwrap().is_infinity());
    let c = build_elliptic_character(&e11, &ps(&[3, 5]), 4).unwrap();
    let r = eval_elliptic_character(&c, &origin.to_cyclotomic(&f1), 12).unwrap();
    assert!(r.is_zero());
    assert!(torsion_test(&GlobalPoint::Elliptic(origin.to_cyclotomic(&f1)), &Group::Elliptic(e11), 16).unwrap());

    let e37 = WeierstrassCurve::named("37a").unwrap();
    let c37 = build_elliptic_character(&e37, &ps(&[5, 7]), 4).unwrap();
    let r = eval_elliptic_character(&c37, &origin.to_cyclotomic(&f1), 12).unwrap();
    assert!(!r.component(5).unwrap().is_zero());
    assert!(!torsion_test(&GlobalPoint::Elliptic(origin.to_cyclotomic(&f1)), &Group::Elliptic(e37), 16).unwrap());
}

#[test]
fn elliptic_values_are_additive() {
    let f1 = CyclotomicField::new(1);
    let e = WeierstrassCurve::named("37a").unwrap();
    let c = build_elliptic_character(&e, &ps(&[5, 7]), 4).unwrap();
    let g = CurvePoint::affine(int(0), int(0));
    let v1 = eval_elliptic_character(&c, &g.to_cyclotomic(&f1), 10).unwrap();
    for k in [2i64, 3, -1] {
        let kg = e.scalar_mul(&BigInt::from(k), &g).unwrap();
        let vk = eval_elliptic_character(&c, &kg.to_cyclotomic(&f1), 10).unwrap();
        for (a, b) in v1.components.iter().zip(&vk.components) {
            assert_eq!(a.scale, b.scale);
            assert_eq!(a.value.mul_int(&BigInt::from(k)), b.value, "{k}·Q at {}", a.prime);
        }
    }
}

#[test]
fn continuation() {
    let primes = ps(&[3, 5]);
    let c = build_gm_character(&primes, 8).unwrap();
    let bound = BigInt::from(1_000_000);
    assert!(continuation_witness(&c, &rational(2), 15, &bound).unwrap().is_none());
    let aug0 = c.times(&Symbol::from_ints(&[(1, 2), (3, -1), (5, -1)])).unwrap();
    let w = continuation_witness(&aug0, &rational(2), 15, &bound).unwrap().unwrap();
    assert!(w.is_zero());
    for m in [4u64, 8] {
        let w = continuation_witness(&c, &zeta_power(m, 1), 15, &bound).unwrap().unwrap();
        assert!(w.is_zero());
    }
    let e11 = WeierstrassCurve::named("11a").unwrap();
    let ce = build_elliptic_character(&e11, &primes, 4).unwrap();
    let origin = CurvePoint::affine(int(0), int(0)).to_cyclotomic(&CyclotomicField::new(1));
    let w = continuation_witness(&ce, &GlobalPoint::Elliptic(origin), 12, &bound).unwrap().unwrap();
    assert!(w.is_zero());
}

fn unit_pair() -> impl Strategy<Value = (i64, i64)> {
    (-30i64..30, -30i64..30).prop_filter("unit at 3 and 5", |(a, b)| {
        let norm = a * a + b * b;
        norm % 3 != 0 && norm % 5 != 0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn values_are_additive(u in unit_pair(), v in unit_pair(), n in 4u32..14) {
        let primes = ps(&[3, 5]);
        let field = CyclotomicField::for_primes(4, &primes).unwrap();
        let c = build_gm_character(&primes, 8).unwrap();
        let x = CyclotomicElement::new(&field, vec![int(u.0), int(u.1)]);
        let y = CyclotomicElement::new(&field, vec![int(v.0), int(v.1)]);
        let working = 2 * n + 8;
        let px = AdelePoint::from_global(&x, &primes, working).unwrap();
        let py = AdelePoint::from_global(&y, &primes, working).unwrap();
        let pxy = px.mul(&py).unwrap();
        prop_assert_eq!(&pxy, &AdelePoint::from_global(&(x.clone() * y.clone()), &primes, working).unwrap());
        let (a, b) = (eval_gm_character(&c, &px, n).unwrap(), eval_gm_character(&c, &py, n).unwrap());
        let ab = eval_gm_character(&c, &pxy, n).unwrap();
        for ((s, t), st) in a.components.iter().zip(&b.components).zip(&ab.components) {
            prop_assert_eq!(&(s.value.clone() + t.value.clone()), &st.value);
        }
    }

    #[test]
    fn symbols_act_through_galois(u in unit_pair(), coeffs in proptest::collection::vec(-4i64..5, 3)) {
        let primes = ps(&[3, 5]);
        let field = CyclotomicField::for_primes(4, &primes).unwrap();
        let c = build_gm_character(&primes, 8).unwrap();
        let rho = Symbol::from_ints(&[(1, coeffs[0]), (3, coeffs[1]), (5, coeffs[2])]);
        prop_assume!(!rho.is_zero());
        let point = GlobalPoint::Gm(CyclotomicElement::new(&field, vec![int(u.0), int(u.1)]));
        let base = evaluate(&c, &point, 10).unwrap();
        let scaled = evaluate(&c.times(&rho).unwrap(), &point, 10).unwrap();
        for (b, s) in base.components.iter().zip(&scaled.components) {
            prop_assert_eq!(&apply_symbol(&rho, &b.value).unwrap(), &s.value);
        }
    }

    #[test]
    fn kernel_is_sound(m in prop::sample::select(vec![4u64, 7, 8]), k in 0u64..8, n in 2u32..=20) {
        let c = build_gm_character(&ps(&[3, 5]), 8).unwrap();
        let point = zeta_power(m, k % m);
        prop_assert!(torsion_test(&point, &Group::Gm, 16).unwrap());
        prop_assert!(evaluate(&c, &point, n).unwrap().is_zero());
    }

    #[test]
    fn precision_is_consistent(u in unit_pair(), n in 4u32..12) {
        // a value at precision n + 3 reduces to the value at precision n
        let primes = ps(&[3, 5]);
        let field = CyclotomicField::for_primes(4, &primes).unwrap();
        let c = build_gm_character(&primes, 8).unwrap();
        let point = GlobalPoint::Gm(CyclotomicElement::new(&field, vec![int(u.0), int(u.1)]));
        let hi = evaluate(&c, &point, n + 3).unwrap();
        let lo = evaluate(&c, &point, n).unwrap();
        for (h, l) in hi.components.iter().zip(&lo.components) {
            prop_assert_eq!(&h.value.with_precision(n), &l.value);
        }
    }
}
