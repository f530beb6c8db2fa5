use deltap::elliptic::WeierstrassCurve;
use deltap::fgl::{elliptic_group, elliptic_logarithm, gm_group, gm_logarithm};
use deltap::scalar::{int, rat};
use deltap::{Rational, Series};
use proptest::prelude::*;

fn var(nvars: usize, k: usize, order: u32) -> Series {
    Series::var(nvars, k, order)
}

/// w(z) = z³ + c1·z·w + c2·z²·w + c3·w² + c4·z·w² + c6·w³ by fixed-point
/// iteration, w = −1/y and z = −x/y.
fn w_of_z(e: &WeierstrassCurve, order: u32) -> Series {
    let [c1, c2, c3, c4, c6] = e.coeffs();
    let z = var(1, 0, order);
    let mut w = Series::zero(1, order);
    for _ in 0..order {
        let w2 = &w * &w;
        let next = &(&(&(&z.pow(3) + &(&z * &w).scale(c1)) + &(&z.pow(2) * &w).scale(c2)) + &w2.scale(c3))
            + &(&(&z * &w2).scale(c4) + &(&w2 * &w).scale(c6));
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// The group law in z by chord and tangent: the third intersection of the
/// line through (z1, w1), (z2, w2), followed by negation.
fn chord_tangent_law(e: &WeierstrassCurve, order: u32) -> Series {
    let [c1, c2, c3, c4, c6] = e.coeffs();
    let w = w_of_z(e, order);
    let z1 = var(2, 0, order);
    let z2 = var(2, 1, order);
    // λ = Σ A_n (z2^n − z1^n)/(z2 − z1)
    let mut lambda = Series::zero(2, order);
    for (exp, a) in w.terms() {
        let n = exp[0];
        let mut h = Series::zero(2, order);
        for i in 0..n {
            h = &h + &(&z1.pow(i) * &z2.pow(n - 1 - i));
        }
        lambda = &lambda + &h.scale(a);
    }
    let w1 = w.compose(std::slice::from_ref(&z1)).unwrap();
    let nu = &w1 - &(&lambda * &z1);
    let l2 = &lambda * &lambda;
    let two = int(2);
    let three = int(3);
    // w = λz + ν cuts the curve in a cubic whose z² and z³ coefficients
    // give z1 + z2 + z3
    let num = &(&(&(&lambda.scale(c1) + &l2.scale(c3)) + &nu.scale(c2)) + &(&lambda * &nu).scale(&(&two * c4)))
        + &(&l2 * &nu).scale(&(&three * c6));
    let den = &(&(&Series::one(2, order) + &lambda.scale(c2)) + &l2.scale(c4)) + &(&l2 * &lambda).scale(c6);
    let z3 = &(&(-&z1) - &z2) - &(&num * &den.reciprocal().unwrap());
    let w3 = w.compose(std::slice::from_ref(&z3)).unwrap();
    assert!(w3.agrees_through(&(&(&lambda * &z3) + &nu), order), "third point is off the line");
    // −(z, w) has parameter −z/(1 − c1·z − c3·w)
    let inv_den = &(&Series::one(2, order) - &z3.scale(c1)) - &w3.scale(c3);
    -&(&z3 * &inv_den.reciprocal().unwrap())
}

/// The same law in T = x/(2y) = −z/2.
fn law_in_t(e: &WeierstrassCurve, order: u32) -> Series {
    let fz = chord_tangent_law(e, order);
    let m2 = int(-2);
    let args = [var(2, 0, order).scale(&m2), var(2, 1, order).scale(&m2)];
    fz.compose(&args).unwrap().scale(&rat(-1, 2))
}

fn associative(law: &Series, order: u32) -> bool {
    let g12 = law.embed(3, &[0, 1]);
    let g23 = law.embed(3, &[1, 2]);
    let left = law.compose(&[g12, var(3, 2, order)]).unwrap();
    let right = law.compose(&[var(3, 0, order), g23]).unwrap();
    left.agrees_through(&right, order)
}

#[test]
fn logarithm_is_additive_for_the_geometric_law() {
    for label in ["11a", "37a"] {
        let e = WeierstrassCurve::named(label).unwrap();
        let order = 11;
        let law = law_in_t(&e, order);
        let l = elliptic_logarithm::<Rational>(&e, order).unwrap();
        let lhs = l.compose(std::slice::from_ref(&law)).unwrap();
        let rhs = &l.embed(2, &[0]) + &l.embed(2, &[1]);
        assert!(lhs.agrees_through(&rhs, order), "{label}: l_E is not additive through degree 10");
        let fgl = elliptic_group::<Rational>(&e, order).unwrap();
        assert!(fgl.law().agrees_through(&law, order), "{label}: group law differs from chord and tangent");
    }
}

#[test]
fn geometric_law_is_associative() {
    for label in ["11a", "37a"] {
        let e = WeierstrassCurve::named(label).unwrap();
        let order = 9;
        assert!(associative(&law_in_t(&e, order), order), "{label}");
        let fgl = elliptic_group::<Rational>(&e, order).unwrap();
        assert!(fgl.is_associative_through(order).unwrap());
        assert!(fgl.is_commutative_unital_through(order).unwrap());
    }
}

#[test]
fn multiplicative_law_is_exact() {
    let order = 12;
    let fgl = gm_group::<Rational>(order).unwrap();
    let (t1, t2) = (var(2, 0, order), var(2, 1, order));
    let expected = &(&t1 + &t2) + &(&t1 * &t2);
    assert_eq!(fgl.law().truncate(order), expected);
    assert!(fgl.round_trips().unwrap());
}

#[test]
fn float_logarithm_tracks_the_exact_one() {
    let exact = gm_logarithm::<Rational>(20).to_f64();
    let float = gm_logarithm::<f64>(20);
    assert!(exact.agrees_through(&float, 20));
    // log(1 + 1/4) from the series against the float library
    let s: f64 = (1..20).map(|n| float.coeff1(n) * 0.25f64.powi(n as i32)).sum();
    assert!((s - 1.25f64.ln()).abs() < 1e-12);
}

fn unit_series() -> impl Strategy<Value = Series> {
    proptest::collection::vec((-9i64..9, 1i64..5), 2..8).prop_map(|v| {
        let order = v.len() as u32 + 1;
        let mut coeffs = vec![int(0), rat(1 + v[0].0.abs(), v[0].1)];
        coeffs.extend(v[1..].iter().map(|&(n, d)| rat(n, d)));
        Series::univariate(coeffs, order)
    })
}

proptest! {
    #[test]
    fn compositional_inverse_round_trips(f in unit_series()) {
        let g = f.compositional_inverse().unwrap();
        let t = var(1, 0, f.order());
        prop_assert!(f.compose(std::slice::from_ref(&g)).unwrap().agrees_through(&t, f.order()));
        prop_assert!(g.compose(std::slice::from_ref(&f)).unwrap().agrees_through(&t, f.order()));
    }

    #[test]
    fn reciprocal_inverts(f in unit_series()) {
        let u = &Series::one(1, f.order()) + &f;
        prop_assert_eq!(&u * &u.reciprocal().unwrap(), Series::one(1, f.order()));
    }
}
