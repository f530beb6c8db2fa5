//! One-dimensional formal group laws of G_m and of Weierstrass curves, with
//! their logarithms and exponentials.
//!
//! For a curve the expansion is made in the textbook parameter z = −x/y via
//! w = −1/y as a series in z, and then rewritten in the uniformizer
//! T = x/(2y) = −z/2. The invariant differential dx/(2y + c1·x + c3) equals
//! −2·R(−2T)·dT with R(0) = 1, so its leading coefficient in T is −2; the
//! logarithm is normalized to T + O(T²).

use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw<S> {
    law: TruncSeries<S>,
    log: TruncSeries<S>,
    exp: TruncSeries<S>,
}

impl<S: Scalar> FormalGroupLaw<S> {
    /// Build from a logarithm l = T + O(T²): e = l^{-1}, 𝒢 = e(l(T1) + l(T2)).
    pub fn from_logarithm(log: TruncSeries<S>) -> Result<Self> {
        let order = log.order();
        if order < 2 {
            return Err(Error::Truncation(order as usize));
        }
        let exp = log.compositional_inverse()?;
        let l1 = log.embed(2, &[0]);
        let l2 = log.embed(2, &[1]);
        let law = exp.compose(&[&l1 + &l2])?;
        Ok(FormalGroupLaw { law, log, exp })
    }

    pub fn law(&self) -> &TruncSeries<S> {
        &self.law
    }

    pub fn logarithm(&self) -> &TruncSeries<S> {
        &self.log
    }

    pub fn exponential(&self) -> &TruncSeries<S> {
        &self.exp
    }

    pub fn order(&self) -> u32 {
        self.log.order()
    }

    /// 𝒢 as a series in three variables applied to (𝒢(T1,T2), T3) and to
    /// (T1, 𝒢(T2,T3)); both must agree below `depth`.
    pub fn is_associative_through(&self, depth: u32) -> Result<bool> {
        let g = self.law.truncate(depth);
        let g12 = g.embed(3, &[0, 1]);
        let g23 = g.embed(3, &[1, 2]);
        let t1 = TruncSeries::var(3, 0, depth);
        let t3 = TruncSeries::var(3, 2, depth);
        let left = g.compose(&[g12, t3])?;
        let right = g.compose(&[t1, g23])?;
        Ok(left.agrees_through(&right, depth))
    }

    /// 𝒢(T1,T2) = 𝒢(T2,T1), 𝒢(T,0) = T and 𝒢(0,T) = T below `depth`.
    pub fn is_commutative_unital_through(&self, depth: u32) -> Result<bool> {
        let g = self.law.truncate(depth);
        let swapped = g.compose(&[TruncSeries::var(2, 1, depth), TruncSeries::var(2, 0, depth)])?;
        let t = TruncSeries::var(1, 0, depth);
        let zero = TruncSeries::zero(1, depth);
        let left = g.compose(&[t.clone(), zero.clone()])?;
        let right = g.compose(&[zero, t.clone()])?;
        Ok(g.agrees_through(&swapped, depth) && left.agrees_through(&t, depth) && right.agrees_through(&t, depth))
    }

    /// Whether f(𝒢(T1,T2)) = f(T1) + f(T2) below total degree `depth`.
    pub fn is_additive(&self, f: &TruncSeries<S>, depth: u32) -> Result<bool> {
        let depth = depth.min(self.law.order()).min(f.order());
        let g = self.law.truncate(depth);
        let lhs = f.truncate(depth).compose(&[g])?;
        let rhs = &f.embed(2, &[0]) + &f.embed(2, &[1]);
        Ok(lhs.agrees_through(&rhs.truncate(depth), depth))
    }

    /// e(l(T)) = T and l(e(T)) = T to the full order.
    pub fn round_trips(&self) -> Result<bool> {
        let t = TruncSeries::var(1, 0, self.order());
        let a = self.exp.compose(std::slice::from_ref(&self.log))?;
        let b = self.log.compose(std::slice::from_ref(&self.exp))?;
        Ok(a.agrees_through(&t, self.order()) && b.agrees_through(&t, self.order()))
    }
}

/// Σ_{n≥1} (−1)^{n−1} T^n / n below degree `order`.
pub fn gm_logarithm<S: Scalar>(order: u32) -> TruncSeries<S> {
    let coeffs = (0..order as i64)
        .map(|n| match n {
            0 => S::zero(),
            _ => {
                let c = S::from_i64(n).inv().unwrap();
                if n % 2 == 1 {
                    c
                } else {
                    -c
                }
            }
        })
        .collect();
    TruncSeries::univariate(coeffs, order)
}

/// The multiplicative formal group T1 + T2 + T1·T2.
pub fn gm_group<S: Scalar>(order: u32) -> Result<FormalGroupLaw<S>> {
    FormalGroupLaw::from_logarithm(gm_logarithm(order))
}

/// W = w/z³ where w = −1/y as a series in z = −x/y, below degree `order`:
/// W = 1 + c1·z·W + c2·z²·W + c3·z³·W² + c4·z⁴·W² + c6·z⁶·W³.
fn weierstrass_w<S: Scalar>(curve: &WeierstrassCurve, order: u32) -> TruncSeries<S> {
    let c = curve.coeffs().map(|c| S::from_rational(c));
    let z = TruncSeries::<S>::var(1, 0, order);
    let one = TruncSeries::<S>::one(1, order);
    let z2 = z.pow(2);
    let z3 = z.pow(3);
    let mut w = one.clone();
    for _ in 0..order {
        let w2 = &w * &w;
        let w3 = &w2 * &w;
        let next = &(&(&(&one + &(&z * &w).scale(&c[0])) + &(&z2 * &w).scale(&c[1])) + &(&z3 * &w2).scale(&c[2]))
            + &(&(&(&z3 * &z) * &w2).scale(&c[3]) + &(&(&z3 * &z3) * &w3).scale(&c[4]));
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// R(z) with dx/(2y + c1·x + c3) = R(z)·dz, below degree `order`.
fn differential_in_z<S: Scalar>(curve: &WeierstrassCurve, order: u32) -> Result<TruncSeries<S>> {
    let w = weierstrass_w::<S>(curve, order + 1);
    let z = TruncSeries::<S>::var(1, 0, order + 1);
    let two = S::from_i64(2);
    let num = &w.scale(&-two.clone()) - &(&z * &w.derivative(0));
    let c1 = S::from_rational(&curve.c1);
    let c3 = S::from_rational(&curve.c3);
    let inner = &(&TruncSeries::constant(1, order + 1, -two) + &z.scale(&c1)) + &(&z.pow(3) * &w).scale(&c3);
    let den = &w * &inner;
    Ok((&num.truncate(order) * &den.truncate(order).reciprocal()?).truncate(order))
}

/// Σ b_n T^{n−1} with dx/(2y + c1·x + c3) = Σ b_n T^{n−1} dT in the parameter
/// T = x/(2y); b_1 = −2.
pub fn invariant_differential<S: Scalar>(curve: &WeierstrassCurve, order: u32) -> Result<TruncSeries<S>> {
    let r = differential_in_z::<S>(curve, order)?;
    let minus_two = S::from_i64(-2);
    let z_of_t = TruncSeries::var(1, 0, order).scale(&minus_two);
    Ok(r.compose(&[z_of_t])?.scale(&minus_two))
}

/// l_E(T) = T + O(T²), the logarithm of the curve's formal group in T = x/(2y).
pub fn elliptic_logarithm<S: Scalar>(curve: &WeierstrassCurve, order: u32) -> Result<TruncSeries<S>> {
    if curve.is_singular() {
        return Err(Error::SingularCurve);
    }
    if order < 2 {
        return Err(Error::Truncation(order as usize));
    }
    let omega = invariant_differential::<S>(curve, order - 1)?;
    Ok(omega.integrate().scale(&S::from_i64(-2).inv().unwrap()))
}

pub fn elliptic_group<S: Scalar>(curve: &WeierstrassCurve, order: u32) -> Result<FormalGroupLaw<S>> {
    FormalGroupLaw::from_logarithm(elliptic_logarithm(curve, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn gm_closed_forms() {
        let g = gm_group::<Q>(4).unwrap();
        assert_eq!(g.logarithm(), &TruncSeries::univariate(vec![int(0), int(1), rat(-1, 2), rat(1, 3)], 4));
        assert_eq!(g.exponential(), &TruncSeries::univariate(vec![int(0), int(1), rat(1, 2), rat(1, 6)], 4));
        let expected = TruncSeries::from_terms(2, 4, [(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![1, 1], int(1))]);
        assert_eq!(g.law(), &expected);
        let g12 = gm_group::<Q>(12).unwrap();
        assert_eq!(g12.law(), &TruncSeries::from_terms(2, 12, expected.terms().map(|(e, c)| (e.clone(), c.clone()))));
    }

    #[test]
    fn elliptic_leading_terms() {
        let e = WeierstrassCurve::named("11a").unwrap();
        let omega = invariant_differential::<Q>(&e, 4).unwrap();
        assert_eq!(omega.coeff1(0), int(-2));
        let l = elliptic_logarithm::<Q>(&e, 2).unwrap();
        assert_eq!(l, TruncSeries::var(1, 0, 2));
    }

    #[test]
    fn elliptic_differential_is_integral_up_to_two() {
        // R(z) has integer coefficients, so b_n (−2)^{-n} is integral
        for label in ["11a", "37a"] {
            let e = WeierstrassCurve::named(label).unwrap();
            let r = differential_in_z::<Q>(&e, 20).unwrap();
            assert!(r.terms().all(|(_, c)| c.is_integer()), "{label}");
        }
    }

    #[test]
    fn elliptic_group_axioms() {
        for label in ["11a", "37a"] {
            let e = WeierstrassCurve::named(label).unwrap();
            let g = elliptic_group::<Q>(&e, 9).unwrap();
            assert!(g.round_trips().unwrap());
            assert!(g.is_commutative_unital_through(9).unwrap());
            assert!(g.is_additive(g.logarithm(), 9).unwrap());
        }
    }

    #[test]
    fn weierstrass_solution_satisfies_equation() {
        // w = z³ W satisfies w = z³ + c1 z w + c2 z² w + c3 w² + c4 z w² + c6 w³
        let e = WeierstrassCurve::named("37a").unwrap();
        let n = 15;
        let w = weierstrass_w::<Q>(&e, n);
        let z = TruncSeries::<Q>::var(1, 0, n + 3);
        let ww = &z.pow(3) * &TruncSeries::from_terms(1, n + 3, w.terms().map(|(e, c)| (e.clone(), c.clone())));
        let rhs = &(&z.pow(3) + &(&ww * &ww).scale(&int(1))) - &(&ww * &(&ww * &z));
        assert_eq!(ww.truncate(n + 3), rhs.truncate(n + 3));
    }
}
