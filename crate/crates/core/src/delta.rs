//! The universal p-derivation gadgets.
//!
//! * `C_p(X,Y) = (X^p + Y^p - (X+Y)^p)/p`, the additivity defect of δ_p.
//! * `C_{p,q}(X0,X1,X2)`, the commutator defect of δ_p and δ_q.
//! * [`FrobeniusRing`]: any ring carrying commuting Frobenius lifts, with the
//!   associated Fermat quotients and an exact identity checker.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{is_p_integral, PrimeSet};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, Poly};
use crate::scalar::CommRing;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C_p` in variables X = 0, Y = 1.
pub fn cp_polynomial(p: u64) -> IntPolynomial {
    let pb = BigInt::from(p);
    let mut out = IntPolynomial::zero();
    for i in 1..p {
        let b = binomial(p, i);
        debug_assert!((&b % &pb).is_zero());
        out = out + Poly::monomial(vec![(0, i as u32), (1, (p - i) as u32)], -(b / &pb));
    }
    out
}

/// δ_p of an integer: (a - a^p)/p.
pub fn delta_p_int(a: &BigInt, p: u64) -> BigInt {
    let ap = num_traits::pow(a.clone(), p as usize);
    let (q, r) = (a - ap).div_rem(&BigInt::from(p));
    debug_assert!(r.is_zero());
    q
}

/// δ_p of a p-integral rational. The Frobenius lift on the rationals is
/// the identity, so this is (a - a^p)/p.
pub fn delta_p_rational(a: &BigRational, p: u64) -> Result<BigRational> {
    if !is_p_integral(a, p) {
        return Err(Error::NotIntegral { value: a.to_string(), prime: p });
    }
    let ap = num_traits::pow(a.clone(), p as usize);
    Ok((a - ap) / BigRational::from_integer(BigInt::from(p)))
}

fn divide_exact(poly: &IntPolynomial, d: &BigInt) -> Result<IntPolynomial> {
    poly.try_div_coeffs(|c| {
        let (q, r) = c.div_rem(d);
        r.is_zero().then_some(q)
    })
    .ok_or_else(|| Error::Integrity(format!("commutator polynomial coefficient not divisible by {d}")))
}

fn build_commutator(p1: u64, p2: u64) -> Result<IntPolynomial> {
    let b1 = BigInt::from(p1);
    let b2 = BigInt::from(p2);
    let x0 = IntPolynomial::var(0);
    let x1 = IntPolynomial::var(1);
    let x2 = IntPolynomial::var(2);
    let first = cp_polynomial(p2).substitute(|v| if *v == 0 { x0.pow(p1 as u32) } else { x1.scale(&b1) });
    let second = cp_polynomial(p1).substitute(|v| if *v == 0 { x0.pow(p2 as u32) } else { x2.scale(&b2) });
    let first = divide_exact(&first, &b1)?;
    let second = divide_exact(&second, &b2)?;
    let c12 = delta_p_int(&b2, p1);
    let c21 = delta_p_int(&b1, p2);
    let (k12, r12) = c12.div_rem(&b2);
    let (k21, r21) = c21.div_rem(&b1);
    if !r12.is_zero() || !r21.is_zero() {
        return Err(Error::Integrity("Fermat quotient of a prime not divisible by that prime".into()));
    }
    Ok(first - second - x2.pow(p1 as u32).scale(&k12) + x1.pow(p2 as u32).scale(&k21))
}

type CommutatorCache = RwLock<HashMap<(u64, u64), Arc<IntPolynomial>>>;

fn commutator_cache() -> &'static CommutatorCache {
    static CACHE: OnceLock<CommutatorCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `C_{p1,p2}` in variables X0 = 0, X1 = 1, X2 = 2, memoized per pair.
pub fn commutator_polynomial(p1: u64, p2: u64) -> Result<Arc<IntPolynomial>> {
    if p1 == p2 {
        return Err(Error::Invalid("commutator polynomial needs distinct primes".into()));
    }
    if let Some(c) = commutator_cache().read().expect("commutator cache poisoned").get(&(p1, p2)) {
        return Ok(c.clone());
    }
    let built = Arc::new(build_commutator(p1, p2)?);
    let mut w = commutator_cache().write().expect("commutator cache poisoned");
    Ok(w.entry((p1, p2)).or_insert(built).clone())
}

/// Ring with Frobenius lifts φ_p for the primes of interest, such that
/// φ_p(a) - a^p is divisible by p.
pub trait FrobeniusRing: CommRing {
    fn frobenius(&self, p: u64) -> Result<Self>;
    /// Exact division by p, `None` if not divisible.
    fn div_by_prime(&self, p: u64) -> Option<Self>;

    /// The associated p-derivation (φ_p(a) - a^p)/p.
    fn fermat_quotient(&self, p: u64) -> Result<Self> {
        let num = self.frobenius(p)? - self.pow_u64(p);
        num.div_by_prime(p)
            .ok_or_else(|| Error::Integrity(format!("φ_{p}(a) - a^{p} is not divisible by {p} for a = {self:?}")))
    }
}

impl FrobeniusRing for BigRational {
    fn frobenius(&self, p: u64) -> Result<Self> {
        if !is_p_integral(self, p) {
            return Err(Error::NotIntegral { value: self.to_string(), prime: p });
        }
        Ok(self.clone())
    }
    fn div_by_prime(&self, p: u64) -> Option<Self> {
        Some(self / BigRational::from_integer(BigInt::from(p)))
    }
}

/// Evaluate C_p(a, b) in a ring.
pub fn eval_cp<R: CommRing>(p: u64, a: &R, b: &R) -> R {
    let one = a.one_like();
    cp_polynomial(p).eval_in(|v| if *v == 0 { a.clone() } else { b.clone() }, &one)
}

/// Evaluate C_{p,q}(a, δ_p a, δ_q a) in a ring.
pub fn eval_commutator<R: CommRing>(p: u64, q: u64, a: &R, dp: &R, dq: &R) -> Result<R> {
    let c = commutator_polynomial(p, q)?;
    let one = a.one_like();
    Ok(c.eval_in(
        |v| match v {
            0 => a.clone(),
            1 => dp.clone(),
            _ => dq.clone(),
        },
        &one,
    ))
}

/// Outcome of one identity over all samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub cases: usize,
    pub failures: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases, {} failures)", self.identity, self.cases, self.failures)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<IdentityCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

/// Verify the sum and product rules of every δ_p and the commutation
/// identity δ_p δ_q a - δ_q δ_p a = C_{p,q}(a, δ_p a, δ_q a) for every pair,
/// exactly. Sum and product rules run over consecutive sample pairs
/// (cyclically) and each sample paired with itself.
pub fn check_delta_ring_axioms<R: FrobeniusRing>(samples: &[R], primes: &PrimeSet) -> Result<AxiomReport> {
    let mut checks = Vec::new();
    let mut pairs: Vec<(&R, &R)> = samples.iter().map(|a| (a, a)).collect();
    for i in 0..samples.len() {
        pairs.push((&samples[i], &samples[(i + 1) % samples.len()]));
    }
    for &p in primes.primes() {
        let pb = BigInt::from(p);
        let mut sum = IdentityCheck { identity: format!("δ_{p}(a+b) = δ_{p}a + δ_{p}b + C_{p}(a,b)"), cases: 0, failures: 0 };
        let mut prod = IdentityCheck {
            identity: format!("δ_{p}(ab) = a^{p}δ_{p}b + b^{p}δ_{p}a + {p}δ_{p}aδ_{p}b"),
            cases: 0,
            failures: 0,
        };
        for (a, b) in &pairs {
            let da = a.fermat_quotient(p)?;
            let db = b.fermat_quotient(p)?;
            let lhs = ((*a).clone() + (*b).clone()).fermat_quotient(p)?;
            let rhs = da.clone() + db.clone() + eval_cp(p, *a, *b);
            sum.cases += 1;
            sum.failures += usize::from(lhs != rhs);
            let lhs = ((*a).clone() * (*b).clone()).fermat_quotient(p)?;
            let rhs = a.pow_u64(p) * db.clone() + b.pow_u64(p) * da.clone() + (da * db).mul_int(&pb);
            prod.cases += 1;
            prod.failures += usize::from(lhs != rhs);
        }
        checks.push(sum);
        checks.push(prod);
    }
    for (i, &p) in primes.primes().iter().enumerate() {
        for &q in &primes.primes()[i + 1..] {
            let mut comm = IdentityCheck {
                identity: format!("δ_{p}δ_{q}a - δ_{q}δ_{p}a = C_{{{p},{q}}}(a, δ_{p}a, δ_{q}a)"),
                cases: 0,
                failures: 0,
            };
            for a in samples {
                let dp = a.fermat_quotient(p)?;
                let dq = a.fermat_quotient(q)?;
                let lhs = dq.fermat_quotient(p)? - dp.fermat_quotient(q)?;
                let rhs = eval_commutator(p, q, a, &dp, &dq)?;
                comm.cases += 1;
                comm.failures += usize::from(lhs != rhs);
            }
            checks.push(comm);
        }
    }
    Ok(AxiomReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn ip(terms: &[(&[(usize, u32)], i64)]) -> IntPolynomial {
        IntPolynomial::from_terms(terms.iter().map(|(m, c)| (m.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn cp_small_primes() {
        assert_eq!(cp_polynomial(2), ip(&[(&[(0, 1), (1, 1)], -1)]));
        assert_eq!(cp_polynomial(3), ip(&[(&[(0, 2), (1, 1)], -1), (&[(0, 1), (1, 2)], -1)]));
    }

    #[test]
    fn cp5_matches_binomial_expansion() {
        // (X^5 + Y^5 - (X+Y)^5) / 5 expanded from Pascal's row 1 5 10 10 5 1
        let row = [1i64, 5, 10, 10, 5, 1];
        let expected = IntPolynomial::from_terms(
            (1..5).map(|i| (vec![(0usize, i as u32), (1usize, 5 - i as u32)], BigInt::from(-row[i] / 5))),
        );
        assert_eq!(cp_polynomial(5), expected);
        assert_eq!(expected, ip(&[(&[(0, 4), (1, 1)], -1), (&[(0, 3), (1, 2)], -2), (&[(0, 2), (1, 3)], -2), (&[(0, 1), (1, 4)], -1)]));
    }

    #[test]
    fn cp_vanishes_on_axes() {
        for p in [3u64, 5, 7, 11, 13, 97] {
            let c = cp_polynomial(p);
            for (m, _) in c.terms() {
                assert_eq!(m.len(), 2, "monomial missing a variable for p = {p}");
            }
        }
    }

    #[test]
    fn commutator_at_two() {
        let c = commutator_polynomial(3, 5).unwrap();
        let v = c.eval_in(|i| BigInt::from([2, -2, -6][*i]), &BigInt::one());
        assert_eq!(v, BigInt::from(64));
        // oracle: iterated Fermat quotients on integers
        let a = BigInt::from(2);
        let d35 = delta_p_int(&delta_p_int(&a, 5), 3);
        let d53 = delta_p_int(&delta_p_int(&a, 3), 5);
        assert_eq!(d35 - d53, BigInt::from(64));
        let zero = c.eval_in(|_| BigInt::zero(), &BigInt::one());
        assert!(zero.is_zero());
    }

    #[test]
    fn commutator_antisymmetry_and_degree() {
        let c35 = commutator_polynomial(3, 5).unwrap();
        let c53 = commutator_polynomial(5, 3).unwrap();
        let swapped = c53.rename(|v| match v {
            1 => 2,
            2 => 1,
            o => *o,
        });
        assert_eq!(swapped, -(*c35).clone());
        for (p, q) in [(3u64, 5u64), (3, 7), (5, 7), (7, 3)] {
            let c = commutator_polynomial(p, q).unwrap();
            assert!(c.min_degree().unwrap() >= p.min(q) as u32);
        }
    }

    #[test]
    fn rational_fermat_quotients() {
        assert_eq!(delta_p_rational(&int(3), 5).unwrap(), int(-48));
        assert_eq!(delta_p_rational(&int(1), 7).unwrap(), int(0));
        assert_eq!(delta_p_rational(&int(-6), 3).unwrap(), int(70));
        assert_eq!(delta_p_rational(&rat(1, 2), 3).unwrap(), rat(1, 8));
        assert!(delta_p_rational(&rat(1, 3), 3).is_err());
    }

    #[test]
    fn frobenius_lift_is_identity_on_rationals() {
        for a in [int(2), rat(-5, 7), int(0), rat(9, 4)] {
            let d = delta_p_rational(&a, 3).unwrap();
            assert_eq!(a.pow_u64(3) + d * int(3), a);
        }
    }

    #[test]
    fn axioms_on_integers() {
        let primes = PrimeSet::new(vec![3, 5, 7]).unwrap();
        let samples: Vec<BigRational> = (-20..=20).map(int).collect();
        let report = check_delta_ring_axioms(&samples, &primes).unwrap();
        assert!(report.passed(), "{:?}", report);
        assert_eq!(report.checks.len(), 3 * 2 + 3);
    }
}
