//! The commutative ring of symbols Σ c_n φ_n, indexed by positive integers
//! with φ_m φ_n = φ_{mn}. For a prime set P the P-smooth indices n = P^i give
//! the polynomial ring in φ_{p_1}, …, φ_{p_d}.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_p_local, PrimeSet};
use crate::error::{Error, Result};
use crate::scalar::{split_coefficient, split_signed_terms, Scalar};

#[derive(Clone, PartialEq, Default)]
pub struct SymbolPoly<S> {
    coeffs: BTreeMap<u64, S>,
}

/// A monic Euler-factor divisor in one φ_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EulerDivisor {
    /// φ_p − p.
    Gm { p: u64 },
    /// φ_p² − a φ_p + p.
    Ell { p: u64, a: i64 },
}

impl EulerDivisor {
    pub fn prime(&self) -> u64 {
        match *self {
            EulerDivisor::Gm { p } | EulerDivisor::Ell { p, .. } => p,
        }
    }

    /// Coefficients d_0, …, d_{k−1} of the monic X^k + Σ d_i X^i.
    fn lower_coeffs<S: Scalar>(&self) -> Vec<S> {
        match *self {
            EulerDivisor::Gm { p } => vec![S::from_i64(-(p as i64))],
            EulerDivisor::Ell { p, a } => vec![S::from_i64(p as i64), S::from_i64(-a)],
        }
    }
}

impl<S: Scalar> SymbolPoly<S> {
    pub fn zero() -> Self {
        SymbolPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, S::one())
    }

    /// c·φ_n.
    pub fn monomial(n: u64, c: S) -> Self {
        assert!(n >= 1, "symbol indices are positive");
        let mut s = Self::zero();
        s.add_term(n, c);
        s
    }

    pub fn phi(n: u64) -> Self {
        Self::monomial(n, S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(1, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, S)>) -> Self {
        let mut s = Self::zero();
        for (n, c) in terms {
            assert!(n >= 1, "symbol indices are positive");
            s.add_term(n, c);
        }
        s
    }

    fn add_term(&mut self, n: u64, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(n, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, n: u64) -> S {
        self.coeffs.get(&n).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<u64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn max_index(&self) -> u64 {
        self.coeffs.keys().copied().max().unwrap_or(0)
    }

    /// Augmentation Σ c_n (the value at φ_n = 1).
    pub fn augmentation(&self) -> S {
        self.coeffs.values().fold(S::zero(), |acc, c| acc + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&n, a)| (n, a.clone() * c.clone())))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymbolPoly<T> {
        SymbolPoly::from_terms(self.coeffs.iter().map(|(&n, c)| (n, f(c))))
    }

    /// Whether every index is a product of primes from the set.
    pub fn is_p_smooth(&self, primes: &PrimeSet) -> bool {
        self.coeffs.keys().all(|&n| primes.is_smooth(n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Division by a monic polynomial in φ_p: quotient and remainder with
    /// remainder of φ_p-degree below the divisor's.
    pub fn divide_by_euler_factor(&self, divisor: &EulerDivisor) -> (Self, Self) {
        let p = divisor.prime();
        let lower: Vec<S> = divisor.lower_coeffs();
        let k = lower.len();
        // group by the prime-to-p part: n = p^a · rest
        let mut groups: BTreeMap<u64, Vec<S>> = BTreeMap::new();
        for (&n, c) in &self.coeffs {
            let (mut rest, mut a) = (n, 0usize);
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            let g = groups.entry(rest).or_default();
            if g.len() <= a {
                g.resize(a + 1, S::zero());
            }
            g[a] = c.clone();
        }
        let mut quot = Self::zero();
        let mut rem = Self::zero();
        for (rest, mut c) in groups {
            if c.len() > k {
                for top in (k..c.len()).rev() {
                    let q = c[top].clone();
                    if q.is_zero() {
                        continue;
                    }
                    quot.add_term(rest * p.pow((top - k) as u32), q.clone());
                    c[top] = S::zero();
                    for (i, d) in lower.iter().enumerate() {
                        let idx = top - k + i;
                        c[idx] = c[idx].clone() - q.clone() * d.clone();
                    }
                }
            }
            for (a, v) in c.into_iter().enumerate().take(k) {
                rem.add_term(rest * p.pow(a as u32), v);
            }
        }
        (quot, rem)
    }
}

impl SymbolPoly<BigRational> {
    pub fn is_p_local(&self, primes: &PrimeSet) -> bool {
        self.coeffs.values().all(|c| is_p_local(c, primes))
    }

    pub fn from_ints(terms: &[(u64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(n, c)| (n, BigRational::from_integer(BigInt::from(c)))))
    }
}

/// 1 − φ_p/p.
pub fn gm_euler_factor<S: Scalar>(p: u64) -> SymbolPoly<S> {
    let inv_p = S::from_i64(p as i64).inv().unwrap();
    SymbolPoly::from_terms([(1, S::one()), (p, -inv_p)])
}

/// 1 − a φ_p/p + φ_{p²}/p.
pub fn ell_euler_factor<S: Scalar>(p: u64, a: i64) -> SymbolPoly<S> {
    let inv_p = S::from_i64(p as i64).inv().unwrap();
    SymbolPoly::from_terms([(1, S::one()), (p, -(S::from_i64(a) * inv_p.clone())), (p * p, inv_p)])
}

impl<S: Scalar> Add for &SymbolPoly<S> {
    type Output = SymbolPoly<S>;
    fn add(self, o: Self) -> SymbolPoly<S> {
        let mut out = self.clone();
        for (&n, c) in &o.coeffs {
            out.add_term(n, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &SymbolPoly<S> {
    type Output = SymbolPoly<S>;
    fn sub(self, o: Self) -> SymbolPoly<S> {
        let mut out = self.clone();
        for (&n, c) in &o.coeffs {
            out.add_term(n, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &SymbolPoly<S> {
    type Output = SymbolPoly<S>;
    fn mul(self, o: Self) -> SymbolPoly<S> {
        let mut out = SymbolPoly::zero();
        for (&m, a) in &self.coeffs {
            for (&n, b) in &o.coeffs {
                out.add_term(m.checked_mul(n).expect("symbol index overflow"), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &SymbolPoly<S> {
    type Output = SymbolPoly<S>;
    fn neg(self) -> SymbolPoly<S> {
        self.scale(&-S::one())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for SymbolPoly<S> {
            type Output = SymbolPoly<S>;
            fn $m(self, o: Self) -> SymbolPoly<S> {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<S: Scalar> Neg for SymbolPoly<S> {
    type Output = SymbolPoly<S>;
    fn neg(self) -> SymbolPoly<S> {
        -&self
    }
}

impl<S: Scalar> Zero for SymbolPoly<S> {
    fn zero() -> Self {
        SymbolPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for SymbolPoly<S> {
    fn one() -> Self {
        SymbolPoly::one()
    }
}

impl<S: fmt::Display + Zero + One + PartialEq> fmt::Display for SymbolPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&n, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (n, c.is_one()) {
                (1, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "φ_{n}")?,
                _ => write!(f, "({c})φ_{n}")?,
            }
        }
        Ok(())
    }
}

/// Parses sums of terms `c`, `c*phi_n`, `(c)φ_n` or `phi_n` with rational
/// `c`, which covers the `Display` form.
impl FromStr for SymbolPoly<BigRational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid symbol {s:?}"));
        let normalized = s.replace('φ', "phi");
        let terms = split_signed_terms(&normalized).ok_or_else(bad)?;
        if terms.is_empty() {
            return Err(bad());
        }
        let mut out = SymbolPoly::zero();
        for (neg, term) in terms {
            let (c, rest) = split_coefficient(&term).ok_or_else(bad)?;
            let n = match rest {
                "" => 1,
                r => {
                    let idx = r.strip_prefix("phi").ok_or_else(bad)?;
                    let idx = idx.strip_prefix('_').unwrap_or(idx).trim_start_matches('{').trim_end_matches('}');
                    idx.parse::<u64>().ok().filter(|&n| n >= 1).ok_or_else(bad)?
                }
            };
            out = &out + &SymbolPoly::monomial(n, if neg { -c } else { c });
        }
        Ok(out)
    }
}

impl<S: fmt::Debug> fmt::Debug for SymbolPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type Sym = SymbolPoly<BigRational>;

    #[test]
    fn parsing() {
        assert_eq!("1".parse::<Sym>().unwrap(), Sym::one());
        assert_eq!("phi_3 - 3".parse::<Sym>().unwrap(), Sym::from_ints(&[(3, 1), (1, -3)]));
        assert_eq!("1 - 1/3*phi_3".parse::<Sym>().unwrap(), Sym::from_terms([(1, int(1)), (3, rat(-1, 3))]));
        let s = Sym::from_terms([(1, int(-1)), (3, rat(1, 3)), (15, rat(-1, 15)), (9, int(1))]);
        assert_eq!(s.to_string().parse::<Sym>().unwrap(), s);
        assert!("phi_0".parse::<Sym>().is_err());
        assert!("x".parse::<Sym>().is_err());
    }

    #[test]
    fn monoid_multiplication() {
        let a = Sym::from_ints(&[(1, 2), (3, 1)]);
        let b = Sym::from_ints(&[(5, 1), (3, -1)]);
        assert_eq!(&a * &b, Sym::from_ints(&[(5, 2), (3, -2), (15, 1), (9, -1)]));
    }

    #[test]
    fn division_examples() {
        let prod = &gm_euler_factor::<BigRational>(3) * &gm_euler_factor(5);
        let (q, r) = prod.divide_by_euler_factor(&EulerDivisor::Gm { p: 3 });
        assert!(r.is_zero());
        assert_eq!(q, gm_euler_factor::<BigRational>(5).scale(&rat(-1, 3)));
        let (q, r) = Sym::one().divide_by_euler_factor(&EulerDivisor::Gm { p: 3 });
        assert!(q.is_zero());
        assert_eq!(r, Sym::one());
    }

    #[test]
    fn elliptic_division() {
        let prod = &ell_euler_factor::<BigRational>(3, -1) * &ell_euler_factor(5, 1);
        let (q, r) = prod.divide_by_euler_factor(&EulerDivisor::Ell { p: 3, a: -1 });
        assert!(r.is_zero());
        assert_eq!(q, ell_euler_factor::<BigRational>(5, 1).scale(&rat(1, 3)));
        let (_, r) = Sym::phi(3).divide_by_euler_factor(&EulerDivisor::Ell { p: 3, a: -1 });
        assert_eq!(r, Sym::phi(3));
    }

    #[test]
    fn division_reconstructs() {
        let s = Sym::from_terms([(1, rat(1, 2)), (9, int(4)), (45, rat(-3, 7)), (27, int(1)), (5, int(2))]);
        for d in [EulerDivisor::Gm { p: 3 }, EulerDivisor::Ell { p: 3, a: 2 }, EulerDivisor::Ell { p: 5, a: -1 }] {
            let (q, r) = s.divide_by_euler_factor(&d);
            let div = match d {
                EulerDivisor::Gm { p } => Sym::from_ints(&[(p, 1), (1, -(p as i64))]),
                EulerDivisor::Ell { p, a } => Sym::from_ints(&[(p * p, 1), (p, -a), (1, p as i64)]),
            };
            assert_eq!(&(&q * &div) + &r, s, "{d:?}");
        }
    }

    #[test]
    fn augmentation_is_sum() {
        assert_eq!(Sym::from_ints(&[(1, 1), (3, -1)]).augmentation(), int(0));
        assert_eq!(gm_euler_factor::<BigRational>(3).augmentation(), rat(2, 3));
    }
}
