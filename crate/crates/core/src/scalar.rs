//! Ring and field abstractions shared by every module.
//!
//! Two layers exist. [`CommRing`] and [`Field`] are "contextual": an element
//! may carry its own ambient structure (a cyclotomic modulus, a p-adic
//! precision) so constants are produced from an existing element via
//! `zero_like` / `one_like`. [`Scalar`] is the contextless refinement used by
//! power series and symbol polynomials, where `num_traits::Zero`/`One` must
//! exist without an example element.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring with unit.
pub trait CommRing:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_int(&self, k: &BigInt) -> Self;

    fn int_like(&self, k: &BigInt) -> Self {
        self.one_like().mul_int(k)
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A commutative ring in which every nonzero element that can be inverted
/// reports its inverse; `inv` returns `None` for non-units.
pub trait Field: CommRing {
    fn inv(&self) -> Option<Self>;
    fn rational_like(&self, q: &BigRational) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

/// Contextless field scalars: the coefficient type of series and symbols.
pub trait Scalar: Field + Zero + One {
    fn from_rational(q: &BigRational) -> Self;
    fn from_i64(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }
    /// Exact comparison hook; floats use a relative tolerance.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl CommRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self * k
    }
}

impl CommRing for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        q.clone()
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl CommRing for Ratio<i64> {
    fn zero_like(&self) -> Self {
        Ratio::zero()
    }
    fn one_like(&self) -> Self {
        Ratio::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self * Ratio::from_integer(k.to_i64().expect("integer factor overflows i64"))
    }
}

impl Field for Ratio<i64> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl Scalar for Ratio<i64> {
    fn from_rational(q: &BigRational) -> Self {
        Ratio::new(
            q.numer().to_i64().expect("numerator overflows i64"),
            q.denom().to_i64().expect("denominator overflows i64"),
        )
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl CommRing for $t {
            fn zero_like(&self) -> Self {
                0.0
            }
            fn one_like(&self) -> Self {
                1.0
            }
            fn is_zero_elem(&self) -> bool {
                *self == 0.0
            }
            fn mul_int(&self, k: &BigInt) -> Self {
                self * k.to_f64().unwrap_or(f64::NAN) as $t
            }
        }

        impl Field for $t {
            fn inv(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / self)
                }
            }
            fn rational_like(&self, q: &BigRational) -> Self {
                Self::from_rational(q)
            }
        }

        impl Scalar for $t {
            fn from_rational(q: &BigRational) -> Self {
                (q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)) as $t
            }
            fn approx_eq(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $eps * scale
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);

/// Integer view of a rational, if it is one.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}

/// Parse "a" or "a/b" into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            let n: BigInt = n.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Split "a + b - (c)d" at top-level signs into (negated, term) pairs,
/// with whitespace removed. `None` for a dangling or doubled `+`.
pub(crate) fn split_signed_terms(s: &str) -> Option<Vec<(bool, String)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negated = false;
    let mut pending_sign = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let at_boundary = depth == 0 && (ch == '+' || ch == '-') && !matches!(prev, Some('^' | '*' | '/' | '_'));
        if at_boundary {
            if !current.is_empty() {
                out.push((negated, std::mem::take(&mut current)));
                negated = false;
            } else if ch == '+' && pending_sign {
                return None;
            }
            if ch == '-' {
                negated = !negated;
            }
            pending_sign = true;
        } else {
            current.push(ch);
            pending_sign = false;
        }
        prev = Some(ch);
    }
    if pending_sign {
        return None;
    }
    if !current.is_empty() {
        out.push((negated, current));
    }
    Some(out)
}

/// Split a term into its rational coefficient and the remaining factor:
/// "(1/3)phi_3" → (1/3, "phi_3"), "2z^2" → (2, "z^2"), "z" → (1, "z").
pub(crate) fn split_coefficient(term: &str) -> Option<(BigRational, &str)> {
    if let Some(rest) = term.strip_prefix('(') {
        let close = rest.find(')')?;
        let c = parse_rational(&rest[..close])?;
        let tail = rest[close + 1..].trim_start_matches('*');
        return Some((c, tail));
    }
    let end = term.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(term.len());
    let c = if end == 0 { BigRational::one() } else { parse_rational(&term[..end])? };
    Some((c, term[end..].trim_start_matches('*')))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = rat(-3, 7);
        let mut acc = int(1);
        for e in 0..12u64 {
            assert_eq!(x.pow_u64(e), acc);
            acc *= x.clone();
        }
    }

    #[test]
    fn float_scalar_tolerance() {
        assert!(1.0f64.approx_eq(&(1.0 + 1e-12)));
        assert!(!1.0f64.approx_eq(&1.001));
        assert_eq!(<f64 as Scalar>::from_rational(&rat(1, 4)), 0.25);
    }

    #[test]
    fn term_splitting() {
        let t = split_signed_terms("1 - (1/3)phi_3 + -2z^2").unwrap();
        assert_eq!(split_signed_terms("z +"), None);
        assert_eq!(split_signed_terms("z + + 1"), None);
        assert_eq!(t, vec![(false, "1".into()), (true, "(1/3)phi_3".into()), (true, "2z^2".into())]);
        assert_eq!(split_coefficient("(-1/3)phi_3"), Some((rat(-1, 3), "phi_3")));
        assert_eq!(split_coefficient("z"), Some((int(1), "z")));
        assert_eq!(parse_rational("4/0"), None);
    }

    #[test]
    fn field_inverse_of_zero_is_none() {
        assert!(int(0).inv().is_none());
        assert_eq!(rat(2, 3).inv(), Some(rat(3, 2)));
    }
}
