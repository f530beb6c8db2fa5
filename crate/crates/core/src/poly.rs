//! Sparse multivariate polynomials over a contextless coefficient ring.
//!
//! Variables are any ordered key type, which lets the same container hold
//! the integer polynomials C_p / C_{p,q} (variables are positions) and the
//! jet-ring polynomials (variables are Frobenius-shifted generators).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::CommRing;

/// Coefficient rings usable in [`Poly`].
pub trait Coefficient: CommRing + Zero + One {}
impl<T: CommRing + Zero + One> Coefficient for T {}

/// Product of variables with positive exponents, sorted by variable.
pub type Monomial<V> = Vec<(V, u32)>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<V: Ord, C> {
    terms: BTreeMap<Monomial<V>, C>,
}

fn mul_monomials<V: Ord + Clone>(a: &Monomial<V>, b: &Monomial<V>) -> Monomial<V> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl<V: Ord + Clone, C: Coefficient> Poly<V, C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], C::one());
        p
    }

    pub fn monomial(mut m: Monomial<V>, c: C) -> Self {
        m.retain(|(_, e)| *e > 0);
        m.sort_by(|a, b| a.0.cmp(&b.0));
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p = p + Self::monomial(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Vec::new())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|(_, e)| e).sum()).max().unwrap_or(0)
    }

    /// Smallest total degree of a monomial, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().map(|(_, e)| e).sum()).min()
    }

    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient-wise map, dropping terms sent to zero.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<V, D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Poly<V, D>, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Rename variables by an injective map.
    pub fn rename<W: Ord + Clone>(&self, f: impl Fn(&V) -> W) -> Poly<W, C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut nm: Monomial<W> = m.iter().map(|(v, e)| (f(v), *e)).collect();
            nm.sort_by(|a, b| a.0.cmp(&b.0));
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Ring homomorphism sending each variable to a polynomial.
    pub fn substitute<W: Ord + Clone + Hash>(&self, f: impl Fn(&V) -> Poly<W, C>) -> Poly<W, C>
    where
        V: Hash,
    {
        let mut images: HashMap<V, Vec<Poly<W, C>>> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in m {
                let pows = images.entry(v.clone()).or_insert_with(|| vec![Poly::one(), f(v)]);
                while pows.len() <= *e as usize {
                    let next = &pows[pows.len() - 1] * &pows[1];
                    pows.push(next);
                }
                t = &t * &pows[*e as usize];
            }
            out = out + t;
        }
        out
    }

    /// Evaluate in a ring `R`, given variable images, the unit of `R` and a
    /// coefficient embedding.
    pub fn eval<R: CommRing>(&self, var: impl Fn(&V) -> R, one: &R, coeff: impl Fn(&C) -> R) -> R
    where
        V: Hash,
    {
        let mut cache: HashMap<V, R> = HashMap::new();
        let mut acc = one.zero_like();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (v, e) in m {
                let base = cache.entry(v.clone()).or_insert_with(|| var(v)).clone();
                t = t * base.pow_u64(*e as u64);
            }
            acc = acc + t;
        }
        acc
    }

    /// Divide every coefficient exactly, failing if some division is inexact.
    pub fn try_div_coeffs(&self, f: impl Fn(&C) -> Option<C>) -> Option<Self> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }
}

impl<V: Ord + Clone> Poly<V, BigInt> {
    /// Evaluate an integer polynomial in any commutative ring.
    pub fn eval_in<R: CommRing>(&self, var: impl Fn(&V) -> R, one: &R) -> R
    where
        V: Hash,
    {
        self.eval(var, one, |c| one.int_like(c))
    }
}

impl<V: Ord + Clone, C: Coefficient> Add for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn add(self, o: &Poly<V, C>) -> Poly<V, C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<V: Ord + Clone, C: Coefficient> Sub for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn sub(self, o: &Poly<V, C>) -> Poly<V, C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<V: Ord + Clone, C: Coefficient> Mul for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn mul(self, o: &Poly<V, C>) -> Poly<V, C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mul_monomials(ma, mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<V: Ord + Clone, C: Coefficient> Neg for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn neg(self) -> Poly<V, C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl<V: Ord + Clone, C: Coefficient> $tr for Poly<V, C> {
            type Output = Poly<V, C>;
            fn $f(self, o: Poly<V, C>) -> Poly<V, C> {
                (&self).$f(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<V: Ord + Clone, C: Coefficient> Neg for Poly<V, C> {
    type Output = Poly<V, C>;
    fn neg(self) -> Poly<V, C> {
        -&self
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Coefficient> CommRing for Poly<V, C> {
    fn zero_like(&self) -> Self {
        Poly::zero()
    }
    fn one_like(&self) -> Self {
        Poly::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self.scale(&C::one().int_like(k))
    }
}

impl<V: Ord + fmt::Debug, C: fmt::Debug> fmt::Debug for Poly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (v, e) in m {
                if *e == 1 {
                    write!(f, "*{v:?}")?;
                } else {
                    write!(f, "*{v:?}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Integer polynomial in positional variables X_0, X_1, ...
pub type IntPolynomial = Poly<usize, BigInt>;
