//! Truncated power series in one to three variables.
//!
//! A series of order `N` stores the coefficients of all monomials of total
//! degree below `N`; everything of degree `N` or more is unknown. Results of
//! binary operations carry the smaller order of their operands.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{is_p_integral, is_p_local, vp_valuation, PrimeSet, Valuation};
use crate::error::{Error, Result};
use crate::scalar::{CommRing, Scalar};
use crate::symbol::SymbolPoly;

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct TruncSeries<S> {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Exponent, S>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl<S: Scalar> TruncSeries<S> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        assert!((1..=3).contains(&nvars), "series support one to three variables");
        TruncSeries { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: S) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, S::one())
    }

    /// The variable T_k.
    pub fn var(nvars: usize, k: usize, order: u32) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut s = Self::zero(nvars, order);
        s.add_term(e, S::one());
        s
    }

    /// Univariate series Σ c_j T^j from a coefficient list.
    pub fn univariate(coeffs: Vec<S>, order: u32) -> Self {
        let mut s = Self::zero(1, order);
        for (j, c) in coeffs.into_iter().enumerate() {
            s.add_term(vec![j as u32], c);
        }
        s
    }

    pub fn from_terms(nvars: usize, order: u32, terms: impl IntoIterator<Item = (Exponent, S)>) -> Self {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Exponent, c: S) {
        if degree(&e) >= self.order || c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> S {
        self.coeffs.get(e).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of T^j in a univariate series.
    pub fn coeff1(&self, j: u32) -> S {
        debug_assert_eq!(self.nvars, 1);
        self.coeff(&[j])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.coeffs.iter()
    }

    /// Terms sorted by total degree, then lexicographically by exponent.
    pub fn terms_graded(&self) -> Vec<(&Exponent, &S)> {
        let mut v: Vec<_> = self.coeffs.iter().collect();
        v.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Lowest total degree of a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|e| degree(e)).min()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncSeries {
            nvars: self.nvars,
            order,
            coeffs: self.coeffs.iter().filter(|(e, _)| degree(e) < order).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, a) in &self.coeffs {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncSeries<T> {
        let mut out = TruncSeries::zero(self.nvars, self.order);
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    fn check_compatible(&self, o: &Self) {
        assert_eq!(self.nvars, o.nvars, "series in different numbers of variables");
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars, self.order);
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

    /// Partial derivative in T_k; the order drops by one.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[k] > 0 {
                let mut ne = e.clone();
                ne[k] -= 1;
                out.add_term(ne, c.clone() * S::from_i64(e[k] as i64));
            }
        }
        out
    }

    /// Antiderivative in a univariate series with zero constant; the order
    /// rises by one.
    pub fn integrate(&self) -> Self {
        assert_eq!(self.nvars, 1, "integration is univariate");
        let mut out = Self::zero(1, self.order + 1);
        for (e, c) in &self.coeffs {
            out.add_term(vec![e[0] + 1], c.clone() * S::from_i64(e[0] as i64 + 1).inv().unwrap());
        }
        out
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(&vec![0; self.nvars]);
        let inv0 = c0.inv().ok_or_else(|| Error::NotInvertible("series with zero constant term".into()))?;
        // 1/(c0 + h) = inv0 Σ (-inv0 h)^k
        let mut h = self.clone();
        h.coeffs.remove(&vec![0; self.nvars]);
        let step = h.scale(&(-inv0.clone()));
        let mut term = Self::one(self.nvars, self.order);
        let mut acc = term.clone();
        for _ in 1..self.order {
            term = &term * &step;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(&inv0))
    }

    /// Substitute series with zero constant term for the variables.
    pub fn compose(&self, args: &[TruncSeries<S>]) -> Result<TruncSeries<S>> {
        if args.len() != self.nvars {
            return Err(Error::Invalid(format!("composition needs {} arguments, got {}", self.nvars, args.len())));
        }
        let m = args[0].nvars;
        let mut order = self.order;
        for a in args {
            if a.nvars != m {
                return Err(Error::Invalid("composition arguments in different variables".into()));
            }
            if !a.coeff(&vec![0; m]).is_zero() {
                return Err(Error::Invalid("composition argument has a nonzero constant term".into()));
            }
            order = order.min(a.order);
        }
        let mut powers: Vec<Vec<TruncSeries<S>>> =
            args.iter().map(|a| vec![TruncSeries::one(m, order), a.truncate(order)]).collect();
        let mut out = TruncSeries::zero(m, order);
        for (e, c) in &self.coeffs {
            if degree(e) >= order {
                continue;
            }
            let mut t = TruncSeries::constant(m, order, c.clone());
            for (k, &ek) in e.iter().enumerate() {
                while powers[k].len() <= ek as usize {
                    let next = &powers[k][powers[k].len() - 1] * &powers[k][1];
                    powers[k].push(next);
                }
                if ek > 0 {
                    t = &t * &powers[k][ek as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Compositional inverse of a univariate c·T + O(T²), c invertible.
    pub fn compositional_inverse(&self) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::NotInvertible("compositional inverse of a multivariate series".into()));
        }
        if !self.coeff1(0).is_zero() {
            return Err(Error::NotInvertible("series has a nonzero constant term".into()));
        }
        let c = self.coeff1(1);
        let inv_c = c.inv().ok_or_else(|| Error::NotInvertible("series has no linear term".into()))?;
        let t = Self::var(1, 0, self.order);
        let deriv = self.derivative(0);
        let mut g = t.scale(&inv_c);
        // Newton: g ← g − (f∘g − T)/(f'∘g); precision doubles each step
        let mut correct = 2u32;
        loop {
            let fg = self.compose(std::slice::from_ref(&g))?;
            let resid = &fg - &t;
            if resid.is_zero() || correct >= self.order.max(2) * 2 {
                break;
            }
            // resid = O(T²), so the top coefficient of the correction only
            // needs 1/f'(g) below degree N − 2
            let mut dg = deriv.compose(std::slice::from_ref(&g))?.reciprocal()?;
            dg.order = self.order;
            let corr = &resid * &dg;
            g = &g - &corr;
            g.order = self.order;
            correct *= 2;
        }
        Ok(g)
    }

    /// Embed into more variables, sending T_k to T_{map[k]}.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars, self.order);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; nvars];
            for (k, &ek) in e.iter().enumerate() {
                ne[map[k]] += ek;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Apply a symbol: φ_n ⋆ T^j = T^{jn}, extended linearly.
    pub fn star(&self, symbol: &SymbolPoly<S>) -> Self {
        assert_eq!(self.nvars, 1, "the symbol action is univariate");
        let mut out = Self::zero(1, self.order);
        for (&n, lambda) in symbol.terms() {
            for (e, a) in &self.coeffs {
                let j = e[0] as u64 * n;
                if j < self.order as u64 {
                    out.add_term(vec![j as u32], lambda.clone() * a.clone());
                }
            }
        }
        out
    }

    /// Whether two series agree on every monomial of degree below `depth`.
    pub fn agrees_through(&self, other: &Self, depth: u32) -> bool {
        self.check_compatible(other);
        let keys: std::collections::BTreeSet<&Exponent> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().filter(|e| degree(e) < depth).all(|e| self.coeff(e).approx_eq(&other.coeff(e)))
    }
}

/// φ_n ⋆ f for a symbol polynomial and a univariate series.
pub fn star_apply<S: Scalar>(symbol: &SymbolPoly<S>, f: &TruncSeries<S>) -> TruncSeries<S> {
    f.star(symbol)
}

impl TruncSeries<BigRational> {
    /// Whether every coefficient has denominator prime to the set.
    pub fn is_p_local(&self, primes: &PrimeSet) -> bool {
        self.coeffs.values().all(|c| is_p_local(c, primes))
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.values().all(|c| is_p_integral(c, p))
    }

    /// The lowest-degree coefficient whose denominator meets the prime set.
    pub fn first_nonlocal(&self, primes: &PrimeSet) -> Option<(Exponent, BigRational)> {
        self.terms_graded().into_iter().find(|(_, c)| !is_p_local(c, primes)).map(|(e, c)| (e.clone(), c.clone()))
    }

    /// Minimum p-adic valuation over all coefficients.
    pub fn min_valuation(&self, p: u64) -> Valuation {
        self.coeffs.values().map(|c| vp_valuation(c, p)).min().unwrap_or(Valuation::Infinite)
    }

    pub fn to_f64(&self) -> TruncSeries<f64> {
        use num_traits::ToPrimitive;
        self.map_coeffs(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    /// Σ c_j T^j with integer coefficients.
    pub fn from_ints(coeffs: &[i64], order: u32) -> Self {
        Self::univariate(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(), order)
    }
}

impl<S: Scalar> Add for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn add(self, o: Self) -> TruncSeries<S> {
        self.check_compatible(o);
        let mut out = self.truncate(o.order);
        for (e, c) in &o.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn sub(self, o: Self) -> TruncSeries<S> {
        self.check_compatible(o);
        let mut out = self.truncate(o.order);
        for (e, c) in &o.coeffs {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn mul(self, o: Self) -> TruncSeries<S> {
        self.check_compatible(o);
        let order = self.order.min(o.order);
        let mut acc: HashMap<Exponent, S> = HashMap::new();
        for (ea, a) in &self.coeffs {
            let da = degree(ea);
            if da >= order {
                continue;
            }
            for (eb, b) in &o.coeffs {
                if da + degree(eb) >= order {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = a.clone() * b.clone();
                match acc.get_mut(&e) {
                    Some(v) => *v = v.clone() + prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let mut out = TruncSeries::zero(self.nvars, order);
        for (e, c) in acc {
            out.add_term(e, c);
        }
        out
    }
}

impl<S: Scalar> Neg for &TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn neg(self) -> TruncSeries<S> {
        self.scale(&-S::one())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for TruncSeries<S> {
            type Output = TruncSeries<S>;
            fn $m(self, o: Self) -> TruncSeries<S> {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<S: Scalar> Neg for TruncSeries<S> {
    type Output = TruncSeries<S>;
    fn neg(self) -> TruncSeries<S> {
        -&self
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for TruncSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["T1", "T2", "T3"];
        let mut first = true;
        for (e, c) in self.terms_graded() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &ek) in e.iter().enumerate() {
                let name = if self.nvars == 1 { "T" } else { names[k] };
                match ek {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{ek}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.order)
    }
}

impl<S: fmt::Debug> fmt::Debug for TruncSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncSeries").field("nvars", &self.nvars).field("order", &self.order).field("coeffs", &self.coeffs).finish()
    }
}

impl<S: Scalar + fmt::Debug> CommRing for TruncSeries<S> {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.order)
    }
    fn one_like(&self) -> Self {
        Self::one(self.nvars, self.order)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self.scale(&S::from_rational(&BigRational::from_integer(k.clone())))
    }
}

impl<S: Scalar> Zero for TruncSeries<S> {
    fn zero() -> Self {
        Self::zero(1, u32::MAX)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for TruncSeries<S> {
    fn one() -> Self {
        Self::one(1, u32::MAX)
    }
}
