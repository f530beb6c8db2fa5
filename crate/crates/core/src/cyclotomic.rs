//! Arithmetic in Q(ζ_m) and in Z_p[ζ_m]/(p^N) for p not dividing m.
//!
//! Elements are residue polynomials modulo the cyclotomic polynomial Φ_m in
//! the power basis 1, ζ, ..., ζ^{φ(m)-1}. For p ∤ m the Frobenius lift φ_p
//! is the Galois automorphism ζ ↦ ζ^p; it is applied through a table of the
//! reductions of ζ^k, k < m.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{big_pow, euler_phi, inverse_mod, is_p_integral, is_p_local, multiplicative_order, PrimeSet};
use crate::delta::FrobeniusRing;
use crate::error::{Error, Result};
use crate::scalar::{split_coefficient, split_signed_terms, CommRing, Field};

pub use crate::delta::check_delta_ring_axioms;

/// Exact integer polynomial division of `num` by the monic `den`
/// (coefficients low to high); panics on a nonzero remainder.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "cyclotomic division left a remainder");
    quot
}

/// Φ_m by dividing x^m - 1 by Φ_d for every proper divisor d of m.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

/// The structure of Z[ζ_m]: Φ_m and the reductions of ζ^k for k < m.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    m: u64,
    phi: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(m: u64) -> Arc<Self> {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        debug_assert_eq!(deg as u64, euler_phi(m));
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by ζ: shift and fold the top coefficient through Φ_m
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..deg {
                    cur[i] -= &top * &phi[i];
                }
            }
        }
        Arc::new(CyclotomicField { m, phi, powers })
    }

    /// Checked constructor for a prime set: m must be coprime to every prime.
    pub fn for_primes(m: u64, primes: &PrimeSet) -> Result<Arc<Self>> {
        for &p in primes.primes() {
            if m.is_multiple_of(p) {
                return Err(Error::Ramified { m, prime: p });
            }
        }
        Ok(Self::new(m))
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn cyclotomic_poly(&self) -> &[BigInt] {
        &self.phi
    }

    /// Reduce a coefficient vector of arbitrary length modulo Φ_m.
    fn reduce<R: CommRing>(&self, coeffs: &[R], zero: &R) -> Vec<R> {
        let deg = self.degree();
        let mut out = vec![zero.clone(); deg];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            if k < deg {
                out[k] = out[k].clone() + c.clone();
            } else {
                for (i, t) in self.powers[k % self.m as usize].iter().enumerate() {
                    if !t.is_zero() {
                        out[i] = out[i].clone() + c.mul_int(t);
                    }
                }
            }
        }
        out
    }

    fn mul_coeffs<R: CommRing>(&self, a: &[R], b: &[R], zero: &R) -> Vec<R> {
        let mut prod = vec![zero.clone(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero_elem() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero_elem() {
                    prod[i + j] = prod[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        self.reduce(&prod, zero)
    }

    /// Galois action ζ ↦ ζ^q on coefficient vectors.
    fn galois<R: CommRing>(&self, coeffs: &[R], q: u64, zero: &R) -> Result<Vec<R>> {
        if q.gcd(&self.m) != 1 {
            return Err(Error::Ramified { m: self.m, prime: q });
        }
        let mut spread = vec![zero.clone(); self.m as usize];
        for (i, c) in coeffs.iter().enumerate() {
            let k = ((i as u128 * q as u128) % self.m as u128) as usize;
            spread[k] = spread[k].clone() + c.clone();
        }
        Ok(self.reduce(&spread, zero))
    }
}

/// Element of Q(ζ_m).
#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    pub fn new(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Self {
        let zero = BigRational::zero();
        let coeffs = field.reduce(&coeffs, &zero);
        CyclotomicElement { field: field.clone(), coeffs }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: BigRational) -> Self {
        Self::new(field, vec![q])
    }

    /// ζ_m^k.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: u64) -> Self {
        let mut c = vec![BigRational::zero(); field.m as usize];
        c[(k % field.m) as usize] = BigRational::one();
        Self::new(field, c)
    }

    /// Parse a polynomial in `z` with rational coefficients, e.g. "2",
    /// "z^3", "1/2 - z".
    pub fn parse(field: &Arc<CyclotomicField>, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid element of Q(zeta_{}) {s:?}", field.m));
        let terms = split_signed_terms(s).ok_or_else(bad)?;
        if terms.is_empty() {
            return Err(bad());
        }
        let mut out = Self::from_rational(field, BigRational::zero());
        for (neg, term) in terms {
            let (c, rest) = split_coefficient(&term).ok_or_else(bad)?;
            let k = match rest {
                "" => 0,
                "z" => 1,
                r => r.strip_prefix("z^").and_then(|e| e.parse::<u64>().ok()).ok_or_else(bad)?,
            };
            let c = if neg { -c } else { c };
            out = out + Self::zeta_pow(field, k) * Self::from_rational(field, c);
        }
        Ok(out)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_p_local(&self, primes: &PrimeSet) -> bool {
        self.coeffs.iter().all(|c| is_p_local(c, primes))
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    /// Galois automorphism ζ ↦ ζ^q.
    pub fn galois(&self, q: u64) -> Result<Self> {
        let zero = BigRational::zero();
        Ok(CyclotomicElement { field: self.field.clone(), coeffs: self.field.galois(&self.coeffs, q, &zero)? })
    }

    /// The Frobenius lift at p: ring endomorphism ζ ↦ ζ^p.
    pub fn frobenius_lift(&self, p: u64) -> Result<Self> {
        self.galois(p)
    }

    /// Fermat quotient (φ_p(a) - a^p)/p.
    pub fn delta_p(&self, p: u64) -> Result<Self> {
        self.fermat_quotient(p)
    }

    /// Reduction into Z_p[ζ]/(p^N).
    pub fn to_padic(&self, p: u64, precision: u32) -> Result<PadicCyclotomic> {
        let modulus = big_pow(p, precision);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let inv = inverse_mod(c.denom(), &modulus)
                .ok_or_else(|| Error::NotIntegral { value: c.to_string(), prime: p })?;
            coeffs.push((c.numer() * inv).mod_floor(&modulus));
        }
        PadicCyclotomic::from_residues(&self.field, p, precision, coeffs)
    }

    /// Extended Euclid in Q[x] against Φ_m.
    fn inverse(&self) -> Option<Self> {
        if self.coeffs.iter().all(Zero::is_zero) {
            return None;
        }
        let to_rat = |v: &[BigInt]| v.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>();
        let (g, s) = poly_ext_gcd(trim(self.coeffs.clone()), trim(to_rat(&self.field.phi)));
        if g.len() != 1 {
            return None;
        }
        let inv_g = g[0].recip();
        Some(Self::new(&self.field, s.into_iter().map(|c| c * &inv_g).collect()))
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![BigRational::zero()], trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[i + j] -= &c * bc;
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    (trim(quot), trim(rem))
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    let need = q.len() + b.len() - 1;
    if out.len() < need {
        out.resize(need, BigRational::zero());
    }
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(out)
}

/// Returns (g, s) with s·a ≡ g (mod b).
fn poly_ext_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![BigRational::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Add for CyclotomicElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicElement { field: self.field, coeffs }
    }
}

impl Sub for CyclotomicElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicElement { field: self.field, coeffs }
    }
}

impl Mul for CyclotomicElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let coeffs = self.field.mul_coeffs(&self.coeffs, &o.coeffs, &BigRational::zero());
        CyclotomicElement { field: self.field, coeffs }
    }
}

impl Neg for CyclotomicElement {
    type Output = Self;
    fn neg(self) -> Self {
        CyclotomicElement { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), field: self.field }
    }
}

impl CommRing for CyclotomicElement {
    fn zero_like(&self) -> Self {
        Self::from_rational(&self.field, BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_rational(&self.field, BigRational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        CyclotomicElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * &k).collect() }
    }
}

impl Field for CyclotomicElement {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        Self::from_rational(&self.field, q.clone())
    }
}

impl FrobeniusRing for CyclotomicElement {
    fn frobenius(&self, p: u64) -> Result<Self> {
        if !self.is_p_integral(p) {
            return Err(Error::NotIntegral { value: format!("{self}"), prime: p });
        }
        self.galois(p)
    }
    fn div_by_prime(&self, p: u64) -> Option<Self> {
        let pr = BigRational::from_integer(BigInt::from(p));
        Some(CyclotomicElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c / &pr).collect() })
    }
}

fn fmt_poly<T: fmt::Display + Zero>(f: &mut fmt::Formatter<'_>, coeffs: &[T]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match i {
            0 => write!(f, "{c}")?,
            1 => write!(f, "({c})z")?,
            _ => write!(f, "({c})z^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, &self.coeffs)
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})[", self.field.m)?;
        fmt_poly(f, &self.coeffs)?;
        write!(f, "]")
    }
}

/// Element of Z_p[ζ_m]/(p^N), p ∤ m.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicCyclotomic {
    field: Arc<CyclotomicField>,
    prime: u64,
    precision: u32,
    coeffs: Vec<BigInt>,
}

impl PadicCyclotomic {
    pub fn from_residues(field: &Arc<CyclotomicField>, prime: u64, precision: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if field.m.is_multiple_of(prime) {
            return Err(Error::Ramified { m: field.m, prime });
        }
        assert!(precision >= 1, "p-adic precision must be positive");
        let modulus = big_pow(prime, precision);
        let coeffs = field.reduce(&coeffs, &BigInt::zero()).into_iter().map(|c| c.mod_floor(&modulus)).collect();
        Ok(PadicCyclotomic { field: field.clone(), prime, precision, coeffs })
    }

    pub fn from_int(field: &Arc<CyclotomicField>, prime: u64, precision: u32, k: &BigInt) -> Result<Self> {
        Self::from_residues(field, prime, precision, vec![k.clone()])
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn modulus(&self) -> BigInt {
        big_pow(self.prime, self.precision)
    }

    fn rebuild(&self, precision: u32, coeffs: Vec<BigInt>) -> Self {
        let modulus = big_pow(self.prime, precision);
        PadicCyclotomic {
            field: self.field.clone(),
            prime: self.prime,
            precision,
            coeffs: coeffs.into_iter().map(|c| c.mod_floor(&modulus)).collect(),
        }
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        assert!(precision <= self.precision, "cannot raise p-adic precision");
        self.rebuild(precision, self.coeffs.clone())
    }

    /// Minimum coefficient valuation, capped at the precision.
    pub fn valuation(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| crate::arith::vp_int(c, self.prime).min(self.precision))
            .min()
            .unwrap_or(self.precision)
    }

    /// Coefficients as symmetric residues.
    pub fn symmetric_coeffs(&self) -> Vec<BigInt> {
        let m = self.modulus();
        let half = &m / 2u32;
        self.coeffs.iter().map(|c| if c > &half { c - &m } else { c.clone() }).collect()
    }

    pub fn galois(&self, q: u64) -> Result<Self> {
        let g = self.field.galois(&self.coeffs, q, &BigInt::zero())?;
        Ok(self.rebuild(self.precision, g))
    }

    pub fn frobenius_lift(&self, p: u64) -> Result<Self> {
        self.galois(p)
    }

    /// Fermat quotient at the base prime; the result has one digit less.
    pub fn delta_p(&self) -> Result<Self> {
        self.fermat_quotient(self.prime)
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse_mod_p().is_some()
    }

    /// Inverse modulo p by Gaussian elimination on the multiplication
    /// matrix over F_p.
    fn unit_inverse_mod_p(&self) -> Option<Vec<u64>> {
        let p = self.prime;
        let deg = self.field.degree();
        let zero = BigInt::zero();
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(deg);
        for j in 0..deg {
            let mut basis = vec![BigInt::zero(); deg];
            basis[j] = BigInt::one();
            let prod = self.field.mul_coeffs(&self.coeffs, &basis, &zero);
            cols.push(prod.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect());
        }
        // augmented rows: M v = e_0
        let mut rows: Vec<Vec<u64>> = (0..deg)
            .map(|i| {
                let mut r: Vec<u64> = (0..deg).map(|j| cols[j][i]).collect();
                r.push(u64::from(i == 0));
                r
            })
            .collect();
        let pm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        for col in 0..deg {
            let pivot = (col..deg).find(|&r| rows[r][col] != 0)?;
            rows.swap(col, pivot);
            let inv = inverse_mod(&BigInt::from(rows[col][col]), &BigInt::from(p))?.to_u64().unwrap();
            for x in rows[col].iter_mut() {
                *x = pm(*x, inv);
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let f = row[col];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + p - pm(f, y)) % p;
                    }
                }
            }
        }
        Some(rows.iter().map(|r| r[deg]).collect())
    }

    /// Inverse of a unit, by Newton lifting from the inverse mod p.
    pub fn inverse(&self) -> Result<Self> {
        let base = self.unit_inverse_mod_p().ok_or_else(|| Error::NotUnit { value: format!("{self}"), prime: self.prime })?;
        let mut v = self.rebuild(self.precision, base.into_iter().map(BigInt::from).collect());
        let two = self.int_like(&BigInt::from(2));
        let mut correct = 1u32;
        while correct < self.precision {
            v = v.clone() * (two.clone() - self.clone() * v);
            correct *= 2;
        }
        Ok(v)
    }

    /// Exact division by p, dropping one digit.
    pub fn div_p(&self) -> Result<Self> {
        let p = BigInt::from(self.prime);
        if self.coeffs.iter().any(|c| !(c % &p).is_zero()) {
            return Err(Error::Integrity(format!("{self} is not divisible by {}", self.prime)));
        }
        if self.precision < 2 {
            return Err(Error::Precision { needed: 2, available: self.precision });
        }
        Ok(self.rebuild(self.precision - 1, self.coeffs.iter().map(|c| c / &p).collect()))
    }

    /// Multiply by a p-integral rational.
    pub fn scale_rational(&self, q: &BigRational) -> Result<Self> {
        let modulus = self.modulus();
        let inv = inverse_mod(q.denom(), &modulus)
            .ok_or_else(|| Error::NotIntegral { value: q.to_string(), prime: self.prime })?;
        let k = q.numer() * inv;
        Ok(self.rebuild(self.precision, self.coeffs.iter().map(|c| c * &k).collect()))
    }

    /// Multiplicative order of the residue field degree: the order of p in
    /// (Z/mZ)^*.
    pub fn residue_degree(&self) -> u64 {
        multiplicative_order(self.prime % self.field.m.max(1), self.field.m)
    }

    fn binary(&self, o: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.prime, o.prime, "p-adic operands over different primes");
        assert_eq!(self.field.m, o.field.m, "operands in different cyclotomic rings");
        let prec = self.precision.min(o.precision);
        self.rebuild(prec, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f(a, b)).collect())
    }
}

impl Add for PadicCyclotomic {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.binary(&o, |a, b| a + b)
    }
}

impl Sub for PadicCyclotomic {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.binary(&o, |a, b| a - b)
    }
}

impl Mul for PadicCyclotomic {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.prime, o.prime, "p-adic operands over different primes");
        let prec = self.precision.min(o.precision);
        let prod = self.field.mul_coeffs(&self.coeffs, &o.coeffs, &BigInt::zero());
        self.rebuild(prec, prod)
    }
}

impl Neg for PadicCyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        let c = self.coeffs.iter().map(|c| -c).collect();
        self.rebuild(self.precision, c)
    }
}

impl CommRing for PadicCyclotomic {
    fn zero_like(&self) -> Self {
        self.rebuild(self.precision, vec![BigInt::zero(); self.field.degree()])
    }
    fn one_like(&self) -> Self {
        let mut c = vec![BigInt::zero(); self.field.degree()];
        c[0] = BigInt::one();
        self.rebuild(self.precision, c)
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self.rebuild(self.precision, self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl FrobeniusRing for PadicCyclotomic {
    fn frobenius(&self, q: u64) -> Result<Self> {
        self.galois(q)
    }
    fn div_by_prime(&self, q: u64) -> Option<Self> {
        if q == self.prime {
            self.div_p().ok()
        } else {
            let inv = inverse_mod(&BigInt::from(q), &self.modulus())?;
            Some(self.mul_int(&inv))
        }
    }
}

impl fmt::Display for PadicCyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, &self.coeffs)?;
        write!(f, " mod {}^{}", self.prime, self.precision)
    }
}

impl fmt::Debug for PadicCyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}[ζ_{}](", self.prime, self.field.m)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

/// Signed decimal rendering used in reports.
pub fn residues_to_strings(coeffs: &[BigInt]) -> Vec<String> {
    coeffs.iter().map(|c| if c.is_negative() { format!("-{}", c.abs()) } else { c.to_string() }).collect()
}
