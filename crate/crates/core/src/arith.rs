//! Big-integer and p-adic plumbing: prime sets, valuations, fixed-precision
//! p-adic integers, the p-adic logarithm, Hensel lifting, the Möbius
//! function and rational reconstruction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CommRing, Field};

// Deterministic for every n < 3.3e24, which covers u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nonempty, strictly increasing family of distinct odd primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::BadPrimeSet);
        }
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadPrimeSet);
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p == 2 {
                return Err(Error::EvenPrime(p));
            }
        }
        Ok(PrimeSet(primes))
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.0.iter().position(|&q| q == p)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }

    /// Exponent vector of `n` over this set, or `None` if `n` is not
    /// smooth over it.
    pub fn exponents(&self, mut n: u64) -> Option<Vec<u32>> {
        if n == 0 {
            return None;
        }
        let mut exps = vec![0; self.0.len()];
        for (k, &p) in self.0.iter().enumerate() {
            while n.is_multiple_of(p) {
                n /= p;
                exps[k] += 1;
            }
        }
        (n == 1).then_some(exps)
    }

    pub fn is_smooth(&self, n: u64) -> bool {
        self.exponents(n).is_some()
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeSet::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(p: PrimeSet) -> Self {
        p.0
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero integer");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn vp_valuation(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(vp_int(x.numer(), p) as i64 - vp_int(x.denom(), p) as i64)
}

/// Membership in the localization at a prime set: no prime of the set
/// divides the reduced denominator.
pub fn is_p_local(x: &BigRational, primes: &PrimeSet) -> bool {
    primes.primes().iter().all(|&p| vp_valuation(x, p) >= Valuation::Finite(0))
}

pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    vp_valuation(x, p) >= Valuation::Finite(0)
}

pub fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i8 {
    assert!(n >= 1, "mobius of zero");
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Element of Z_p known modulo p^precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    residue: BigInt,
}

impl PadicInt {
    pub fn new(prime: u64, precision: u32, value: &BigInt) -> Self {
        assert!(precision >= 1, "p-adic precision must be positive");
        let residue = value.mod_floor(&big_pow(prime, precision));
        PadicInt { prime, precision, residue }
    }

    pub fn from_i64(prime: u64, precision: u32, value: i64) -> Self {
        Self::new(prime, precision, &BigInt::from(value))
    }

    /// Image of a p-integral rational.
    pub fn from_rational(prime: u64, precision: u32, q: &BigRational) -> Result<Self> {
        let modulus = big_pow(prime, precision);
        let inv = inverse_mod(q.denom(), &modulus).ok_or_else(|| Error::NotIntegral {
            value: q.to_string(),
            prime,
        })?;
        Ok(Self::new(prime, precision, &(q.numer() * inv)))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> BigInt {
        big_pow(self.prime, self.precision)
    }

    /// Symmetric representative in (-p^N/2, p^N/2].
    pub fn symmetric(&self) -> BigInt {
        let m = self.modulus();
        if &self.residue * 2 > m {
            &self.residue - m
        } else {
            self.residue.clone()
        }
    }

    /// Valuation, capped at the precision for zero residues.
    pub fn valuation(&self) -> u32 {
        if self.residue.is_zero() {
            self.precision
        } else {
            vp_int(&self.residue, self.prime)
        }
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.prime).is_zero()
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        assert!(precision <= self.precision, "cannot raise p-adic precision");
        Self::new(self.prime, precision, &self.residue)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = inverse_mod(&self.residue, &self.modulus()).ok_or_else(|| Error::NotUnit {
            value: self.residue.to_string(),
            prime: self.prime,
        })?;
        Ok(Self::new(self.prime, self.precision, &inv))
    }

    /// Exact division by p; loses one digit of precision.
    pub fn div_p(&self) -> Result<Self> {
        if !(&self.residue % self.prime).is_zero() {
            return Err(Error::Integrity(format!("{} is not divisible by {}", self.residue, self.prime)));
        }
        if self.precision < 2 {
            return Err(Error::Precision { needed: 2, available: self.precision });
        }
        Ok(Self::new(self.prime, self.precision - 1, &(&self.residue / self.prime)))
    }

    fn combine(&self, o: &Self) -> (u64, u32) {
        assert_eq!(self.prime, o.prime, "p-adic operands over different primes");
        (self.prime, self.precision.min(o.precision))
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, o: PadicInt) -> PadicInt {
        let (p, n) = self.combine(&o);
        PadicInt::new(p, n, &(self.residue + o.residue))
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, o: PadicInt) -> PadicInt {
        let (p, n) = self.combine(&o);
        PadicInt::new(p, n, &(self.residue - o.residue))
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, o: PadicInt) -> PadicInt {
        let (p, n) = self.combine(&o);
        PadicInt::new(p, n, &(self.residue * o.residue))
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::new(self.prime, self.precision, &-self.residue)
    }
}

impl CommRing for PadicInt {
    fn zero_like(&self) -> Self {
        PadicInt::new(self.prime, self.precision, &BigInt::zero())
    }
    fn one_like(&self) -> Self {
        PadicInt::new(self.prime, self.precision, &BigInt::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.residue.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        PadicInt::new(self.prime, self.precision, &(&self.residue * k))
    }
}

/// Units invert; non-units report `None`. Rational constants must be
/// p-integral.
impl Field for PadicInt {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        PadicInt::from_rational(self.prime, self.precision, q).expect("rational constant is not p-integral")
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.prime, self.precision)
    }
}

/// Number of terms of `sum (-1)^(n-1) z^n / n` needed for a result exact
/// modulo p^target when v_p(z) >= `val`: every term with index at least the
/// returned bound has valuation >= target.
pub fn log_term_bound(p: u64, val: u32, target: u32) -> u64 {
    let mut n: u64 = 1;
    // n*val - floor(log_p n) is nondecreasing in n for val >= 1 and bounds
    // n*val - v_p(n) from below.
    loop {
        if n as i64 * val as i64 - n.ilog(p) as i64 >= target as i64 {
            return n;
        }
        n += 1;
    }
}

/// p-adic logarithm of a principal unit, summed to precision `n`.
pub fn padic_log(u: &PadicInt, n: u32) -> Result<PadicInt> {
    let p = u.prime;
    if !((&u.residue - 1u32) % p).is_zero() {
        return Err(Error::LogDomain(p));
    }
    let target = n.min(u.precision);
    let z = &u.residue - 1u32;
    if z.is_zero() {
        return Ok(PadicInt::from_i64(p, target, 0));
    }
    let bound = log_term_bound(p, 1, target);
    let mut acc = BigInt::zero();
    let base_mod = big_pow(p, target);
    let work_mod = big_pow(p, target + bound.ilog(p));
    let mut zpow = BigInt::one();
    for k in 1..bound {
        let vk = vp_u64(k, p);
        let unit = k / num_traits::pow(p, vk as usize);
        zpow = (&zpow * &z).mod_floor(&work_mod);
        let reduced = zpow.mod_floor(&big_pow(p, target + vk)) / big_pow(p, vk);
        let inv = inverse_mod(&BigInt::from(unit), &base_mod).expect("unit part is invertible");
        let term = reduced * inv;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(PadicInt::new(p, target, &acc))
}

/// The root of x^2 - a x + p lying in pZ_p, to precision `n`.
pub fn hensel_quadratic_root(a: &BigInt, p: u64, n: u32) -> Result<PadicInt> {
    if (a % p).is_zero() {
        return Err(Error::Supersingular { prime: p, trace: a.to_i64().unwrap_or(0) });
    }
    let modulus = big_pow(p, n);
    let pb = BigInt::from(p);
    let mut r = BigInt::zero();
    // Newton from r = 0; f'(r) = 2r - a stays a unit.
    for _ in 0..=(n as usize + 1) {
        let f = &r * &r - a * &r + &pb;
        let df = BigInt::from(2) * &r - a;
        let inv = inverse_mod(&df, &modulus).expect("derivative is a unit at the root");
        let next = (&r - f * inv).mod_floor(&modulus);
        if next == r {
            break;
        }
        r = next;
    }
    Ok(PadicInt::new(p, n, &r))
}

/// Chinese remaindering of residues at distinct primes into a single
/// residue modulo the product of prime powers.
pub fn crt_combine(residues: &[PadicInt]) -> Option<(BigInt, BigInt)> {
    let mut by_prime: BTreeMap<u64, PadicInt> = BTreeMap::new();
    for r in residues {
        match by_prime.get(&r.prime) {
            None => {
                by_prime.insert(r.prime, r.clone());
            }
            Some(prev) => {
                let common = prev.precision.min(r.precision);
                if prev.with_precision(common) != r.with_precision(common) {
                    return None;
                }
                if r.precision > prev.precision {
                    by_prime.insert(r.prime, r.clone());
                }
            }
        }
    }
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for r in by_prime.values() {
        let mr = r.modulus();
        let inv = inverse_mod(&m, &mr)?;
        let t = ((&r.residue - &x) * inv).mod_floor(&mr);
        x += &m * t;
        m *= mr;
    }
    Some((x.mod_floor(&m), m))
}

pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_negative() {
        panic!("isqrt of negative");
    }
    n.sqrt()
}

/// Recover the rational with numerator and denominator bounded by
/// `bound` that is congruent to every residue.
///
/// The bound is capped at floor(sqrt((M-1)/2)) for the combined modulus M,
/// which is the range in which such a rational is unique.
pub fn rational_reconstruct(residues: &[PadicInt], bound: &BigInt) -> Option<BigRational> {
    let (r, m) = crt_combine(residues)?;
    let unique_cap = isqrt(&((&m - 1u32) / 2u32));
    let b = if bound < &unique_cap { bound.clone() } else { unique_cap };
    if b.is_zero() {
        return None;
    }
    // Half-extended Euclid on (m, r) tracking the cofactor of r.
    let (mut r0, mut r1) = (m.clone(), r);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > b {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > b {
        return None;
    }
    let candidate = BigRational::new(r1, t1);
    if candidate.numer().abs() > b || candidate.denom() > &b {
        return None;
    }
    for res in residues {
        match PadicInt::from_rational(res.prime, res.precision, &candidate) {
            Ok(img) if img == *res => {}
            _ => return None,
        }
    }
    Some(candidate)
}

/// Order of `a` in (Z/mZ)^*.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(m >= 1 && a.gcd(&m) == 1, "order of a non-unit");
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    k
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
