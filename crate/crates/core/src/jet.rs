//! Rings of δ-polynomials over the localized integers, prolongation of
//! affine presentations, and canonical lifts of points.
//!
//! Internally a δ-polynomial is an exact polynomial in the Frobenius
//! coordinates φ^i x_j, where φ^i = φ_{p_1}^{i_1}…φ_{p_d}^{i_d}. In these
//! coordinates δ_p is the ring map φ_p (an index shift) followed by a Fermat
//! quotient. The δ-generators D_i x_j = δ_{p_1}^{i_1}…δ_{p_d}^{i_d} x_j (the
//! operator of the largest prime applied first) are related to the Frobenius
//! coordinates by a triangular change of variables:
//! D_i x = φ^i x / p^i + (terms in φ^{i'} x with i' < i).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_p_local, PrimeSet};
use crate::delta::{delta_p_rational, eval_commutator};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::CommRing;

/// Element of Z_+^d with the componentwise partial order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, k: usize) -> Self {
        let mut v = vec![0; d];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise comparison.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus_unit(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiIndex(v)
    }

    pub fn minus_unit(&self, k: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[k] = v[k].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }

    /// All i ≤ r, first component varying fastest.
    pub fn below(r: &MultiIndex) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(r.dim())];
        for k in (0..r.dim()).rev() {
            let mut next = Vec::with_capacity(out.len() * (r.0[k] as usize + 1));
            for e in 0..=r.0[k] {
                for i in &out {
                    let mut v = i.0.clone();
                    v[k] = e;
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        // the loop above makes the last component fastest; reorder
        out.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
        out
    }

    /// ∏ p_k^{i_k}.
    pub fn prime_power(&self, primes: &PrimeSet) -> BigInt {
        let mut acc = BigInt::one();
        for (&p, &e) in primes.primes().iter().zip(&self.0) {
            acc *= num_traits::pow(BigInt::from(p), e as usize);
        }
        acc
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A coordinate on the jet ring: variable number and multi-index. Read as
/// φ^i x_j inside [`DeltaPolynomial`] and as D_i x_j in δ-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub var: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(var: usize, index: MultiIndex) -> Self {
        JetVar { var, index }
    }
}

pub type JetPoly = Poly<JetVar, BigRational>;

/// Polynomial over Z_(P) in the base variables x_j.
pub type BasePoly = Poly<usize, BigRational>;

/// A δ-polynomial stored in Frobenius coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaPolynomial {
    phi: JetPoly,
}

impl DeltaPolynomial {
    pub fn from_phi_coords(phi: JetPoly) -> Self {
        DeltaPolynomial { phi }
    }

    pub fn phi_coords(&self) -> &JetPoly {
        &self.phi
    }

    pub fn constant(c: BigRational) -> Self {
        DeltaPolynomial { phi: Poly::constant(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero()
    }

    pub fn pow(&self, e: u32) -> Self {
        DeltaPolynomial { phi: self.phi.pow(e) }
    }
}

impl Add for DeltaPolynomial {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DeltaPolynomial { phi: self.phi + o.phi }
    }
}

impl Sub for DeltaPolynomial {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        DeltaPolynomial { phi: self.phi - o.phi }
    }
}

impl Mul for DeltaPolynomial {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        DeltaPolynomial { phi: self.phi * o.phi }
    }
}

impl Neg for DeltaPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        DeltaPolynomial { phi: -self.phi }
    }
}

impl CommRing for DeltaPolynomial {
    fn zero_like(&self) -> Self {
        DeltaPolynomial { phi: Poly::zero() }
    }
    fn one_like(&self) -> Self {
        DeltaPolynomial { phi: Poly::one() }
    }
    fn is_zero_elem(&self) -> bool {
        self.phi.is_zero()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        DeltaPolynomial { phi: self.phi.scale(&BigRational::from_integer(k.clone())) }
    }
}

/// An affine presentation: named variables, relations over Z_(P) and a
/// prolongation order.
#[derive(Clone, Debug)]
pub struct JetPresentation {
    pub names: Vec<String>,
    pub relations: Vec<BasePoly>,
    pub order: MultiIndex,
}

/// Generators and prolonged relations of a jet ring, both in δ-coordinates.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub generators: Vec<(String, JetVar)>,
    pub relations: Vec<(String, JetPoly)>,
}

/// The ring A_0{x_1..x_n} of δ-polynomials for a fixed prime set.
pub struct JetRing {
    primes: PrimeSet,
    names: Vec<String>,
    // D_i x_0 in Frobenius coordinates
    delta_to_phi: Mutex<HashMap<MultiIndex, JetPoly>>,
    // φ^i x_0 in δ-coordinates
    phi_to_delta: Mutex<HashMap<MultiIndex, JetPoly>>,
}

impl fmt::Debug for JetRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetRing({}, {:?})", self.primes, self.names)
    }
}

fn rename_var(p: &JetPoly, var: usize) -> JetPoly {
    p.rename(|v| JetVar { var, index: v.index.clone() })
}

impl JetRing {
    pub fn new(primes: PrimeSet, names: Vec<String>) -> Self {
        JetRing { primes, names, delta_to_phi: Mutex::new(HashMap::new()), phi_to_delta: Mutex::new(HashMap::new()) }
    }

    /// One variable named `x`.
    pub fn univariate(primes: PrimeSet) -> Self {
        Self::new(primes, vec!["x".to_string()])
    }

    pub fn primes(&self) -> &PrimeSet {
        &self.primes
    }

    pub fn dim(&self) -> usize {
        self.primes.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn check_index(&self, i: &MultiIndex) -> Result<()> {
        if i.dim() != self.dim() {
            return Err(Error::Invalid(format!("multi-index {i} has length {}, expected {}", i.dim(), self.dim())));
        }
        Ok(())
    }

    fn prime_slot(&self, p: u64) -> Result<usize> {
        self.primes.index_of(p).ok_or_else(|| Error::Invalid(format!("prime {p} is not in {}", self.primes)))
    }

    /// The base variable x_j.
    pub fn var(&self, j: usize) -> DeltaPolynomial {
        DeltaPolynomial { phi: Poly::var(JetVar::new(j, MultiIndex::zero(self.dim()))) }
    }

    /// φ^i x_j.
    pub fn phi_var(&self, j: usize, i: MultiIndex) -> DeltaPolynomial {
        DeltaPolynomial { phi: Poly::var(JetVar::new(j, i)) }
    }

    /// The generator D_i x_j.
    pub fn generator(&self, j: usize, i: &MultiIndex) -> DeltaPolynomial {
        DeltaPolynomial { phi: rename_var(&self.generator_in_phi(i), j) }
    }

    pub fn from_base(&self, f: &BasePoly) -> DeltaPolynomial {
        let d = self.dim();
        DeltaPolynomial { phi: f.rename(|&j| JetVar::new(j, MultiIndex::zero(d))) }
    }

    fn generator_in_phi(&self, i: &MultiIndex) -> JetPoly {
        if let Some(p) = self.delta_to_phi.lock().unwrap().get(i) {
            return p.clone();
        }
        let out = match i.first_nonzero() {
            None => Poly::var(JetVar::new(0, i.clone())),
            Some(k) => {
                let prev = DeltaPolynomial { phi: self.generator_in_phi(&i.minus_unit(k).unwrap()) };
                self.delta_at_slot(&prev, k).phi
            }
        };
        self.delta_to_phi.lock().unwrap().insert(i.clone(), out.clone());
        out
    }

    fn phi_in_delta(&self, i: &MultiIndex) -> JetPoly {
        if let Some(p) = self.phi_to_delta.lock().unwrap().get(i) {
            return p.clone();
        }
        let top = JetVar::new(0, i.clone());
        let out = if i.is_zero() {
            Poly::var(top)
        } else {
            let d_i = self.generator_in_phi(i);
            let lead_mono: Monomial<JetVar> = vec![(top.clone(), 1)];
            let lead = d_i.coeff(&lead_mono);
            let expected = BigRational::new(BigInt::one(), i.prime_power(&self.primes));
            assert_eq!(lead, expected, "generator {i} has an unexpected leading coefficient");
            let rest = &d_i - &Poly::monomial(lead_mono, lead.clone());
            assert!(
                rest.terms().all(|(m, _)| m.iter().all(|(v, _)| v.index != *i)),
                "generator {i} is not linear in its top Frobenius coordinate"
            );
            let rest_delta = rest.substitute(|v| self.phi_in_delta(&v.index));
            (&Poly::var(top) - &rest_delta).scale(&lead.recip())
        };
        self.phi_to_delta.lock().unwrap().insert(i.clone(), out.clone());
        out
    }

    /// Rewrite in δ-coordinates.
    pub fn to_delta_coords(&self, f: &DeltaPolynomial) -> JetPoly {
        f.phi.substitute(|v| rename_var(&self.phi_in_delta(&v.index), v.var))
    }

    /// Read a polynomial in δ-coordinates.
    pub fn from_delta_coords(&self, g: &JetPoly) -> Result<DeltaPolynomial> {
        for v in g.variables() {
            self.check_index(&v.index)?;
        }
        Ok(DeltaPolynomial { phi: g.substitute(|v| rename_var(&self.generator_in_phi(&v.index), v.var)) })
    }

    /// Whether every coefficient of the δ-coordinate expansion is P-local.
    pub fn is_p_local(&self, f: &DeltaPolynomial) -> bool {
        self.to_delta_coords(f).terms().all(|(_, c)| is_p_local(c, &self.primes))
    }

    fn frobenius_at_slot(&self, f: &DeltaPolynomial, k: usize) -> DeltaPolynomial {
        DeltaPolynomial { phi: f.phi.rename(|v| JetVar::new(v.var, v.index.plus_unit(k))) }
    }

    fn delta_at_slot(&self, f: &DeltaPolynomial, k: usize) -> DeltaPolynomial {
        let p = self.primes.primes()[k];
        let diff = &self.frobenius_at_slot(f, k).phi - &f.phi.pow(p as u32);
        let inv_p = BigRational::new(BigInt::one(), BigInt::from(p));
        DeltaPolynomial { phi: diff.scale(&inv_p) }
    }

    /// The Frobenius lift φ_p: shifts every coordinate index by e_p.
    pub fn frobenius(&self, f: &DeltaPolynomial, p: u64) -> Result<DeltaPolynomial> {
        Ok(self.frobenius_at_slot(f, self.prime_slot(p)?))
    }

    /// δ_p f = (φ_p f − f^p)/p.
    pub fn apply_delta(&self, f: &DeltaPolynomial, p: u64) -> Result<DeltaPolynomial> {
        Ok(self.delta_at_slot(f, self.prime_slot(p)?))
    }

    /// δ_p f, verifying that the result stays in A_0{x}.
    pub fn apply_delta_checked(&self, f: &DeltaPolynomial, p: u64) -> Result<DeltaPolynomial> {
        let out = self.apply_delta(f, p)?;
        if !self.is_p_local(&out) {
            return Err(Error::Integrity(format!("δ_{p} left the ring of δ-polynomials over Z_(P)")));
        }
        Ok(out)
    }

    /// δ_{p_1}^{i_1}…δ_{p_d}^{i_d} f, the largest prime applied first.
    pub fn apply_word(&self, f: &DeltaPolynomial, i: &MultiIndex) -> Result<DeltaPolynomial> {
        self.check_index(i)?;
        let mut out = f.clone();
        for k in (0..self.dim()).rev() {
            for _ in 0..i.components()[k] {
                out = self.delta_at_slot(&out, k);
            }
        }
        Ok(out)
    }

    /// C_{p,q}(f, δ_p f, δ_q f).
    pub fn commutator_term(&self, f: &DeltaPolynomial, p: u64, q: u64) -> Result<DeltaPolynomial> {
        let dp = self.apply_delta(f, p)?;
        let dq = self.apply_delta(f, q)?;
        eval_commutator(p, q, f, &dp, &dq)
    }

    /// Human-readable name of D_i x_j, e.g. `δ_3δ_5^2x`.
    pub fn generator_name(&self, v: &JetVar) -> String {
        let mut s = String::new();
        for (&p, &e) in self.primes.primes().iter().zip(v.index.components()) {
            match e {
                0 => {}
                1 => s.push_str(&format!("δ_{p}")),
                _ => s.push_str(&format!("δ_{p}^{e}")),
            }
        }
        s.push_str(self.names.get(v.var).map(String::as_str).unwrap_or("x"));
        s
    }

    /// Render a δ-coordinate polynomial with generator names.
    pub fn format_delta_poly(&self, g: &JetPoly) -> String {
        if g.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in g.terms() {
            let mut factors = Vec::new();
            for (v, e) in m {
                let name = self.generator_name(v);
                factors.push(if *e == 1 { name } else { format!("({name})^{e}") });
            }
            let body = factors.join("*");
            parts.push(match (body.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => body,
                (false, false) => format!("{c}*{body}"),
            });
        }
        parts.join(" + ")
    }

    /// Generators D_i x_j and relations D_i f for i ≤ r.
    pub fn jet_generators(&self, pres: &JetPresentation) -> Result<Prolongation> {
        self.check_index(&pres.order)?;
        let indices = MultiIndex::below(&pres.order);
        let mut generators = Vec::new();
        for i in &indices {
            for j in 0..pres.names.len() {
                let v = JetVar::new(j, i.clone());
                generators.push((self.generator_name(&v), v));
            }
        }
        let mut relations = Vec::new();
        for (n, f) in pres.relations.iter().enumerate() {
            let base = self.from_base(f);
            for i in &indices {
                let g = self.apply_word(&base, i)?;
                let mut label = String::new();
                for (&p, &e) in self.primes.primes().iter().zip(i.components()) {
                    match e {
                        0 => {}
                        1 => label.push_str(&format!("δ_{p}")),
                        _ => label.push_str(&format!("δ_{p}^{e}")),
                    }
                }
                label.push_str(&format!("f{n}"));
                relations.push((label, self.to_delta_coords(&g)));
            }
        }
        Ok(Prolongation { generators, relations })
    }

    /// ∏_{i ≤ r} φ^i(f).
    pub fn jet_localizer(&self, f: &BasePoly, r: &MultiIndex) -> Result<DeltaPolynomial> {
        self.check_index(r)?;
        let base = self.from_base(f);
        let mut acc = DeltaPolynomial { phi: Poly::one() };
        for i in MultiIndex::below(r) {
            let shifted = DeltaPolynomial { phi: base.phi.rename(|v| JetVar::new(v.var, i.clone())) };
            acc = acc * shifted;
        }
        Ok(acc)
    }

    /// Evaluate a δ-coordinate polynomial at the canonical lift of a point.
    pub fn eval_at_lift(&self, g: &JetPoly, point: &[BigRational]) -> Result<BigRational> {
        let mut values: HashMap<JetVar, BigRational> = HashMap::new();
        for v in g.variables() {
            let a = point.get(v.var).ok_or_else(|| Error::Invalid(format!("point has no coordinate {}", v.var)))?;
            values.insert(v.clone(), delta_word_rational(a, &v.index, &self.primes)?);
        }
        Ok(g.eval(|v| values[v].clone(), &BigRational::one(), Clone::clone))
    }
}

fn delta_word_rational(a: &BigRational, i: &MultiIndex, primes: &PrimeSet) -> Result<BigRational> {
    let mut out = a.clone();
    for k in (0..i.dim()).rev() {
        for _ in 0..i.components()[k] {
            out = delta_p_rational(&out, primes.primes()[k])?;
        }
    }
    Ok(out)
}

/// Coordinates δ^i a of the canonical lift of a Z_(P)-point, for i ≤ r in
/// enumeration order; the inner vectors run over the point's coordinates.
pub fn canonical_lift(point: &[BigRational], r: &MultiIndex, primes: &PrimeSet) -> Result<Vec<Vec<BigRational>>> {
    if r.dim() != primes.len() {
        return Err(Error::Invalid(format!("multi-index {r} does not match {primes}")));
    }
    for a in point {
        if !is_p_local(a, primes) {
            return Err(Error::NotIntegral { value: a.to_string(), prime: primes.primes()[0] });
        }
    }
    MultiIndex::below(r)
        .iter()
        .map(|i| point.iter().map(|a| delta_word_rational(a, i, primes)).collect())
        .collect()
}

/// Exact zero test of δ_pδ_q f − δ_qδ_p f − C_{p,q}(f, δ_p f, δ_q f).
pub fn commutation_defect(ring: &JetRing, f: &DeltaPolynomial, p: u64, q: u64) -> Result<DeltaPolynomial> {
    let dp = ring.apply_delta(f, p)?;
    let dq = ring.apply_delta(f, q)?;
    let lhs = ring.apply_delta(&dq, p)? - ring.apply_delta(&dp, q)?;
    let rhs = eval_commutator(p, q, f, &dp, &dq)?;
    Ok(lhs - rhs)
}

impl Zero for DeltaPolynomial {
    fn zero() -> Self {
        DeltaPolynomial { phi: Poly::zero() }
    }
    fn is_zero(&self) -> bool {
        self.phi.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn ps(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.to_vec()).unwrap()
    }

    fn dv(i: &[u32]) -> JetPoly {
        Poly::var(JetVar::new(0, MultiIndex::new(i.to_vec())))
    }

    #[test]
    fn enumeration_order() {
        let got: Vec<_> = MultiIndex::below(&MultiIndex::new(vec![1, 1])).into_iter().map(|i| i.0).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(MultiIndex::below(&MultiIndex::new(vec![2, 1, 1])).len(), 12);
        assert!(MultiIndex::new(vec![1, 0]).le(&MultiIndex::new(vec![1, 2])));
        assert!(!MultiIndex::new(vec![2, 0]).le(&MultiIndex::new(vec![1, 2])));
    }

    #[test]
    fn delta_of_square() {
        let ring = JetRing::univariate(ps(&[3]));
        let x = ring.var(0);
        let d = ring.apply_delta(&x.pow(2), 3).unwrap();
        let expected = &(&dv(&[0]).pow(3) * &dv(&[1])).scale(&int(2)) + &dv(&[1]).pow(2).scale(&int(3));
        assert_eq!(ring.to_delta_coords(&d), expected);
        assert_eq!(ring.to_delta_coords(&ring.apply_delta(&x, 3).unwrap()), dv(&[1]));
    }

    #[test]
    fn delta_of_constant() {
        let ring = JetRing::univariate(ps(&[3, 5]));
        let c = DeltaPolynomial::constant(rat(1, 2));
        let d = ring.apply_delta(&c, 5).unwrap();
        assert_eq!(ring.to_delta_coords(&d), Poly::constant(delta_p_rational(&rat(1, 2), 5).unwrap()));
    }

    #[test]
    fn coordinate_round_trip() {
        let ring = JetRing::univariate(ps(&[3, 5]));
        for i in MultiIndex::below(&MultiIndex::new(vec![1, 1])) {
            let g = dv(i.components());
            let f = ring.from_delta_coords(&g).unwrap();
            assert_eq!(ring.to_delta_coords(&f), g, "index {i}");
        }
        let g = &(&dv(&[1, 0]) * &dv(&[0, 1])) + &dv(&[1, 1]).scale(&rat(2, 7));
        assert_eq!(ring.to_delta_coords(&ring.from_delta_coords(&g).unwrap()), g);
    }

    #[test]
    fn generators_and_relations() {
        let ring = JetRing::univariate(ps(&[3, 5]));
        let pres = JetPresentation { names: vec!["x".into()], relations: vec![], order: MultiIndex::new(vec![1, 1]) };
        let names: Vec<String> = ring.jet_generators(&pres).unwrap().generators.into_iter().map(|g| g.0).collect();
        assert_eq!(names, vec!["x", "δ_3x", "δ_5x", "δ_3δ_5x"]);

        let x: BasePoly = Poly::var(0);
        let pres = JetPresentation { names: vec!["x".into()], relations: vec![x], order: MultiIndex::new(vec![1, 0]) };
        let rels = ring.jet_generators(&pres).unwrap().relations;
        assert_eq!(rels.len(), 2);
        assert_eq!(rels[0].1, dv(&[0, 0]));
        assert_eq!(rels[1].1, dv(&[1, 0]));
    }

    #[test]
    fn canonical_lift_of_two() {
        let lift = canonical_lift(&[int(2)], &MultiIndex::new(vec![1, 1]), &ps(&[3, 5])).unwrap();
        let flat: Vec<BigRational> = lift.into_iter().flatten().collect();
        assert_eq!(flat, vec![int(2), int(-2), int(-6), int(70)]);
        let ones = canonical_lift(&[int(1)], &MultiIndex::new(vec![2, 1]), &ps(&[3, 5])).unwrap();
        assert!(ones.iter().skip(1).all(|v| v[0].is_zero()));
    }

    #[test]
    fn localizer_examples() {
        let ring = JetRing::univariate(ps(&[3]));
        let x: BasePoly = Poly::var(0);
        let l = ring.jet_localizer(&x, &MultiIndex::new(vec![1])).unwrap();
        let expected = &dv(&[0]) * &(&dv(&[0]).pow(3) + &dv(&[1]).scale(&int(3)));
        assert_eq!(ring.to_delta_coords(&l), expected);
        let one = ring.jet_localizer(&Poly::one(), &MultiIndex::new(vec![2])).unwrap();
        assert_eq!(one.phi_coords(), &Poly::one());
    }

    #[test]
    fn commutation_on_monomials() {
        let ring = JetRing::univariate(ps(&[3, 5]));
        let x = ring.var(0);
        for f in [x.clone(), x.pow(2) + DeltaPolynomial::constant(int(1)), x.pow(3) - x.clone()] {
            assert!(commutation_defect(&ring, &f, 3, 5).unwrap().is_zero());
        }
    }
}
