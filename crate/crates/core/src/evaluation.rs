//! Evaluation of characters on points over Z_(P)[ζ_m], one p-adic component
//! per prime.
//!
//! For G_m the single-prime part is ψ_p(u) = Σ (−1)^{n−1} p^{n−1}/n (δ_p u/u^p)^n,
//! which sums to (1/p)·log(φ_p(u)/u^p). For a curve the point is first
//! multiplied by M = #Ẽ(F_{p^f}) so that it lies in the formal group, and the
//! value is (1/p)[l(t^{φ²}) − a_p l(t^φ) + p l(t)] for the parameter t of M·Q.
//! The remaining primes act through their Galois automorphisms.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{log_term_bound, multiplicative_order, rational_reconstruct, vp_int, PadicInt, PrimeSet};
use crate::character::{Character, Group};
use crate::cyclotomic::{CyclotomicElement, CyclotomicField, PadicCyclotomic};
use crate::elliptic::{to_formal_parameter, CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::fgl::{elliptic_logarithm, gm_logarithm};
use crate::scalar::CommRing;
use crate::series::TruncSeries;
use crate::symbol::{EulerDivisor, SymbolPoly};

type Q = BigRational;
type Symbol = SymbolPoly<Q>;

/// Extra p-adic digits carried through inner computations for a reported
/// precision `n`.
pub fn guard_digits(n: u32) -> u32 {
    n.div_ceil(2) + 4
}

fn padic_zero(field: &Arc<CyclotomicField>, p: u64, precision: u32) -> Result<PadicCyclotomic> {
    PadicCyclotomic::from_int(field, p, precision, &BigInt::zero())
}

pub fn is_zero_padic(v: &PadicCyclotomic) -> bool {
    v.coeffs().iter().all(Zero::is_zero)
}

/// Number of terms of a logarithm-type series needed for a value exact mod
/// p^target at an argument of positive valuation.
fn log_terms(p: u64, target: u32) -> u64 {
    log_term_bound(p, 1, target).max(2)
}

/// Digits needed on the argument: target plus the largest p-power that can
/// divide an index below the term bound.
pub fn required_precision(p: u64, target: u32) -> u32 {
    target + log_terms(p, target).ilog(p)
}

/// Σ c_n z^n for v_p(z) ≥ 1, exact mod p^target. The coefficients may carry
/// a denominator p^k with p^k | n, as every logarithm does.
pub fn eval_log_series(log: &TruncSeries<Q>, z: &PadicCyclotomic, target: u32) -> Result<PadicCyclotomic> {
    let p = z.prime();
    if !is_zero_padic(z) && z.valuation() < 1 {
        return Err(Error::NotInFormalGroup(p));
    }
    let terms = log_terms(p, target);
    if u64::from(log.order()) < terms {
        return Err(Error::Truncation(terms as usize));
    }
    let need = required_precision(p, target);
    if z.precision() < need {
        return Err(Error::Precision { needed: need, available: z.precision() });
    }
    let z = z.with_precision(need);
    let mut acc = padic_zero(z.field(), p, target)?;
    let mut zpow = z.one_like();
    for n in 1..terms {
        zpow = zpow * z.clone();
        let c = log.coeff1(n as u32);
        if c.is_zero() {
            continue;
        }
        let k = vp_int(c.denom(), p);
        let unit = Q::new(c.numer().clone(), c.denom() / crate::arith::big_pow(p, k));
        let mut term = zpow.scale_rational(&unit)?;
        for _ in 0..k {
            term = term.div_p()?;
        }
        acc = acc + term.with_precision(target);
    }
    Ok(acc)
}

/// ψ_p(u) mod p^target for a unit u of Z_p[ζ_m]/(p^W).
pub fn eval_gm_ode(u: &PadicCyclotomic, target: u32) -> Result<PadicCyclotomic> {
    let p = u.prime();
    if !u.is_unit() {
        return Err(Error::NotUnit { value: u.to_string(), prime: p });
    }
    let ratio = u.frobenius_lift(p)? * u.pow_u64(p).inverse()?;
    let z = ratio.clone() - ratio.one_like();
    let log = gm_logarithm::<Q>(log_terms(p, target + 1) as u32 + 1);
    eval_log_series(&log, &z, target + 1)?.div_p()
}

/// Σ c_n σ_n(v), the action of a symbol through Galois automorphisms.
pub fn apply_symbol(symbol: &Symbol, v: &PadicCyclotomic) -> Result<PadicCyclotomic> {
    let mut acc = padic_zero(v.field(), v.prime(), v.precision())?;
    for (&n, c) in symbol.terms() {
        acc = acc + v.galois(n)?.scale_rational(c)?;
    }
    Ok(acc)
}

/// The factor of the symbol in front of the single-prime operator at `p`:
/// Λ = η̄ · (1/p)(φ_p − p) for G_m and Λ = η̄ · (1/p)(φ_p² − a_p φ_p + p) for
/// a curve.
pub fn cross_symbol(c: &Character, p: u64) -> Result<Symbol> {
    let divisor = match &c.group {
        Group::Gm => EulerDivisor::Gm { p },
        Group::Elliptic(e) => EulerDivisor::Ell { p, a: e.count_points_ap(p)? },
        Group::Ga => return Err(Error::Invalid("G_a characters are evaluated directly".into())),
    };
    let (q, r) = c.symbol.divide_by_euler_factor(&divisor);
    if !r.is_zero() {
        return Err(Error::NotCharacter(format!("symbol {} is not divisible at {p}", c.symbol)));
    }
    Ok(q.scale(&Q::from_integer(BigInt::from(p))))
}

/// Per-prime components Q_k of a point of G_m(A_P).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelePoint {
    precision: u32,
    components: Vec<PadicCyclotomic>,
}

impl AdelePoint {
    pub fn from_components(components: Vec<PadicCyclotomic>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Invalid("empty adele point".into()))?;
        let m = first.field().order();
        let mut seen = Vec::new();
        for c in &components {
            if c.field().order() != m || seen.contains(&c.prime()) {
                return Err(Error::Invalid("components must share a ring and have distinct primes".into()));
            }
            if !c.is_unit() {
                return Err(Error::NotUnit { value: c.to_string(), prime: c.prime() });
            }
            seen.push(c.prime());
        }
        let precision = components.iter().map(PadicCyclotomic::precision).min().unwrap_or(0);
        Ok(AdelePoint { precision, components })
    }

    /// Reductions of one global unit.
    pub fn from_global(u: &CyclotomicElement, primes: &PrimeSet, precision: u32) -> Result<Self> {
        let comps = primes.primes().iter().map(|&p| u.to_padic(p, precision)).collect::<Result<Vec<_>>>()?;
        Self::from_components(comps)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn component(&self, p: u64) -> Option<&PadicCyclotomic> {
        self.components.iter().find(|c| c.prime() == p)
    }

    pub fn components(&self) -> &[PadicCyclotomic] {
        &self.components
    }

    /// Componentwise product; both points need the same primes.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let o = other.component(c.prime()).ok_or_else(|| Error::Invalid(format!("missing component at {}", c.prime())))?;
                Ok(c.clone() * o.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_components(comps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentValue {
    pub prime: u64,
    pub value: PadicCyclotomic,
    /// Digits guaranteed in `value`.
    pub precision: u32,
    /// Digits carried by the inner computation.
    pub working_precision: u32,
    /// The value is scale · ψ(Q_k); 1 for G_m.
    pub scale: BigInt,
}

impl ComponentValue {
    pub fn is_zero(&self) -> bool {
        is_zero_padic(&self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationResult {
    pub components: Vec<ComponentValue>,
}

impl EvaluationResult {
    pub fn component(&self, p: u64) -> Option<&ComponentValue> {
        self.components.iter().find(|c| c.prime == p)
    }

    /// Every component vanishes to its precision.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ComponentValue::is_zero)
    }

    pub fn all_nonzero(&self) -> bool {
        self.components.iter().all(|c| !c.is_zero())
    }
}

/// Values of a G_m character, exact mod p^n at every prime.
pub fn eval_gm_character(c: &Character, q: &AdelePoint, n: u32) -> Result<EvaluationResult> {
    if c.group != Group::Gm {
        return Err(Error::Invalid(format!("expected a G_m character, got {}", c.group)));
    }
    let mut components = Vec::new();
    for &p in c.primes.primes() {
        let u = q.component(p).ok_or_else(|| Error::Invalid(format!("point has no component at {p}")))?;
        let value = apply_symbol(&cross_symbol(c, p)?, &eval_gm_ode(u, n)?)?;
        components.push(ComponentValue { prime: p, value, precision: n, working_precision: u.precision(), scale: BigInt::one() });
    }
    Ok(EvaluationResult { components })
}

fn curve_of(c: &Character) -> Result<&WeierstrassCurve> {
    match &c.group {
        Group::Elliptic(e) => Ok(e),
        g => Err(Error::Invalid(format!("expected an elliptic character, got {g}"))),
    }
}

/// The p-component at a point of the formal group given by its parameter t.
pub fn eval_elliptic_at_parameter(c: &Character, t: &PadicCyclotomic, n: u32) -> Result<PadicCyclotomic> {
    let curve = curve_of(c)?;
    let p = t.prime();
    let a = curve.count_points_ap(p)?;
    let log = elliptic_logarithm::<Q>(curve, log_terms(p, n + 1) as u32 + 1)?;
    let t1 = t.frobenius_lift(p)?;
    let t2 = t1.frobenius_lift(p)?;
    let s = eval_log_series(&log, &t2, n + 1)? - eval_log_series(&log, &t1, n + 1)?.mul_int(&BigInt::from(a))
        + eval_log_series(&log, t, n + 1)?.mul_int(&BigInt::from(p));
    apply_symbol(&cross_symbol(c, p)?, &s.div_p()?)
}

fn field_of(point: &CurvePoint<CyclotomicElement>) -> Arc<CyclotomicField> {
    match point {
        CurvePoint::Affine { x, .. } => x.field().clone(),
        CurvePoint::Infinity => CyclotomicField::new(1),
    }
}

/// Values M_k · ψ(Q) of an elliptic character at a global point.
pub fn eval_elliptic_character(c: &Character, point: &CurvePoint<CyclotomicElement>, n: u32) -> Result<EvaluationResult> {
    let curve = curve_of(c)?;
    if !curve.contains(point) {
        return Err(Error::NotOnCurve);
    }
    let field = field_of(point);
    let m = field.order();
    let mut components = Vec::new();
    for &p in c.primes.primes() {
        let working = (n + guard_digits(n)).max(required_precision(p, n + 1));
        let f = multiplicative_order(p % m.max(1), m);
        let scale = curve.group_order_over_extension(p, f as u32)?;
        let multiple = curve.scalar_mul(&scale, point)?;
        let value = match multiple {
            CurvePoint::Infinity => padic_zero(&field, p, n)?,
            _ => eval_elliptic_at_parameter(c, &to_formal_parameter(&field, &multiple, p, working)?, n)?,
        };
        components.push(ComponentValue { prime: p, value, precision: n, working_precision: working, scale });
    }
    Ok(EvaluationResult { components })
}

/// A point given globally over Q(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalPoint {
    Gm(CyclotomicElement),
    Elliptic(CurvePoint<CyclotomicElement>),
}

/// Evaluate with the default guard digits.
pub fn evaluate(c: &Character, point: &GlobalPoint, n: u32) -> Result<EvaluationResult> {
    match point {
        GlobalPoint::Gm(u) => {
            let working = c
                .primes
                .primes()
                .iter()
                .map(|&p| required_precision(p, n + 1))
                .max()
                .unwrap_or(0)
                .max(n + guard_digits(n));
            eval_gm_character(c, &AdelePoint::from_global(u, &c.primes, working)?, n)
        }
        GlobalPoint::Elliptic(q) => eval_elliptic_character(c, q, n),
    }
}

/// Whether a global point has finite order: for G_m a root of unity in
/// Q(ζ_m), all of which satisfy u^{2m} = 1; for a curve k·Q = O with
/// k ≤ bound.
pub fn torsion_test(point: &GlobalPoint, group: &Group, bound: u64) -> Result<bool> {
    match (point, group) {
        (GlobalPoint::Gm(u), Group::Gm) => {
            let m = u.field().order();
            Ok(u.pow_u64(2 * m) == u.one_like())
        }
        (GlobalPoint::Elliptic(q), Group::Elliptic(e)) => Ok(e.torsion_order(q, bound)?.is_some()),
        _ => Err(Error::Invalid("point and group do not match".into())),
    }
}

/// A common rational value of the per-prime translation constants,
/// multiplied by `scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuationWitness {
    pub scale: BigInt,
    /// Power-basis coordinates in Q(ζ_m).
    pub value: Vec<BigRational>,
}

impl ContinuationWitness {
    pub fn is_zero(&self) -> bool {
        self.value.iter().all(Zero::is_zero)
    }
}

/// Rational reconstruction of the constants ψ_k(Q) across all primes, each
/// rescaled to the common multiple L of the per-prime scales. `None` means
/// no rational of height ≤ bound matches at this precision.
pub fn continuation_witness(c: &Character, point: &GlobalPoint, n: u32, bound: &BigInt) -> Result<Option<ContinuationWitness>> {
    let result = evaluate(c, point, n)?;
    let scale = result.components.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.scale));
    let degree = result.components.first().map_or(1, |v| v.value.coeffs().len());
    let mut value = Vec::with_capacity(degree);
    for j in 0..degree {
        let residues: Vec<PadicInt> = result
            .components
            .iter()
            .map(|v| PadicInt::new(v.prime, v.precision, &(&v.value.coeffs()[j] * (&scale / &v.scale))))
            .collect();
        match rational_reconstruct(&residues, bound) {
            Some(q) => value.push(q),
            None => return Ok(None),
        }
    }
    Ok(Some(ContinuationWitness { scale, value }))
}
