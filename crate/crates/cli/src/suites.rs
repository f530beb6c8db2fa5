//! Seeded property suites behind `deltap verify`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use deltap::arith::{vp_valuation, Valuation};
use deltap::character::{
    build_elliptic_character, build_ga_character, build_gm_character, check_additivity, decompose_symbol,
    first_nonintegral_after_remainder, honda_integrality_check, symbol_of_series, Character, Group,
};
use deltap::cyclotomic::{CyclotomicElement, CyclotomicField};
use deltap::delta::{check_delta_ring_axioms, delta_p_int};
use deltap::elliptic::WeierstrassCurve;
use deltap::jet::{canonical_lift, commutation_defect, DeltaPolynomial, JetRing, MultiIndex};
use deltap::{PrimeSet, Rational, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Property {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl Property {
    fn new(name: impl Into<String>, passed: bool, cases: usize, detail: impl Into<String>) -> Self {
        Property { name: name.into(), passed, cases, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub properties: Vec<Property>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with |numerator| ≤ height and a denominator ≤ height prime to P.
pub fn p_local_rational<R: Rng>(rng: &mut R, primes: &PrimeSet, height: i64) -> Rational {
    let num = rng.gen_range(-height..=height);
    let den = loop {
        let d = rng.gen_range(1..=height.max(1));
        if primes.primes().iter().all(|&p| d % p as i64 != 0) {
            break d;
        }
    };
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// P-smooth integers in [1, max_n].
pub fn smooth_support(primes: &PrimeSet, max_n: u64) -> Vec<u64> {
    (1..=max_n).filter(|&n| primes.is_smooth(n)).collect()
}

/// A nonzero symbol with P-local coefficients supported on n ≤ max_n.
pub fn random_symbol<R: Rng>(rng: &mut R, primes: &PrimeSet, max_n: u64) -> Symbol {
    let support = smooth_support(primes, max_n);
    loop {
        let k = rng.gen_range(1..=4.min(support.len()));
        let terms = support.choose_multiple(rng, k).map(|&n| (n, p_local_rational(rng, primes, 12))).collect::<Vec<_>>();
        let s = Symbol::from_terms(terms);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A nonzero symbol supported on P-smooth n prime to p, whose lowest term has
/// a coefficient of p-adic valuation below 3.
pub fn random_remainder<R: Rng>(rng: &mut R, primes: &PrimeSet, p: u64, max_n: u64) -> Symbol {
    let support: Vec<u64> = smooth_support(primes, max_n).into_iter().filter(|n| n % p != 0).collect();
    loop {
        let k = rng.gen_range(1..=3.min(support.len()));
        let terms = support.choose_multiple(rng, k).map(|&n| (n, p_local_rational(rng, primes, 30))).collect::<Vec<_>>();
        let s = Symbol::from_terms(terms);
        let lowest = s.terms().next().map(|(_, c)| c.clone());
        if let Some(c) = lowest {
            if matches!(vp_valuation(&c, p), Valuation::Finite(v) if v < 3) {
                return s;
            }
        }
    }
}

pub fn random_cyclotomic<R: Rng>(rng: &mut R, field: &std::sync::Arc<CyclotomicField>, primes: &PrimeSet) -> CyclotomicElement {
    let coeffs = (0..field.degree()).map(|_| p_local_rational(rng, primes, 9)).collect();
    CyclotomicElement::new(field, coeffs)
}

/// Sum of up to three terms c·g or c·g·h over the generators x and δ_p x.
pub fn random_delta_poly<R: Rng>(rng: &mut R, ring: &JetRing) -> DeltaPolynomial {
    let d = ring.dim();
    let mut gens = vec![ring.generator(0, &MultiIndex::zero(d))];
    gens.extend((0..d).map(|k| ring.generator(0, &MultiIndex::unit(d, k))));
    let mut out = DeltaPolynomial::constant(p_local_rational(rng, ring.primes(), 5));
    for _ in 0..rng.gen_range(1..=3) {
        let mut term = DeltaPolynomial::constant(p_local_rational(rng, ring.primes(), 5));
        for _ in 0..rng.gen_range(1..=2) {
            term = term * gens.choose(rng).expect("at least one generator").clone();
        }
        out = out + term;
    }
    out
}

fn integer_samples(seed: u64, count: usize) -> Vec<Rational> {
    let mut r = rng(seed);
    (0..count).map(|_| Rational::from_integer(BigInt::from(r.gen_range(-10_000i64..=10_000)))).collect()
}

/// δ-ring identities on random integers and random elements of Z_(P)[ζ_m].
pub fn axioms(primes: &PrimeSet, seed: u64, int_samples: usize, cyc_samples: usize, m: u64) -> deltap::Result<SuiteReport> {
    let mut properties = Vec::new();
    let ints = integer_samples(seed, int_samples);
    for c in check_delta_ring_axioms(&ints, primes)?.checks {
        properties.push(Property::new(format!("integers: {}", c.identity), c.passed(), c.cases, format!("{} failures", c.failures)));
    }
    let field = CyclotomicField::for_primes(m, primes)?;
    let mut r = rng(seed ^ 0x5eed);
    let cyc: Vec<CyclotomicElement> = (0..cyc_samples).map(|_| random_cyclotomic(&mut r, &field, primes)).collect();
    for c in check_delta_ring_axioms(&cyc, primes)?.checks {
        properties.push(Property::new(format!("Z_(P)[zeta_{m}]: {}", c.identity), c.passed(), c.cases, format!("{} failures", c.failures)));
    }
    Ok(SuiteReport { suite: "axioms".into(), seed, properties })
}

pub fn fundamental_character(group: &str, primes: &PrimeSet, curve: Option<&WeierstrassCurve>, order: u32) -> deltap::Result<Character> {
    match group {
        "ga" => build_ga_character(Symbol::one(), primes, order),
        "gm" => build_gm_character(primes, order),
        "ell" => {
            let e = curve.ok_or_else(|| deltap::Error::Invalid("the elliptic group needs a curve".into()))?;
            build_elliptic_character(e, primes, order)
        }
        g => Err(deltap::Error::Invalid(format!("unknown group {g:?}"))),
    }
}

/// Additivity of the fundamental character and the group-law axioms.
pub fn additivity(group: &str, primes: &PrimeSet, curve: Option<&WeierstrassCurve>, depth: u32, seed: u64) -> deltap::Result<SuiteReport> {
    let c = fundamental_character(group, primes, curve, depth + 1)?;
    let additive = check_additivity(&c, depth)?;
    let law = c.group.formal_group(depth + 1)?;
    let assoc_depth = depth.min(8);
    let properties = vec![
        Property::new(format!("f0(G(T1,T2)) = f0(T1) + f0(T2) through degree {depth}"), additive, 1, c.symbol.to_string()),
        Property::new(format!("G associative through degree {assoc_depth}"), law.is_associative_through(assoc_depth)?, 1, String::new()),
        Property::new(format!("G commutative and unital through degree {depth}"), law.is_commutative_unital_through(depth)?, 1, String::new()),
    ];
    Ok(SuiteReport { suite: "additivity".into(), seed, properties })
}

/// P-locality of the fundamental character's coefficients below `order`.
pub fn integrality(group: &str, primes: &PrimeSet, curve: Option<&WeierstrassCurve>, order: u32, seed: u64) -> deltap::Result<SuiteReport> {
    let c = match fundamental_character(group, primes, curve, order) {
        Err(deltap::Error::Integrity(msg)) => {
            let p = Property::new(format!("coefficients P-local below T^{order}"), false, order as usize, msg);
            return Ok(SuiteReport { suite: "integrality".into(), seed, properties: vec![p] });
        }
        other => other?,
    };
    let first = c.series.first_nonlocal(primes);
    let detail = match &first {
        Some((e, v)) => format!("T^{} has coefficient {v}", e[0]),
        None => format!("{} nonzero coefficients checked", c.series.len()),
    };
    let properties = vec![Property::new(format!("coefficients P-local below T^{order}"), first.is_none(), order as usize, detail)];
    Ok(SuiteReport { suite: "integrality".into(), seed, properties })
}

/// Honda integrality of (φ_p − u·p) ⋆ Σ a_n T^n/n, and its failure after
/// changing a_{p²}.
pub fn honda(curve: &WeierstrassCurve, p: u64, bound: u64, seed: u64) -> deltap::Result<SuiteReport> {
    let coeffs = curve.lseries_coefficients(bound.max(p * p))?;
    let report = honda_integrality_check(&coeffs, p, bound)?;
    let mut properties = vec![Property::new(
        format!("(phi_{p} - u*{p}) * f_E is {p}-integral through T^{bound}"),
        report.passed(),
        bound as usize,
        format!("u*{p} = {} mod {p}^{}", report.unit_root_companion, report.precision),
    )];
    if p * p <= bound {
        let n = p * p;
        let mutated = coeffs.with_mutation(n, coeffs.get(n) + 1);
        let m = honda_integrality_check(&mutated, p, bound)?;
        let detail = match m.first_failure {
            Some(j) => format!("first failure at T^{j}"),
            None => "mutation went unnoticed".into(),
        };
        properties.push(Property::new(format!("changing a_{n} breaks integrality"), !m.passed(), 1, detail));
    }
    Ok(SuiteReport { suite: "honda".into(), seed, properties })
}

/// Rigidity of the Euler-factor division for G_m, and the decomposition
/// round trip through the representing series.
pub fn claim2(primes: &PrimeSet, seed: u64, samples: usize) -> deltap::Result<SuiteReport> {
    let mut r = rng(seed);
    let mut properties = Vec::new();
    for &p in primes.primes() {
        let mut failures = Vec::new();
        for _ in 0..samples {
            let rem = random_remainder(&mut r, primes, p, 45);
            let lowest = *rem.terms().next().expect("nonzero remainder").0;
            let bound = (p * p * p * lowest) as u32;
            if first_nonintegral_after_remainder(&rem, p, bound + 1).is_none() {
                failures.push(rem.to_string());
            }
        }
        properties.push(Property::new(
            format!("nonzero remainder mod phi_{p} - {p} leaves a non-{p}-integral coefficient"),
            failures.is_empty(),
            samples,
            failures.first().cloned().unwrap_or_default(),
        ));
    }
    let psi = build_gm_character(primes, 2)?;
    let top = psi.symbol.max_index();
    let mut mismatches = Vec::new();
    for _ in 0..samples {
        let rho = random_symbol(&mut r, primes, 45);
        let order = (rho.max_index() * top + 1) as u32;
        let c = build_gm_character(primes, order)?.times(&rho)?;
        let recovered = symbol_of_series(&c.series, &Group::Gm, primes).and_then(|s| decompose_symbol(&s, &Group::Gm, primes));
        if recovered.as_ref().ok() != Some(&rho) {
            mismatches.push(rho.to_string());
        }
    }
    properties.push(Property::new(
        "decompose(rho * psi_m) = rho",
        mismatches.is_empty(),
        samples,
        mismatches.first().cloned().unwrap_or_default(),
    ));
    Ok(SuiteReport { suite: "claim2".into(), seed, properties })
}

/// δ-polynomial identities in the jet ring and the canonical lift of 2.
pub fn jets(primes: &PrimeSet, seed: u64, samples: usize) -> deltap::Result<SuiteReport> {
    let ring = JetRing::univariate(primes.clone());
    let mut r = rng(seed);
    let polys: Vec<DeltaPolynomial> = (0..samples).map(|_| random_delta_poly(&mut r, &ring)).collect();
    let mut properties = Vec::new();
    for &p in primes.primes() {
        let mut bad = 0;
        for f in &polys {
            if !ring.is_p_local(&ring.apply_delta(f, p)?) {
                bad += 1;
            }
        }
        properties.push(Property::new(format!("delta_{p} keeps coefficients P-local"), bad == 0, samples, format!("{bad} failures")));
    }
    for (i, &p) in primes.primes().iter().enumerate() {
        for &q in &primes.primes()[i + 1..] {
            // the defect has degree about p·q·deg f, so keep the inputs small
            let x = ring.var(0);
            let mut family = vec![x.clone()];
            if p * q <= 15 {
                family.push(x.pow(2));
            }
            for _ in 0..samples.min(4) {
                let a = DeltaPolynomial::constant(p_local_rational(&mut r, primes, 5));
                let b = DeltaPolynomial::constant(p_local_rational(&mut r, primes, 5));
                family.push(a * x.clone() + b);
            }
            let mut bad = 0;
            for f in &family {
                if !commutation_defect(&ring, f, p, q)?.is_zero() {
                    bad += 1;
                }
            }
            properties.push(Property::new(
                format!("delta_{p}delta_{q} - delta_{q}delta_{p} = C_{{{p},{q}}}"),
                bad == 0,
                family.len(),
                format!("{bad} failures"),
            ));
        }
    }
    let p = primes.primes()[0];
    let x = ring.var(0);
    let dx = ring.generator(0, &MultiIndex::unit(primes.len(), 0));
    let pc = DeltaPolynomial::constant(Rational::from_integer(BigInt::from(p)));
    let two = DeltaPolynomial::constant(Rational::from_integer(BigInt::from(2)));
    let expected = two * x.pow(p as u32) * dx.clone() + pc * dx.pow(2);
    properties.push(Property::new(
        format!("delta_{p}(x^2) = 2x^{p} delta_{p}x + {p}(delta_{p}x)^2"),
        ring.apply_delta(&x.pow(2), p)? == expected,
        1,
        String::new(),
    ));
    let ones = MultiIndex::new(vec![1; primes.len()]);
    let lift: Vec<Rational> = canonical_lift(&[Rational::from_integer(BigInt::from(2))], &ones, primes)?.into_iter().flatten().collect();
    let oracle = lift_oracle(2, &ones, primes);
    properties.push(Property::new(
        format!("canonical lift of 2 at r = {ones}"),
        lift == oracle,
        lift.len(),
        lift.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    ));
    Ok(SuiteReport { suite: "jets".into(), seed, properties })
}

/// δ-words of an integer by the integer Fermat quotient.
fn lift_oracle(a: i64, r: &MultiIndex, primes: &PrimeSet) -> Vec<Rational> {
    MultiIndex::below(r)
        .iter()
        .map(|i| {
            let mut v = BigInt::from(a);
            for k in (0..primes.len()).rev() {
                for _ in 0..i.components()[k] {
                    v = delta_p_int(&v, primes.primes()[k]);
                }
            }
            Rational::from_integer(v)
        })
        .collect()
}
