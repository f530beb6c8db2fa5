//! JSON and CSV forms. Integers are decimal strings and object keys are
//! sorted, so output is byte-for-byte reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::PrimeSet;
use crate::character::{symbol_of_series, Character, DiracComponent, Group};
use crate::cyclotomic::residues_to_strings;
use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::evaluation::EvaluationResult;
use crate::series::TruncSeries;
use crate::symbol::SymbolPoly;

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: usize,
    pub order: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTermJson {
    pub n: u64,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiracJson {
    pub prime: u64,
    pub ode_symbol: Vec<SymbolTermJson>,
    pub cross_symbol: Vec<SymbolTermJson>,
    pub descriptor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<String>>,
    pub primes: Vec<u64>,
    #[serde(default)]
    pub order: Vec<u32>,
    /// Absent symbols are recovered from the series.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Vec<SymbolTermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dirac: Vec<DiracJson>,
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Parse(format!("invalid integer {s:?}")))
}

fn rational(num: &str, den: &str) -> Result<Q> {
    let d = parse_big(den)?;
    if d == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Q::new(parse_big(num)?, d))
}

pub fn series_to_json(s: &TruncSeries<Q>) -> SeriesJson {
    SeriesJson {
        vars: s.nvars(),
        order: s.order(),
        terms: s
            .terms_graded()
            .into_iter()
            .map(|(e, c)| TermJson { exp: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
            .collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> Result<TruncSeries<Q>> {
    if !(1..=3).contains(&j.vars) {
        return Err(Error::Parse(format!("series must have 1 to 3 variables, got {}", j.vars)));
    }
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exp.len() != j.vars {
            return Err(Error::Parse(format!("exponent {:?} does not have {} entries", t.exp, j.vars)));
        }
        terms.push((t.exp.clone(), rational(&t.num, &t.den)?));
    }
    Ok(TruncSeries::from_terms(j.vars, j.order, terms))
}

pub fn symbol_to_json(s: &SymbolPoly<Q>) -> Vec<SymbolTermJson> {
    s.terms()
        .map(|(&n, c)| SymbolTermJson { n, num: c.numer().to_string(), den: c.denom().to_string() })
        .collect()
}

pub fn symbol_from_json(j: &[SymbolTermJson]) -> Result<SymbolPoly<Q>> {
    let mut terms = Vec::with_capacity(j.len());
    for t in j {
        if t.n == 0 {
            return Err(Error::Parse("symbol index must be positive".into()));
        }
        terms.push((t.n, rational(&t.num, &t.den)?));
    }
    Ok(SymbolPoly::from_terms(terms))
}

fn curve_to_json(e: &WeierstrassCurve) -> Vec<String> {
    e.coeffs().iter().map(|c| c.to_string()).collect()
}

fn curve_from_json(c: &[String]) -> Result<WeierstrassCurve> {
    if c.len() != 5 {
        return Err(Error::Parse("a curve has five coefficients".into()));
    }
    let mut v = Vec::with_capacity(5);
    for s in c {
        v.push(crate::scalar::parse_rational(s).ok_or_else(|| Error::Parse(format!("invalid coefficient {s:?}")))?);
    }
    let [c1, c2, c3, c4, c6]: [Q; 5] = v.try_into().expect("five coefficients");
    let e = WeierstrassCurve::new(c1, c2, c3, c4, c6);
    if e.is_singular() {
        return Err(Error::SingularCurve);
    }
    Ok(e)
}

fn dirac_to_json(d: &DiracComponent) -> DiracJson {
    DiracJson {
        prime: d.prime,
        ode_symbol: symbol_to_json(&d.ode_symbol),
        cross_symbol: symbol_to_json(&d.cross_symbol),
        descriptor: d.descriptor.clone(),
    }
}

pub fn character_to_json(c: &Character) -> CharacterJson {
    CharacterJson {
        group: c.group.name().to_string(),
        curve: match &c.group {
            Group::Elliptic(e) => Some(curve_to_json(e)),
            _ => None,
        },
        primes: c.primes.primes().to_vec(),
        order: c.order.components().to_vec(),
        symbol: Some(symbol_to_json(&c.symbol)),
        series: Some(series_to_json(&c.series)),
        dirac: c.dirac.iter().map(dirac_to_json).collect(),
    }
}

/// Rebuild a character. The symbol wins when both are given, and the series
/// must then agree with it; a series alone is deconvolved into a symbol.
/// P-locality is not checked here so that non-characters reach the
/// decomposition step and are rejected there.
pub fn character_from_json(j: &CharacterJson) -> Result<Character> {
    let group = match (j.group.as_str(), &j.curve) {
        ("ga", _) => Group::Ga,
        ("gm", _) => Group::Gm,
        ("ell", Some(c)) => Group::Elliptic(curve_from_json(c)?),
        ("ell", None) => return Err(Error::Parse("elliptic character without a curve".into())),
        (g, _) => return Err(Error::Parse(format!("unknown group {g:?}"))),
    };
    let primes = PrimeSet::new(j.primes.clone())?;
    let series = j.series.as_ref().map(series_from_json).transpose()?;
    if series.as_ref().is_some_and(|s| s.nvars() != 1) {
        return Err(Error::Parse("a character series has one variable".into()));
    }
    let order = series.as_ref().map_or(2, TruncSeries::order).max(2);
    let symbol = match (&j.symbol, &series) {
        (Some(s), _) => symbol_from_json(s)?,
        (None, Some(f0)) => symbol_of_series(f0, &group, &primes)?,
        (None, None) => return Err(Error::Parse("character needs a symbol or a series".into())),
    };
    let mut c = Character::from_symbol_unchecked(group, &primes, symbol, order)?;
    if let Some(f0) = series {
        if f0 != c.series {
            return Err(Error::Integrity("series does not match the symbol".into()));
        }
    }
    c.dirac = j
        .dirac
        .iter()
        .map(|d| {
            Ok(DiracComponent {
                prime: d.prime,
                ode_symbol: symbol_from_json(&d.ode_symbol)?,
                cross_symbol: symbol_from_json(&d.cross_symbol)?,
                descriptor: d.descriptor.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(c)
}

/// Per-prime values as residues in [0, p^N) in the power basis of Z[ζ_m].
pub fn evaluation_to_json(r: &EvaluationResult) -> Value {
    let comps: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            serde_json::json!({
                "prime": c.prime,
                "precision": c.precision,
                "working_precision": c.working_precision,
                "scale": c.scale.to_string(),
                "value": residues_to_strings(c.value.coeffs()),
                "zero": c.is_zero(),
            })
        })
        .collect();
    serde_json::json!({ "components": comps, "zero": r.is_zero() })
}

/// Serialize any value with sorted keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(v: &T) -> Result<String> {
    let value = serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// One row per coefficient: exponents, numerator, denominator.
pub fn series_to_csv(s: &TruncSeries<Q>) -> String {
    let names: Vec<String> = (1..=s.nvars()).map(|k| format!("e{k}")).collect();
    let mut out = format!("{},num,den\n", names.join(","));
    for (e, c) in s.terms_graded() {
        let exps: Vec<String> = e.iter().map(u32::to_string).collect();
        out.push_str(&format!("{},{},{}\n", exps.join(","), c.numer(), c.denom()));
    }
    out
}

pub fn symbol_to_csv(s: &SymbolPoly<Q>) -> String {
    let mut out = String::from("n,num,den\n");
    for (n, c) in s.terms() {
        out.push_str(&format!("{n},{},{}\n", c.numer(), c.denom()));
    }
    out
}
