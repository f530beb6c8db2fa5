//! Exact arithmetic for Fermat-quotient operators over several primes.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: valuations, fixed-precision p-adic integers, p-adic log,
//!   Hensel lifting, Möbius function, rational reconstruction.
//! * [`delta`]: the universal polynomials C_p and C_{p,q} and Fermat
//!   quotients of rationals.
//! * [`cyclotomic`]: Q(ζ_m) and its unramified p-adic completions, with the
//!   Frobenius lifts ζ ↦ ζ^p.
//! * [`jet`]: rings of δ-polynomials, prolongation of presentations,
//!   canonical lifts.
//! * [`series`] and [`fgl`]: truncated power series, formal group laws,
//!   logarithms and exponentials.
//! * [`symbol`]: the commutative symbol ring acting on logarithms.
//! * [`elliptic`]: Weierstrass curves, point counts and L-series
//!   coefficients.
//! * [`character`]: construction, decomposition and verification of the
//!   fundamental characters on G_a, G_m and elliptic curves.
//! * [`evaluation`]: evaluation of characters on points over p-adic
//!   completions of cyclotomic rings and kernel tests.
//! * [`json`]: the JSON and CSV forms of series, symbols, characters and
//!   evaluation reports.
//!
//! Series and symbols are generic over a [`scalar::Scalar`] coefficient type.
//! All exact work uses [`Rational`]; float instantiations exist for quick
//! numerical inspection.

pub mod arith;
pub mod character;
pub mod cyclotomic;
pub mod delta;
pub mod elliptic;
pub mod error;
pub mod evaluation;
pub mod fgl;
pub mod jet;
pub mod json;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod symbol;

pub use arith::{PadicInt, PrimeSet, Valuation};
pub use error::{Error, Result};

/// Exact rationals; the localized rationals of a prime set are the values
/// whose denominators avoid that set (see [`arith::is_p_local`]).
pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;

/// Exact truncated power series.
pub type Series = series::TruncSeries<Rational>;
/// Floating-point truncated power series.
pub type FloatSeries = series::TruncSeries<f64>;
/// Exact symbol polynomial.
pub type Symbol = symbol::SymbolPoly<Rational>;
/// Exact formal group law.
pub type FormalGroup = fgl::FormalGroupLaw<Rational>;
/// Exact point on a Weierstrass curve over the rationals.
pub type RationalPoint = elliptic::CurvePoint<Rational>;
