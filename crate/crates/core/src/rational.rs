//! Exact rational scalars and their text form.
//!
//! Every length, potential, mass and invariant in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. The text form is `p` for integers and `p/q`
//! otherwise, and it round-trips bit-exactly through the file formats and
//! JSON reports.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Shorthand for `p/q` from machine integers. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn rint(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Formats as `p` when the denominator is 1, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with optional sign; `q` must be positive.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if denom <= BigInt::zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Lossy conversion for the floating-point oracle.
pub fn to_f64(r: &Rational) -> f64 {
    // Scale down big fractions before dividing so the intermediate
    // numerator/denominator both fit in f64 range.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as u64;
    let nf = (n >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = (d >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

/// serde adapter: emit a rational as its canonical string.
pub mod rational_string {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }
}

/// serde adapter for string-keyed maps of rationals.
pub mod rational_map_string {
    use super::{format_rational, Rational};
    use serde::ser::SerializeMap;
    use serde::Serializer;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &format_rational(v))?;
        }
        map.end()
    }
}

/// serde adapter for vectors of rationals.
pub mod rational_vec_string {
    use super::{format_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }
}

/// Positive part check used by validation paths.
pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}
