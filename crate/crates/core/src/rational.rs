//! Exact rationals and their textual form `p/q`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`. Panics on a zero denominator.
pub fn frac(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Maximum of a sequence of rationals, zero for the empty sequence.
pub fn max_or_zero<I: IntoIterator<Item = Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |m, x| if x > m { x } else { m })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `n`, `-n`, `p/q` or `-p/q` with decimal digits. No whitespace, no
/// sign on the denominator, no zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { input: s.to_string(), reason };
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut n = parse_digits(num).ok_or_else(|| err("numerator is not a digit string"))?;
    if neg {
        n = -n;
    }
    let d = match den {
        Some(d) => parse_digits(d).ok_or_else(|| err("denominator is not a digit string"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text: `p` for integers, `p/q` in lowest terms otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
