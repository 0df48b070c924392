//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. The text form is `[sign]digits[/digits]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::fmt;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// `num / den` reduced to lowest terms. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `-3/6`, `+4`, `7/2`. The Unicode minus sign is accepted as well.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim().replace('\u{2212}', "-");
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(&s)),
    };
    let digits = |t: &str| -> Result<BigInt, ParseRationalError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (digits(n)?, digits(d)?),
        None => (digits(body)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num * sign, den))
}

/// Canonical text form (`-1/2`, `3`, `0`).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A small random rational: numerator in [-9, 9], denominator in [1, 9].
pub fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Like [`random_small`] but never zero.
pub fn random_small_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let q = random_small(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Helper for displaying a slice of rationals as `(a, b, c)`.
pub struct DisplayVec<'a>(pub &'a [Rational]);

impl fmt::Display for DisplayVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces_and_prints_canonically() {
        let q = parse_rational("\u{2212}3/6").unwrap();
        assert_eq!(q, rat(-1, 2));
        assert_eq!(format_rational(&q), "-1/2");
        assert_eq!(format_rational(&parse_rational("+8/4").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("0/5").unwrap()), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "a", "1/-2", "1.5", "--1", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sqrt_of_squares_only() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = rat(n, d);
            let back = parse_rational(&format_rational(&q)).unwrap();
            proptest::prop_assert_eq!(back, q);
        }
    }
}
