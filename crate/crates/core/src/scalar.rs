//! Scalar abstraction shared by the exact (rational) and floating-point paths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number. All group arithmetic and mark
/// incidence is carried out in this type.
pub type Rational = BigRational;

/// Field-like scalar usable by the generic 2×2 algebra and the mark formulas.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Whether comparisons in this scalar are exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Largest integer not above `self`.
    fn floor_int(&self) -> i64;

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        // Ratio<BigInt>::to_f64 handles huge numerators/denominators gracefully.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn floor_int(&self) -> i64 {
        self.floor().to_integer().to_i64().unwrap_or(i64::MAX)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        <Rational as Scalar>::to_f64(q)
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        <Rational as Scalar>::to_f64(q) as f32
    }

    fn from_int(n: i64) -> Self {
        n as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }
}

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational (expected \"p/q\" or \"p\")")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = s.trim();
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let q = Rational::from_str(trimmed).map_err(|_| err())?;
    Ok(q)
}

/// Canonical textual form: always `p/q`, with `q > 0` and the fraction reduced.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Smallest non-negative integer `k` with `k² ≥ q` (the ceiling of `√q`).
pub fn ceil_sqrt(q: &Rational) -> BigInt {
    assert!(!q.is_negative(), "ceil_sqrt of a negative rational");
    let ceil = q.ceil().to_integer();
    // ceil(√q) ≤ ceil(q) for q ≥ 1 and is at most 1 for q ≤ 1.
    let mut lo = BigInt::zero();
    let mut hi = if ceil < BigInt::one() {
        BigInt::one()
    } else {
        ceil
    };
    while lo < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        let sq = Rational::from_integer(&mid * &mid);
        if &sq >= q {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Rounds a float to `digits` significant digits (used for textual output).
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    s.parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(3)), "3/1");
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(&int(0)), BigInt::from(0));
        assert_eq!(ceil_sqrt(&int(1)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&int(5)), BigInt::from(3));
        assert_eq!(ceil_sqrt(&int(9)), BigInt::from(3));
        assert_eq!(ceil_sqrt(&rat(1, 4)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&int(10_000)), BigInt::from(100));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_sig(0.0, 12), 0.0);
    }
}
