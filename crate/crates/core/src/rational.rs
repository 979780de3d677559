//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qbig(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Largest integer not exceeding `x`.
pub fn floor_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}: expected \"p/q\" or an integer")]
pub struct RationalParseError(pub String);

/// Parses `"p/q"`, `"-p/q"` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` text (`p` alone when the denominator is one).
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// Exact values with short expansions are printed without padding.
pub struct Decimal<'a> {
    pub value: &'a Rational,
    pub digits: usize,
}

impl fmt::Display for Decimal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.value;
        if x.is_zero() {
            return write!(f, "0");
        }
        let neg = x.is_negative();
        let num = x.numer().abs();
        let den = x.denom().clone();
        let (int_part, mut rem) = num.div_rem(&den);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let int_str = int_part.to_string();
        let mut significant = if int_part.is_zero() { 0 } else { int_str.len() };
        out.push_str(&int_str);
        if rem.is_zero() {
            return write!(f, "{out}");
        }
        out.push('.');
        let ten = BigInt::from(10);
        while !rem.is_zero() && significant < self.digits {
            rem *= &ten;
            let (d, r) = rem.div_rem(&den);
            let d = d.to_u8().unwrap_or(0);
            if d != 0 || significant > 0 {
                significant += 1;
            }
            out.push((b'0' + d) as char);
            rem = r;
        }
        write!(f, "{out}")
    }
}

pub fn decimal(x: &Rational) -> String {
    Decimal {
        value: x,
        digits: 15,
    }
    .to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), qi(-7));
        assert_eq!(parse_rational(" 4 / -8 ").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(format_rational(&q(-3, 9)), "-1/3");
        assert_eq!(format_rational(&qi(5)), "5");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&q(1, 4)), "0.25");
        assert_eq!(decimal(&q(-1, 48)), "-0.0208333333333333");
        assert_eq!(decimal(&q(1, 3)), "0.333333333333333");
        assert_eq!(decimal(&q(200, 3)), "66.6666666666666");
        assert_eq!(decimal(&qi(0)), "0");
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(floor_int(&q(-1, 2)), BigInt::from(-1));
        assert_eq!(floor_int(&q(7, 2)), BigInt::from(3));
        assert_eq!(floor_int(&qi(-3)), BigInt::from(-3));
    }
}
