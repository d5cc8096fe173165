//! Exact rational helpers: parsing, canonical formatting, and decimal
//! conversion.
//!
//! Every file format in this crate serializes rationals as `p/q` strings
//! (`p` alone when the denominator is 1). Decimals are accepted on input and
//! converted exactly; they are never emitted.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used for all weights, coordinates, and metrics.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Canonical string form: `p` when the denominator is 1, else `p/q` reduced,
/// sign on the numerator.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a decimal (`1.25`, `-3e-2`, `2.5e3`) into an exact
/// rational. Decimals convert exactly: `0.25` becomes `1/4`.
pub fn parse(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Invalid(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Invalid(s.to_string()))?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational, RationalParseError> {
    let invalid = || RationalParseError::Invalid(s.to_string());
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| invalid())?;
            // Bound the scale so malformed input cannot demand gigantic
            // powers of ten; covers the entire binary double range.
            if exp.unsigned_abs() > 9999 {
                return Err(invalid());
            }
            (m, exp)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(invalid());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| invalid())?
    };
    if sign < 0 {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Ok(if shift >= 0 {
        Rational::from_integer(numer * ten.pow(shift as u32))
    } else {
        Rational::new(numer, ten.pow((-shift) as u32))
    })
}

/// True when the string uses decimal or exponent notation rather than the
/// exact `p` / `p/q` forms. Used to decide whether imported solver values get
/// the float tolerance.
pub fn is_float_notation(s: &str) -> bool {
    let s = s.trim();
    s.contains(['.', 'e', 'E']) && !s.contains('/')
}

/// Best rational approximation with denominator at most `max_denom`, via
/// continued-fraction convergents and semiconvergents. Values whose
/// denominator is already within the bound pass through unchanged.
pub fn limit_denominator(r: &Rational, max_denom: &BigInt) -> Rational {
    assert!(max_denom.is_positive());
    if r.denom() <= max_denom {
        return r.clone();
    }
    // Stern-Brocot style walk keeping the two most recent convergents.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut n = r.numer().abs();
    let mut d = r.denom().clone();
    loop {
        let a = &n / &d;
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denom {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let rem = &n - &a * &d;
        if rem.is_zero() {
            break;
        }
        (n, d) = (d, rem);
    }
    // Semiconvergent: push the last coefficient as far as the bound allows.
    let k = (max_denom - &q0) / &q1;
    let cand_a = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let cand_b = Rational::new(p1, q1);
    let target = Rational::new(r.numer().abs(), r.denom().clone());
    let best = if (&cand_b - &target).abs() <= (&cand_a - &target).abs() {
        cand_b
    } else {
        cand_a
    };
    if r.is_negative() {
        -best
    } else {
        best
    }
}

/// Lossy conversion for rendering.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_u64(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `n/d` as a rational; panics on zero denominator (internal shorthand).
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nonnegative rational 10^-k, used for slack tolerances.
pub fn pow10_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Sign helper used by polygon area checks.
pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[allow(unused)]
fn sign_of(r: &Rational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction() {
        assert_eq!(parse("15").unwrap(), from_i64(15));
        assert_eq!(parse("1/30").unwrap(), ratio(1, 30));
        assert_eq!(parse("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse(" 3 / 4 ").unwrap(), ratio(3, 4));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse("2.5e3").unwrap(), from_i64(2500));
        assert_eq!(parse("1.234e-2").unwrap(), ratio(617, 50000));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("1.2.3").is_err());
        assert!(parse("1e2000000000").is_err());
        assert!(parse("1e-2000000000").is_err());
    }

    #[test]
    fn canonical_formatting() {
        assert_eq!(to_string(&ratio(4, 2)), "2");
        assert_eq!(to_string(&ratio(125, 4)), "125/4");
        assert_eq!(to_string(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn round_trips_canonical_strings() {
        for s in ["2", "125/4", "-7/3", "0", "1/30"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
    }

    #[test]
    fn limit_denominator_snaps_solver_floats() {
        // 0.333333 printed by a solver should land back on 1/3.
        let raw = parse("0.333333333333").unwrap();
        let snapped = limit_denominator(&raw, &big(1_000_000_000));
        assert_eq!(snapped, ratio(1, 3));
        // Exact values within the bound pass through.
        let exact = ratio(125, 4);
        assert_eq!(limit_denominator(&exact, &big(1_000_000_000)), exact);
        let neg = parse("-0.5000000000001").unwrap();
        assert_eq!(limit_denominator(&neg, &big(1_000_000_000)), ratio(-1, 2));
    }

    #[test]
    fn float_notation_detection() {
        assert!(is_float_notation("0.25"));
        assert!(is_float_notation("1e-5"));
        assert!(!is_float_notation("1/4"));
        assert!(!is_float_notation("25"));
    }
}
