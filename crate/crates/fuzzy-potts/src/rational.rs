//! Exact rational arithmetic helpers.
//!
//! All probabilities in this crate are [`Rational`] values: ratios of
//! arbitrary-precision integers, always in lowest terms. This module adds
//! the small amount of glue the rest of the crate needs: literal parsing,
//! construction from machine integers, integer powers, and a decimal
//! rendering used only for display (never for arithmetic).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number: a ratio of arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

/// Builds the rational `n / d` from machine integers. Panics if `d == 0`;
/// intended for literals in code and tests.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the rational `n / 1`.
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or a plain integer into an exact rational.
///
/// No floating-point forms are accepted: a decimal point or exponent is a
/// parse error, so inexact inputs cannot silently enter a computation.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let bad = || Error::ParseRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let parse_int = |part: &str| -> Result<BigInt, Error> {
        let t = part.trim();
        if t.is_empty() {
            return Err(bad());
        }
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let n = parse_int(num)?;
            let d = parse_int(den)?;
            if d.sign() != Sign::Plus {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Raises a rational to a nonnegative integer power, exactly.
pub fn pow_u(base: &Rational, exp: usize) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    // Numerator and denominator are coprime, so power them separately.
    let exp = u32::try_from(exp).expect("exponent fits in u32 for all supported graph sizes");
    Rational::new_raw(base.numer().pow(exp), base.denom().pow(exp))
}

/// Renders an exact string `"a/b"` (or `"a"` for integers).
pub fn exact_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

/// Renders a decimal approximation with `sig` significant digits, for
/// human-readable output alongside the exact value. Rounds half away from
/// zero. Uses plain positional notation when the magnitude lies in
/// `[10^-4, 10^15)` and scientific notation `d.dd...e±k` otherwise.
pub fn decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1, "at least one significant digit");
    if r.is_zero() {
        return String::from("0");
    }
    let negative = r.is_negative();
    let n = r.numer().abs();
    let d = r.denom().clone();

    // Exponent e such that 10^e <= n/d < 10^(e+1).
    let mut e = decimal_digits(&n) as i64 - decimal_digits(&d) as i64;
    // The digit-count estimate can be off by one; correct by comparison.
    if compare_scaled(&n, &d, e) == Ordering::Less {
        e -= 1;
    } else if compare_scaled(&n, &d, e + 1) != Ordering::Less {
        e += 1;
    }

    // First `sig` digits: round(n/d * 10^(sig-1-e)), half away from zero.
    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (n * pow10(shift as u64), d)
    } else {
        (n, d * pow10((-shift) as u64))
    };
    let (q, rem) = num_integer::Integer::div_rem(&num, &den);
    let mut digits = if &rem * 2u8 >= den { q + 1u8 } else { q }.to_string();
    // Rounding can carry into one extra digit (e.g. 999.6 -> 1000).
    if digits.len() > sig {
        digits.truncate(sig);
        e += 1;
    }
    debug_assert_eq!(digits.len(), sig);
    // Trim trailing zeros of the fractional part (kept digits stay exact).
    let digits: Vec<u8> = digits.into_bytes();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-4..15).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= sig {
                for b in &digits {
                    out.push(*b as char);
                }
                for _ in 0..(int_len - sig) {
                    out.push('0');
                }
            } else {
                for b in &digits[..int_len] {
                    out.push(*b as char);
                }
                let frac = trim_zeros(&digits[int_len..]);
                if !frac.is_empty() {
                    out.push('.');
                    for b in frac {
                        out.push(*b as char);
                    }
                }
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-e - 1) {
                out.push('0');
            }
            for b in trim_zeros(&digits) {
                out.push(*b as char);
            }
        }
    } else {
        out.push(digits[0] as char);
        let frac = trim_zeros(&digits[1..]);
        if !frac.is_empty() {
            out.push('.');
            for b in frac {
                out.push(*b as char);
            }
        }
        out.push('e');
        out.push_str(&e.to_string());
    }
    out
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let mut end = digits.len();
    while end > 0 && digits[end - 1] == b'0' {
        end -= 1;
    }
    &digits[..end]
}

fn decimal_digits(n: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    // Cheap bound from bit length, corrected against exact powers of ten.
    let bits = n.bits();
    let mut est = ((bits as f64) * core::f64::consts::LOG10_2) as u64 + 1;
    while pow10(est) <= n.abs() {
        est += 1;
    }
    while est > 1 && pow10(est - 1) > n.abs() {
        est -= 1;
    }
    est
}

fn pow10(e: u64) -> BigInt {
    BigInt::from(10u8).pow(u32::try_from(e).expect("exponent fits in u32"))
}

/// Compares n/d with 10^e (allowing negative e), exactly.
fn compare_scaled(n: &BigInt, d: &BigInt, e: i64) -> Ordering {
    if e >= 0 {
        n.cmp(&(d * pow10(e as u64)))
    } else {
        (n * pow10((-e) as u64)).cmp(d)
    }
}

/// Sign of an exact quantity, reported alongside covariances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    /// Classifies a rational by exact comparison with zero.
    pub fn of(r: &Rational) -> SignClass {
        match r.numer().sign() {
            Sign::Minus => SignClass::Negative,
            Sign::NoSign => SignClass::Zero,
            Sign::Plus => SignClass::Positive,
        }
    }

    /// Short lowercase name (`negative`, `zero`, `positive`).
    pub fn name(self) -> &'static str {
        match self {
            SignClass::Negative => "negative",
            SignClass::Zero => "zero",
            SignClass::Positive => "positive",
        }
    }
}

/// Attempts to express `r` with an exact `u128` numerator/denominator pair.
/// Used by fast paths; callers must fall back to big-integer arithmetic
/// when this returns `None`.
pub fn to_u128_parts(r: &Rational) -> Option<(u128, u128)> {
    if r.is_negative() {
        return None;
    }
    Some((r.numer().to_u128()?, r.denom().to_u128()?))
}

/// Rewrites a table of rationals over one common denominator (the least
/// common multiple of all entry denominators), returning the numerators
/// and that denominator. For a normalized probability table the
/// numerators sum to the denominator.
pub fn common_numerators(table: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut d = BigInt::one();
    for r in table {
        d = num_integer::Integer::lcm(&d, r.denom());
    }
    let numers = table
        .iter()
        .map(|r| r.numer() * (&d / r.denom()))
        .collect();
    (numers, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), integer(3));
        assert_eq!(parse_rational("-3").unwrap(), integer(-3));
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 7 / 2 ").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("9/-3").unwrap_err(), Error::ParseRational("9/-3".into()));
        for bad in ["", "/", "1/", "/2", "1/0", "0.5", "1e-3", "a/b", "1/2/3", "½"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} must not parse");
        }
    }

    #[test]
    fn negative_denominator_is_rejected_but_negative_numerator_parses() {
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn powers_are_exact() {
        assert_eq!(pow_u(&ratio(2, 3), 0), integer(1));
        assert_eq!(pow_u(&ratio(2, 3), 5), ratio(32, 243));
        assert_eq!(pow_u(&integer(-2), 3), integer(-8));
    }

    #[test]
    fn exact_strings() {
        assert_eq!(exact_string(&ratio(-3, 6)), "-1/2");
        assert_eq!(exact_string(&integer(42)), "42");
        assert_eq!(exact_string(&integer(0)), "0");
    }

    #[test]
    fn decimal_rendering_basics() {
        assert_eq!(decimal_string(&integer(0), 12), "0");
        assert_eq!(decimal_string(&integer(1), 12), "1");
        assert_eq!(decimal_string(&ratio(1, 2), 12), "0.5");
        assert_eq!(decimal_string(&ratio(-1, 3), 12), "-0.333333333333");
        assert_eq!(decimal_string(&ratio(2, 3), 12), "0.666666666667");
        assert_eq!(decimal_string(&ratio(1, 7), 6), "0.142857");
        assert_eq!(decimal_string(&integer(1000), 12), "1000");
        assert_eq!(decimal_string(&ratio(9996, 10), 3), "1000");
    }

    #[test]
    fn decimal_rendering_extremes() {
        assert_eq!(decimal_string(&ratio(1, 10_000), 12), "0.0001");
        assert_eq!(decimal_string(&ratio(1, 100_000), 3), "1e-5");
        assert_eq!(decimal_string(&ratio(-1, 65536), 6), "-1.52588e-5");
        let tiny = Rational::new(BigInt::from(1), BigInt::from(10u8).pow(30));
        assert_eq!(decimal_string(&tiny, 4), "1e-30");
        let huge = Rational::from_integer(BigInt::from(10u8).pow(20) * 3);
        assert_eq!(decimal_string(&huge, 4), "3e20");
    }

    #[test]
    fn sign_classification() {
        assert_eq!(SignClass::of(&ratio(-1, 5)), SignClass::Negative);
        assert_eq!(SignClass::of(&integer(0)), SignClass::Zero);
        assert_eq!(SignClass::of(&ratio(1, 5)), SignClass::Positive);
        assert_eq!(SignClass::Negative.name(), "negative");
    }

    #[test]
    fn common_denominator_tables() {
        let table = vec![ratio(1, 6), ratio(1, 2), ratio(1, 3)];
        let (numers, d) = common_numerators(&table);
        assert_eq!(d, BigInt::from(6));
        assert_eq!(numers, vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)]);
        let total: BigInt = numers.iter().sum();
        assert_eq!(total, d);
    }

    #[test]
    fn u128_extraction() {
        assert_eq!(to_u128_parts(&ratio(3, 4)), Some((3, 4)));
        assert_eq!(to_u128_parts(&ratio(-3, 4)), None);
        let vals = [integer(0), ratio(7, 1)];
        assert_eq!(to_u128_parts(&vals[0]), Some((0, 1)));
        assert_eq!(to_u128_parts(&vals[1]), Some((7, 1)));
    }
}
