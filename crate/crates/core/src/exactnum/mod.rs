//! Exact scalars: arbitrary-precision rationals, factorials and the
//! `q * sqrt(r) * pi^e` family that every closed-form constant here lives in.

mod enclosure;
mod radical;

pub use enclosure::{pi_enclosure, sqrt_enclosure, Enclosure};
pub use radical::{radical_cmp, radical_eval, RadicalScalar};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` exactly.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_integer(BigInt::from(acc))
}

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<Rational> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial needs n >= -1, got {n}"
        )));
    }
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(Rational::from_integer(acc))
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Parses `"p/q"`, an integer, or a finite decimal literal such as `"-0.25"`.
///
/// The second component reports whether a decimal literal was converted.
pub fn parse_rational(s: &str) -> Result<(Rational, bool)> {
    let t = s.trim();
    let bad = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok((Rational::new(n, d), false));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits_ok = |x: &str| x.chars().all(|c| c.is_ascii_digit());
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !digits_ok(whole_digits) || !digits_ok(frac) || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let mantissa: BigInt = format!("{whole_digits}{frac}")
            .parse::<BigInt>()
            .unwrap_or_else(|_| BigInt::zero());
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(mantissa, scale);
        return Ok((if negative { -v } else { v }, true));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok((Rational::from_integer(n), false))
}

/// `p/q` rendering; integers print without a denominator.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator or denominator overflow.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Correctly rounded decimal of a rational to `digits` significant digits.
pub fn rational_eval(r: &Rational, digits: usize) -> String {
    radical::format_enclosure(&Enclosure::point(r.clone()), digits)
        .expect("a point enclosure always rounds")
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
