use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::enclosure::{pi_enclosure, sqrt_enclosure, Enclosure};
use super::Rational;
use crate::error::{Error, Result};

/// Trial-division cutoff when pulling square factors out of a radicand.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Exact real of the form `q * sqrt(r) * pi^e` with `e` in `{0, 1}`.
///
/// Canonical form: `r` is a positive integer with its square factors moved
/// into `q` (squarefree whenever its factorisation is reachable by trial
/// division), and zero is stored as `q = 0, r = 1, e = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    q: Rational,
    r: Rational,
    e: u32,
}

impl RadicalScalar {
    pub fn new(q: Rational, r: Rational, e: u32) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidArgument(format!("negative radicand {r}")));
        }
        if e > 1 {
            return Err(Error::PiPowerOverflow(e));
        }
        Ok(Self::canonical(q, r, e))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::canonical(q, Rational::one(), 0)
    }

    /// `sqrt(r)` for `r >= 0`.
    pub fn sqrt(r: Rational) -> Result<Self> {
        Self::new(Rational::one(), r, 0)
    }

    pub fn pi() -> Self {
        Self::canonical(Rational::one(), Rational::one(), 1)
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn pi_power(&self) -> u32 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// Re-runs canonicalisation; idempotent on values built through the API.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.q.clone(), self.r.clone(), self.e)
    }

    fn canonical(q: Rational, r: Rational, e: u32) -> Self {
        if q.is_zero() || r.is_zero() {
            return RadicalScalar {
                q: Rational::zero(),
                r: Rational::one(),
                e: 0,
            };
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let b = r.denom().clone();
        let n = r.numer() * &b;
        let (square_root, rest) = split_square(n.magnitude());
        let q = q * Rational::new(BigInt::from_biguint(Sign::Plus, square_root), b);
        RadicalScalar {
            q,
            r: Rational::from_integer(BigInt::from_biguint(Sign::Plus, rest)),
            e,
        }
    }

    /// `value^2` when it is rational (no pi factor).
    pub fn squared_rational(&self) -> Option<Rational> {
        (self.e == 0).then(|| &self.q * &self.q * &self.r)
    }

    pub fn signum(&self) -> i32 {
        if self.q.is_positive() {
            1
        } else if self.q.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn enclosure(&self, bits: u32) -> Enclosure {
        if self.is_zero() {
            return Enclosure::point(Rational::zero());
        }
        let mut enc = sqrt_enclosure(&self.r, bits + 8);
        if self.e == 1 {
            enc = enc.mul(&pi_enclosure(bits + 8));
        }
        let enc = enc.scale(&self.q);
        if enc.is_point() {
            enc
        } else {
            enc.round_outward(bits + 4)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let pi = if self.e == 1 { std::f64::consts::PI } else { 1.0 };
        q * r.sqrt() * pi
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Self::new(
            &self.q * &other.q,
            &self.r * &other.r,
            self.e + other.e,
        )
    }

    /// Division; fails on a zero divisor or when the quotient would carry `pi^-1`.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidArgument("division by zero radical".into()));
        }
        if other.e > self.e && !self.is_zero() {
            return Err(Error::InvalidArgument(
                "quotient would carry a negative power of pi".into(),
            ));
        }
        let e = if self.is_zero() { 0 } else { self.e - other.e };
        // 1/(q sqrt(r)) = sqrt(r) / (q r)
        Self::new(
            &self.q / (&other.q * &other.r),
            &self.r * &other.r,
            e,
        )
    }
}

impl Mul for &RadicalScalar {
    type Output = RadicalScalar;

    /// Panics if the product would carry `pi^2`; use `checked_mul` to handle that.
    fn mul(self, rhs: &RadicalScalar) -> RadicalScalar {
        self.checked_mul(rhs).expect("pi power overflow")
    }
}

impl Div for &RadicalScalar {
    type Output = RadicalScalar;

    fn div(self, rhs: &RadicalScalar) -> RadicalScalar {
        self.checked_div(rhs).expect("invalid radical division")
    }
}

impl Neg for RadicalScalar {
    type Output = RadicalScalar;

    fn neg(self) -> RadicalScalar {
        RadicalScalar {
            q: -self.q,
            r: self.r,
            e: self.e,
        }
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)?;
        if !self.r.is_one() {
            write!(f, "*sqrt({})", self.r)?;
        }
        if self.e == 1 {
            write!(f, "*pi")?;
        }
        Ok(())
    }
}

impl Serialize for RadicalScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Splits `n = s^2 * m`, returning `(s, m)`.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        let mut odd = false;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            if odd {
                root *= &pb;
            }
            odd = !odd;
        }
        if odd {
            free *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // every prime left in `rest` exceeds its cube root: at most two of them
    let s = rest.sqrt();
    if &s * &s == rest {
        root *= &s;
    } else {
        free *= &rest;
    }
    (root, free)
}

/// Exact ordering of two radicals.
///
/// Equal pi powers compare signs and then squared rational parts. Mixed pi
/// powers cannot coincide unless both are zero, so enclosures are refined
/// until they separate.
pub fn radical_cmp(a: &RadicalScalar, b: &RadicalScalar) -> Ordering {
    if a.e == b.e || a.is_zero() || b.is_zero() {
        let (sa, sb) = (a.signum(), b.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        if a.e == b.e {
            let ma = &a.q * &a.q * &a.r;
            let mb = &b.q * &b.q * &b.r;
            return if sa > 0 { ma.cmp(&mb) } else { mb.cmp(&ma) };
        }
    }
    let mut bits = 64;
    loop {
        let ea = a.enclosure(bits);
        let eb = b.enclosure(bits);
        if ea.hi < eb.lo {
            return Ordering::Less;
        }
        if ea.lo > eb.hi {
            return Ordering::Greater;
        }
        assert!(bits < 1 << 20, "radical enclosures failed to separate");
        bits *= 2;
    }
}

/// Correctly rounded decimal with `digits` significant digits (round half
/// away from zero). Zero prints as `0.` followed by `digits - 1` zeros.
pub fn radical_eval(a: &RadicalScalar, digits: usize) -> String {
    let digits = digits.max(1);
    let mut bits = 64 + 4 * digits as u32;
    loop {
        if let Some(s) = format_enclosure(&a.enclosure(bits), digits) {
            return s;
        }
        assert!(bits < 1 << 20, "decimal rounding failed to certify");
        bits *= 2;
    }
}

fn pow10(e: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(10), e as usize))
}

fn scale10(v: &Rational, e: i64) -> Rational {
    if e >= 0 {
        v * pow10(e as u32)
    } else {
        v / pow10((-e) as u32)
    }
}

/// Rounds every point of the enclosure to the same `digits`-significant
/// decimal, or returns `None` if the enclosure is still too wide.
pub(crate) fn format_enclosure(enc: &Enclosure, digits: usize) -> Option<String> {
    let digits = digits.max(1);
    if enc.is_point() && enc.lo.is_zero() {
        return Some(if digits == 1 {
            "0".to_string()
        } else {
            format!("0.{}", "0".repeat(digits - 1))
        });
    }
    let negative = if enc.lo.is_positive() {
        false
    } else if enc.hi.is_negative() {
        true
    } else {
        return None;
    };
    let (lo, hi) = if negative {
        (-enc.hi.clone(), -enc.lo.clone())
    } else {
        (enc.lo.clone(), enc.hi.clone())
    };
    // decade of lo and hi must agree
    let exp_lo = decade(&lo);
    if decade(&hi) != exp_lo {
        return None;
    }
    let shift = digits as i64 - 1 - exp_lo;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n_lo = (scale10(&lo, shift) + &half).floor().to_integer();
    let n_hi = (scale10(&hi, shift) + &half).floor().to_integer();
    if n_lo != n_hi {
        return None;
    }
    let mut n = n_lo;
    let mut exp = exp_lo;
    if n == num_traits::pow(BigInt::from(10), digits) {
        n /= 10;
        exp += 1;
    }
    Some(place_point(&n.to_string(), exp, digits, negative))
}

/// `floor(log10(v))` for `v > 0`.
fn decade(v: &Rational) -> i64 {
    let guess = v.numer().to_string().len() as i64 - v.denom().to_string().len() as i64;
    let mut e = guess;
    loop {
        if &scale10(&Rational::one(), e) > v {
            e -= 1;
        } else if &scale10(&Rational::one(), e + 1) <= v {
            e += 1;
        } else {
            return e;
        }
    }
}

fn place_point(mantissa: &str, exp: i64, digits: usize, negative: bool) -> String {
    let sign = if negative { "-" } else { "" };
    let d = digits as i64;
    let body = if exp >= d - 1 {
        format!("{mantissa}{}", "0".repeat((exp - d + 1) as usize))
    } else if exp >= 0 {
        let (int_part, frac) = mantissa.split_at((exp + 1) as usize);
        format!("{int_part}.{frac}")
    } else {
        format!("0.{}{mantissa}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}
