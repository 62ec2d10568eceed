//! Kalyabin's two-sided estimate of `c_{k,2,q}` through
//! `L(s) = int_{-1}^{1} (1 - x^2)^s dx`.

use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{double_factorial, factorial, int, pow, radical_eval, rat, to_f64, RadicalScalar, Rational};

/// A bound that is either exact or a flagged floating-point value.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(RadicalScalar),
    Approx(f64),
}

impl BoundValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&RadicalScalar> {
        match self {
            BoundValue::Exact(r) => Some(r),
            BoundValue::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => r.to_f64(),
            BoundValue::Approx(v) => *v,
        }
    }

    pub fn decimal(&self, digits: usize) -> String {
        match self {
            BoundValue::Exact(r) => radical_eval(r, digits),
            BoundValue::Approx(v) => format!("{:.*e}", digits.saturating_sub(1), v),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Exact(r) => s.collect_str(r),
            BoundValue::Approx(v) => s.serialize_f64(*v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KalyabinBounds {
    pub k: u32,
    pub q: Rational,
    pub lower: BoundValue,
    pub upper: BoundValue,
}

/// `L(s)` exactly when `s` is a nonnegative integer or a half-integer
/// `n - 1/2 >= -1/2`: `2^(2n+1) (n!)^2 / (2n+1)!` and `pi (2n-1)!! / (2^n n!)`.
pub fn landau_integral_exact(s: &Rational) -> Option<RadicalScalar> {
    let two = int(2);
    if s.is_integer() && !s.is_negative() {
        let n = s.to_integer().to_u32()?;
        let v = pow(&two, 2 * n + 1) * factorial(n) * factorial(n) / factorial(2 * n + 1);
        return Some(RadicalScalar::from_rational(v));
    }
    let shifted = s + rat(1, 2);
    if shifted.is_integer() && !shifted.is_negative() {
        let n = shifted.to_integer().to_u32()?;
        let v = double_factorial(2 * n as i64 - 1).ok()? / (pow(&two, n) * factorial(n));
        return RadicalScalar::new(v, Rational::one(), 1).ok();
    }
    None
}

/// `L(s) = sqrt(pi) Gamma(s+1) / Gamma(s+3/2)` in double precision, `s > -1`.
pub fn landau_integral_f64(s: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    (0.5 * std::f64::consts::PI.ln() + ln_gamma(s + 1.0) - ln_gamma(s + 1.5)).exp()
}

/// `L(s)^(1/q)` as a radical when it stays inside `q sqrt(r) pi^e`.
fn exact_root(l: &RadicalScalar, q: &Rational) -> Option<RadicalScalar> {
    if q.is_one() {
        return Some(l.clone());
    }
    // beyond q = 1 only rational L(s) keeps the pi power in range
    let value = (l.pi_power() == 0 && l.r().is_one()).then(|| l.q().clone())?;
    if *q == int(2) {
        return RadicalScalar::sqrt(value).ok();
    }
    let inv = q.recip();
    if inv.is_integer() {
        let m = inv.to_integer().to_u32()?;
        return Some(RadicalScalar::from_rational(pow(&value, m)));
    }
    None
}

/// Lower and upper estimates of the sharp constant for `p = 2` and exponent `q`.
pub fn kalyabin_bounds(k: u32, q: &Rational) -> Result<KalyabinBounds> {
    if k == 0 {
        return Err(Error::InvalidArgument("Kalyabin bounds need k >= 1".into()));
    }
    if !q.is_positive() {
        return Err(Error::InvalidArgument(format!("q must be positive, got {q}")));
    }
    let kk = int(k as i64);
    let two_k = pow(&int(2), k);
    let half = rat(1, 2);
    let lower_pre = RadicalScalar::new(
        Rational::one() / (&two_k * factorial(k)),
        &kk + &half,
        0,
    )?;
    // 1/(2^k (k-1)! sqrt(k-1/2)) = sqrt(k-1/2) / (2^k (k-1)! (k-1/2))
    let upper_pre = RadicalScalar::new(
        Rational::one() / (&two_k * factorial(k - 1) * (&kk - &half)),
        &kk - &half,
        0,
    )?;
    let lower_arg = &kk * q;
    let upper_arg = (&kk - &half) * q;

    let bound = |pre: &RadicalScalar, arg: &Rational| -> BoundValue {
        landau_integral_exact(arg)
            .and_then(|l| exact_root(&l, q))
            .and_then(|root| pre.checked_mul(&root).ok())
            .map(BoundValue::Exact)
            .unwrap_or_else(|| {
                let qf = to_f64(q);
                BoundValue::Approx(pre.to_f64() * landau_integral_f64(to_f64(arg)).powf(1.0 / qf))
            })
    };
    Ok(KalyabinBounds {
        k,
        q: q.clone(),
        lower: bound(&lower_pre, &lower_arg),
        upper: bound(&upper_pre, &upper_arg),
    })
}
