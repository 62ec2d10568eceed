use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Closed rational interval `[lo, hi]` known to contain a real value.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Enclosure { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Enclosure {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    /// Widens both ends outward onto the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Enclosure {
        let scale = BigInt::one() << bits;
        let den = Rational::from_integer(scale.clone());
        let lo = (&self.lo * &den).floor();
        let hi = (&self.hi * &den).ceil();
        Enclosure {
            lo: Rational::new(lo.to_integer(), scale.clone()),
            hi: Rational::new(hi.to_integer(), scale),
        }
    }
}

/// Enclosure of `sqrt(r)` of width at most `2^-bits`. Requires `r >= 0`.
pub fn sqrt_enclosure(r: &Rational, bits: u32) -> Enclosure {
    assert!(!r.is_negative(), "sqrt of negative rational");
    let scaled = (r.numer() << (2 * bits as usize)).div_floor(r.denom());
    let (_, mag) = scaled.into_parts();
    let s = BigInt::from_biguint(Sign::Plus, mag.sqrt());
    let den = BigInt::one() << bits;
    let lo = Rational::new(s.clone(), den.clone());
    if &(&lo * &lo) == r {
        return Enclosure::point(lo);
    }
    Enclosure::new(lo, Rational::new(s + 1, den))
}

/// `arctan(1/m) * 2^bits` in fixed point with an absolute error bound in ulps.
fn arctan_inv_fixed(m: u64, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let m2 = BigInt::from(m * m);
    let mut power = &one / BigInt::from(m);
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power / &m2;
        n += 1;
    }
    // each term carries at most two ulps of truncation, plus one for the tail
    let err = BigInt::from(2 * n + 2);
    (sum, err)
}

/// Enclosure of pi of width at most about `2^-bits` via Machin's formula.
pub fn pi_enclosure(bits: u32) -> Enclosure {
    let work = bits + 16;
    let (a, ea) = arctan_inv_fixed(5, work);
    let (b, eb) = arctan_inv_fixed(239, work);
    let mid = BigInt::from(16) * a - BigInt::from(4) * b;
    let err = BigInt::from(16) * ea + BigInt::from(4) * eb;
    let den = BigInt::one() << work;
    Enclosure::new(
        Rational::new(&mid - &err, den.clone()),
        Rational::new(&mid + &err, den),
    )
    .round_outward(bits + 2)
}
