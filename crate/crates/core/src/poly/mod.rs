//! Dense univariate polynomials over the rationals.

mod legendre;
pub mod sturm;

pub use legendre::{gauss_rule, landau_kernel, legendre_roots, monic_legendre, QuadratureRule};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactnum::{int, Rational};

/// Polynomial with `coeffs[i]` the coefficient of `x^i`; trailing zeros are
/// always trimmed so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    /// `a + b x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Iterated derivative.
    pub fn differentiate(&self, times: usize) -> Poly {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..times {
            if coeffs.is_empty() {
                break;
            }
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect();
        }
        Poly::new(coeffs)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(i as i64 + 1));
        }
        Poly::new(coeffs)
    }

    /// Exact `int_a^b p(x) dx`.
    pub fn integrate_interval(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if n < d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); n - d + 1];
        for i in (0..=n - d).rev() {
            let c = &rem[i + d] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(d);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Rational::one() / self.leading()))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.differentiate(1));
        self.div_rem(&g).0
    }

    /// Largest coefficient magnitude, used for root bounds.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let n = self.coeffs.len().saturating_sub(1);
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}
