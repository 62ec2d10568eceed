//! Legendre and Landau polynomials, certified Legendre roots and
//! Gauss-Legendre rules built from them.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sturm::SturmSequence;
use super::Poly;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, pow, Rational};

/// Monic Legendre polynomial `k!/(2k)! d^k/dy^k (y^2-1)^k`; `k = 0` gives 1.
pub fn monic_legendre(k: u32) -> Poly {
    let base = Poly::from_ints(&[-1, 0, 1]).pow(k);
    base.differentiate(k as usize)
        .scale(&(factorial(k) / factorial(2 * k)))
}

/// Landau kernel `(1 - x^2)^k` in expanded form.
pub fn landau_kernel(k: u32) -> Poly {
    Poly::from_ints(&[1, 0, -1]).pow(k)
}

fn dyadic_round(x: &Rational, bits: u32) -> Rational {
    let den = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(den.clone());
    Rational::new(scaled.round().to_integer(), den)
}

fn bits_for_digits(digits: usize) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Standard Legendre `P_n(x)` and its derivative in double precision.
fn legendre_f64(n: u32, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn changes_sign(p: &Poly, a: &Rational, b: &Rational) -> bool {
    (p.eval(a) * p.eval(b)).is_negative()
}

/// Shrinks a sign-change bracket of the simple root of `p` in `(lo, hi)`
/// to width `<= tol` by Newton steps on a dyadic grid, falling back to the
/// midpoint whenever a step leaves the bracket.
fn refine_root(p: &Poly, dp: &Poly, mut lo: Rational, mut hi: Rational, tol: &Rational, bits: u32) -> Rational {
    let two = int(2);
    let eps = tol / int(4);
    let mut x = (&lo + &hi) / &two;
    while &(&hi - &lo) > tol {
        let slope = dp.eval(&x);
        let newton = (!slope.is_zero())
            .then(|| dyadic_round(&(&x - p.eval(&x) / slope), bits))
            .filter(|t| *t > lo && *t < hi);
        let t = match newton {
            Some(t) => t,
            None => (&lo + &hi) / &two,
        };
        if p.eval(&t).is_zero() {
            return t;
        }
        let (a, b) = (&t - &eps, &t + &eps);
        if a > lo && b < hi && changes_sign(p, &a, &b) {
            lo = a;
            hi = b;
        } else if changes_sign(p, &lo, &t) {
            hi = t.clone();
        } else {
            lo = t.clone();
        }
        x = t;
    }
    dyadic_round(&((&lo + &hi) / &two), bits)
}

/// The `k` roots of the monic Legendre polynomial as dyadic rational
/// approximants, each within `10^-digits / 2` of the true root.
///
/// Nonnegative roots are certified by disjoint sign-change brackets whose
/// number matches the Sturm count on `(0, 1)`; negative roots are mirrored.
pub fn legendre_roots(k: u32, digits: usize) -> Result<Vec<Rational>> {
    if k == 0 {
        return Err(Error::InvalidArgument("legendre_roots needs k >= 1".into()));
    }
    let fail = |reason: &str| Error::RootRefinement {
        degree: k as usize,
        reason: reason.to_string(),
    };
    let p = monic_legendre(k);
    let dp = p.differentiate(1);
    let bits = bits_for_digits(digits);
    let tol = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
    let positive = (k / 2) as usize;
    let sturm = SturmSequence::new(&p);
    if sturm.count_roots(Some(&Rational::zero()), Some(&Rational::one())) != positive {
        return Err(fail("unexpected root count on (0, 1]"));
    }

    let mut guesses = Vec::with_capacity(positive);
    for i in 1..=positive {
        // Chebyshev-like initial guess, polished in double precision
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (v, d) = legendre_f64(k, x);
            let step = v / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        guesses.push(x);
    }
    guesses.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut brackets: Vec<(Rational, Rational)> = Vec::with_capacity(positive);
    for (i, &g) in guesses.iter().enumerate() {
        let left_wall = if i == 0 { 0.0 } else { (guesses[i - 1] + g) / 2.0 };
        let right_wall = if i + 1 == positive { 1.0 } else { (guesses[i + 1] + g) / 2.0 };
        let centre = Rational::from_float(g).ok_or_else(|| fail("non-finite initial guess"))?;
        let mut delta = 1e-12_f64.max(g.abs() * 1e-13);
        let found = loop {
            let lo = (g - delta).max(left_wall);
            let hi = (g + delta).min(right_wall);
            let a = Rational::from_float(lo).unwrap().min(centre.clone());
            let b = Rational::from_float(hi).unwrap().max(centre.clone());
            if p.eval(&centre).is_zero() {
                break Some((centre.clone(), centre.clone()));
            }
            if a > Rational::zero() && changes_sign(&p, &a, &b) {
                break Some((a, b));
            }
            if lo <= left_wall && hi >= right_wall {
                break None;
            }
            delta *= 8.0;
        };
        brackets.push(found.ok_or_else(|| fail("no sign change near initial guess"))?);
    }
    for w in brackets.windows(2) {
        if w[0].1 >= w[1].0 {
            return Err(fail("overlapping brackets"));
        }
    }

    let mut pos: Vec<Rational> = brackets
        .into_iter()
        .map(|(a, b)| {
            if a == b {
                a
            } else {
                refine_root(&p, &dp, a, b, &tol, bits)
            }
        })
        .collect();
    let mut roots: Vec<Rational> = pos.iter().rev().map(|r| -r).collect();
    if k % 2 == 1 {
        roots.push(Rational::zero());
    }
    roots.append(&mut pos);
    Ok(roots)
}

/// `n`-point Gauss-Legendre rule on `[-1, 1]` with rational nodes and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Rational>,
    pub weights: Vec<Rational>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, p: &Poly) -> Rational {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * p.eval(x))
            .sum()
    }

    pub fn integrate_f64(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w.to_f64().unwrap_or(f64::NAN) * f(x.to_f64().unwrap_or(f64::NAN)))
            .sum()
    }
}

/// Gauss-Legendre rule whose nodes and weights are accurate to about
/// `10^-digits`; exact for polynomials of degree `<= 2n - 1` up to that error.
pub fn gauss_rule(n: u32, digits: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("gauss_rule needs n >= 1".into()));
    }
    let work = digits + 4;
    let nodes = legendre_roots(n, work)?;
    let bits = bits_for_digits(work);
    // derivative of the standard (P_n(1) = 1) Legendre polynomial
    let normaliser = factorial(2 * n) / (pow(&int(2), n) * factorial(n) * factorial(n));
    let dp = monic_legendre(n).differentiate(1).scale(&normaliser);
    let weight = |x: &Rational| {
        let d = dp.eval(x);
        dyadic_round(&(int(2) / ((Rational::one() - x * x) * &d * &d)), bits)
    };
    let half = nodes.len() / 2;
    let upper: Vec<Rational> = nodes[half..].iter().map(weight).collect();
    let mut weights: Vec<Rational> = upper[(n as usize % 2)..].iter().rev().cloned().collect();
    weights.extend(upper);
    Ok(QuadratureRule {
        nodes,
        weights,
        exactness_degree: 2 * n as usize - 1,
    })
}
