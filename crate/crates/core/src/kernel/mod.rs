//! Left-inverse kernels of the k-th derivative.
//!
//! `b_k(x, y) = (x-y)^(k-1)/(k-1)! * [1{y<x<0} - 1{y>x>=0}]` inverts
//! `f -> f^(k)` on functions clamped at the ends of their support, and
//! `B_k(x, y) = b_k(x, y) - sum_n p_n(y) b_k(x, y_n)` subtracts the Lagrange
//! interpolant of `b_k(x, .)` on a node set so that `B_k` vanishes on the
//! nodes, is continuous in `x` and has constant sign in `x`.

mod lemma;
mod piecewise;
mod sign;

pub use lemma::{verify_lemma_interpolation, LemmaReport};
pub use piecewise::PiecewisePoly;
pub use sign::{sign_certificate, sign_certificate_on_grid, SignClass, SignMode, SignReport, DEFAULT_SIGN_GRID};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, pow, rat, Rational};
use crate::poly::{landau_kernel, Poly};

/// Strictly increasing interpolation nodes `y_1 < ... < y_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    nodes: Vec<Rational>,
}

impl NodeSet {
    /// Sorts the nodes; rejects an empty set or any repeated node.
    pub fn new(mut nodes: Vec<Rational>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("node set must not be empty".into()));
        }
        nodes.sort();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedNode(w[0].clone()));
        }
        Ok(NodeSet { nodes })
    }

    /// `k` distinct random rationals in `(-1, 1)` with small denominators.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut nodes: Vec<Rational> = Vec::with_capacity(k);
        while nodes.len() < k {
            let d = rng.gen_range(2..=24i64);
            let y = rat(rng.gen_range(-d + 1..d), d);
            if !nodes.contains(&y) {
                nodes.push(y);
            }
        }
        NodeSet::new(nodes).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn first(&self) -> &Rational {
        &self.nodes[0]
    }

    pub fn last(&self) -> &Rational {
        &self.nodes[self.nodes.len() - 1]
    }

    /// Nodes outside the open interval `(-1, 1)`; allowed but worth reporting.
    pub fn outside_unit_interval(&self) -> Vec<Rational> {
        self.nodes
            .iter()
            .filter(|y| y.abs() >= Rational::one())
            .cloned()
            .collect()
    }
}

/// `(x-y)^(k-1)/(k-1)!` as a polynomial in `x` for fixed `y`.
fn power_in_x(k: u32, y: &Rational) -> Poly {
    Poly::linear(-y, Rational::one())
        .pow(k - 1)
        .scale(&(Rational::one() / factorial(k - 1)))
}

/// `(x-y)^(k-1)/(k-1)!` as a polynomial in `y` for fixed `x`.
fn power_in_y(k: u32, x: &Rational) -> Poly {
    Poly::linear(x.clone(), -Rational::one())
        .pow(k - 1)
        .scale(&(Rational::one() / factorial(k - 1)))
}

/// Pointwise `b_k(x, y)`; the second indicator includes `x = 0`.
pub fn eval_b(k: u32, x: &Rational, y: &Rational) -> Rational {
    assert!(k >= 1, "b_k needs k >= 1");
    let zero = Rational::zero();
    let weight = || pow(&(x - y), k - 1) / factorial(k - 1);
    if y < x && x < &zero {
        weight()
    } else if y > x && x >= &zero {
        -weight()
    } else {
        zero
    }
}

/// `x -> b_k(x, y)` as a piecewise polynomial.
///
/// For `k = 1` the right-closed convention differs from `eval_b` at the
/// single point `x = y < 0`; every other point agrees.
pub fn b_x_slice(k: u32, y: &Rational) -> PiecewisePoly {
    let t = power_in_x(k, y);
    let zero = Rational::zero();
    if y < &zero {
        PiecewisePoly::new(vec![y.clone(), zero], vec![Poly::zero(), t, Poly::zero()])
    } else if y > &zero {
        PiecewisePoly::new(vec![zero, y.clone()], vec![Poly::zero(), -t, Poly::zero()])
    } else {
        PiecewisePoly::zero()
    }
}

/// `y -> b_k(x, y)` as a piecewise polynomial (agrees with `eval_b` except at
/// `y = x >= 0` when `k = 1`).
pub fn b_y_slice(k: u32, x: &Rational) -> PiecewisePoly {
    let s = power_in_y(k, x);
    if x < &Rational::zero() {
        PiecewisePoly::new(vec![x.clone()], vec![s, Poly::zero()])
    } else {
        PiecewisePoly::new(vec![x.clone()], vec![Poly::zero(), -s])
    }
}

/// `int b_k(x, y) dx` over the real line, by integrating the x-slice.
pub fn vertical_integral_b(k: u32, y: &Rational) -> Rational {
    b_x_slice(k, y)
        .integrate_all()
        .expect("b_k slices have compact support")
}

/// Lagrange basis `p_n(y) = prod_{j != n} (y - y_j)/(y_n - y_j)`.
pub fn lagrange_basis(nodes: &NodeSet) -> Vec<Poly> {
    lagrange_basis_of(nodes.nodes()).expect("NodeSet nodes are distinct")
}

pub(crate) fn lagrange_basis_of(points: &[Rational]) -> Result<Vec<Poly>> {
    let mut basis = Vec::with_capacity(points.len());
    for (n, yn) in points.iter().enumerate() {
        let mut p = Poly::one();
        for (j, yj) in points.iter().enumerate() {
            if j == n {
                continue;
            }
            let gap = yn - yj;
            if gap.is_zero() {
                return Err(Error::RepeatedNode(yn.clone()));
            }
            p = &p * &Poly::linear(-yj / &gap, Rational::one() / &gap);
        }
        basis.push(p);
    }
    Ok(basis)
}

/// Default probe abscissae for `reproduce`; they straddle the jump of `b_k`
/// at `x = 0`.
pub fn default_probes() -> Vec<Rational> {
    [(-9, 10), (-1, 2), (-1, 10), (0, 1), (1, 10), (1, 2), (9, 10)]
        .iter()
        .map(|&(n, d)| rat(n, d))
        .collect()
}

/// The corrected kernel `B_k` for a fixed node set.
#[derive(Debug, Clone)]
pub struct KernelB {
    k: u32,
    nodes: NodeSet,
    lagrange: Vec<Poly>,
    anchors: Vec<PiecewisePoly>,
}

impl KernelB {
    /// Requires exactly `k` nodes.
    pub fn new(nodes: NodeSet) -> Self {
        let k = nodes.len() as u32;
        let lagrange = lagrange_basis(&nodes);
        let anchors = nodes.nodes().iter().map(|yn| b_x_slice(k, yn)).collect();
        KernelB {
            k,
            nodes,
            lagrange,
            anchors,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn lagrange(&self) -> &[Poly] {
        &self.lagrange
    }

    /// `x -> b_k(x, y_n)` for each node.
    pub fn anchors(&self) -> &[PiecewisePoly] {
        &self.anchors
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let correction: Rational = self
            .lagrange
            .iter()
            .zip(self.nodes.nodes())
            .map(|(p, yn)| p.eval(y) * eval_b(self.k, x, yn))
            .sum();
        eval_b(self.k, x, y) - correction
    }

    /// `x -> B_k(x, y)` as a piecewise polynomial.
    pub fn x_slice(&self, y: &Rational) -> PiecewisePoly {
        let own = b_x_slice(self.k, y);
        let weights: Vec<Rational> = self.lagrange.iter().map(|p| -p.eval(y)).collect();
        let mut terms = vec![(Rational::one(), &own)];
        terms.extend(weights.iter().cloned().zip(self.anchors.iter()));
        PiecewisePoly::linear_combination(&terms)
    }

    /// `y -> B_k(x, y)` as a piecewise polynomial.
    pub fn y_slice(&self, x: &Rational) -> PiecewisePoly {
        let correction = self
            .lagrange
            .iter()
            .zip(self.nodes.nodes())
            .fold(Poly::zero(), |acc, (p, yn)| &acc + &p.scale(&eval_b(self.k, x, yn)));
        b_y_slice(self.k, x).add_poly(&-correction)
    }

    /// Closed form of `B_k(x, y)` outside the node hull, `None` for
    /// `y_1 < x < y_k`.
    pub fn closed_form_off_hull(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        let w = || pow(&(x - y), self.k - 1) / factorial(self.k - 1);
        if x <= self.nodes.first() {
            Some(if y < x { w() } else { Rational::zero() })
        } else if x >= self.nodes.last() {
            Some(if y > x { -w() } else { Rational::zero() })
        } else {
            None
        }
    }

    /// The `x`-integral of `b_k(x, y)` as a polynomial in `y`, assembled on
    /// each half-line from the antiderivative `(x-y)^k/k!` and required to
    /// agree across `y = 0`.
    fn vertical_integral_b_poly(&self) -> Result<Poly> {
        let k = self.k;
        let anti = Poly::monomial(Rational::one() / factorial(k), k as usize);
        let minus_y = Poly::from_ints(&[0, -1]);
        // y < 0: int_y^0 (x-y)^(k-1)/(k-1)! dx = T(-y) - T(0)
        let left = &anti.compose(&minus_y) - &Poly::constant(anti.eval(&Rational::zero()));
        // y > 0: -int_0^y (x-y)^(k-1)/(k-1)! dx = -(T(0) - T(-y))
        let right = -(&Poly::constant(anti.eval(&Rational::zero())) - &anti.compose(&minus_y));
        if left != right {
            return Err(Error::Identity(format!(
                "half-line integrals of b_{k} disagree: {left} vs {right}"
            )));
        }
        for y in [rat(-1, 2), rat(1, 3)] {
            if left.eval(&y) != vertical_integral_b(k, &y) {
                return Err(Error::Identity(format!(
                    "symbolic integral of b_{k} disagrees with slice at y = {y}"
                )));
            }
        }
        Ok(left)
    }

    /// `y -> k! * int B_k(x, y) dx` as a polynomial; the `x`-integral runs over
    /// the whole line, which equals `[-1, 1]` whenever the nodes and `y` lie
    /// there. Verified to equal `(-1)^k prod_n (y - y_n)`.
    pub fn vertical_integral_poly(&self) -> Result<Poly> {
        let mut poly = self.vertical_integral_b_poly()?;
        for (p, anchor) in self.lagrange.iter().zip(&self.anchors) {
            let weight = anchor.integrate_all().expect("compact support");
            poly = &poly - &p.scale(&weight);
        }
        let poly = poly.scale(&factorial(self.k));
        let expected = self.signed_node_product();
        if poly != expected {
            return Err(Error::Identity(format!(
                "vertical integral {poly} differs from (-1)^k prod(y - y_n) = {expected}"
            )));
        }
        Ok(poly)
    }

    /// `(-1)^k prod_n (y - y_n)`.
    pub fn signed_node_product(&self) -> Poly {
        let prod = self
            .nodes
            .nodes()
            .iter()
            .fold(Poly::one(), |acc, yn| &acc * &Poly::linear(-yn, Rational::one()));
        if self.k % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// `int B_k(x, y) dx` over the line at a fixed `y`, from the x-slice.
    pub fn vertical_integral_at(&self, y: &Rational) -> Rational {
        self.x_slice(y).integrate_all().expect("compact support")
    }

    /// Jump `lim_{x->0-} B_k(x, y) - lim_{x->0+} B_k(x, y)` as a polynomial in `y`:
    /// `(-y)^(k-1)/(k-1)! - sum_n p_n(y) (-y_n)^(k-1)/(k-1)!`.
    ///
    /// Uses the one-sided limit formulas of `b_k` at `x = 0`. They match the
    /// slices except when `k = 1` and a node sits at 0, where `b_1(., 0)`
    /// vanishes identically.
    pub fn continuity_jump_poly(&self) -> Poly {
        let k = self.k;
        let scale = Rational::one() / factorial(k - 1);
        let own = Poly::from_ints(&[0, -1]).pow(k - 1).scale(&scale);
        self.lagrange
            .iter()
            .zip(self.nodes.nodes())
            .fold(own, |acc, (p, yn)| &acc - &p.scale(&(pow(&-yn, k - 1) * &scale)))
    }

    /// `max |int B_k(x, y) f^(k)(y) dy - f(x)|` over the probes, computed exactly.
    ///
    /// `f` must be divisible by `(1 - x^2)^k` so that it is clamped at `+-1`.
    pub fn reproduce(&self, f: &Poly, probes: &[Rational]) -> Result<Rational> {
        let (_, rem) = f.div_rem(&landau_kernel(self.k));
        if !rem.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{f} is not a multiple of (1 - x^2)^{}",
                self.k
            )));
        }
        let g = f.differentiate(self.k as usize);
        let (lo, hi) = (int(-1), int(1));
        let mut worst = Rational::zero();
        for x in probes {
            let value = self.y_slice(x).mul_poly(&g).integrate(&lo, &hi);
            let dev = (value - f.eval(x)).abs();
            if dev > worst {
                worst = dev;
            }
        }
        Ok(worst)
    }
}
