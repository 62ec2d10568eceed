//! Sturm sequences: exact real-root counting and sign analysis on intervals.

use num_traits::{One, Signed, Zero};

use super::Poly;
use crate::exactnum::{int, Rational};

#[derive(Debug, Clone)]
pub struct SturmSequence {
    seq: Vec<Poly>,
}

impl SturmSequence {
    /// Builds the sequence of the squarefree part of `p`, so counts are of
    /// distinct roots. `p` must be nonzero.
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let p0 = p.squarefree_part();
        let mut seq = vec![p0.clone()];
        let mut prev = p0.clone();
        let mut cur = p0.differentiate(1);
        while !cur.is_zero() {
            let (_, r) = prev.div_rem(&cur);
            seq.push(cur.clone());
            prev = cur;
            cur = -r;
        }
        SturmSequence { seq }
    }

    pub fn base(&self) -> &Poly {
        &self.seq[0]
    }

    fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::count_variations(self.seq.iter().map(|p| sign(&p.eval(x))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::count_variations(self.seq.iter().map(|p| {
            let s = sign(&p.leading());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct roots in `(lo, hi]`; `None` stands for the matching infinity.
    pub fn count_roots(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        let vlo = lo.map_or_else(|| self.variations_at_infinity(false), |x| self.variations_at(x));
        let vhi = hi.map_or_else(|| self.variations_at_infinity(true), |x| self.variations_at(x));
        vlo.saturating_sub(vhi)
    }

    /// Distinct roots in the open interval `(lo, hi)`.
    pub fn count_open(&self, lo: &Rational, hi: &Rational) -> usize {
        let n = self.count_roots(Some(lo), Some(hi));
        if self.base().eval(hi).is_zero() {
            n - 1
        } else {
            n
        }
    }
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Points where a polynomial is strictly positive and strictly negative.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StrictSigns {
    pub positive_at: Option<Rational>,
    pub negative_at: Option<Rational>,
}

impl StrictSigns {
    fn record(&mut self, p: &Poly, x: &Rational) {
        let v = p.eval(x);
        if v.is_positive() && self.positive_at.is_none() {
            self.positive_at = Some(x.clone());
        } else if v.is_negative() && self.negative_at.is_none() {
            self.negative_at = Some(x.clone());
        }
    }
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Decides which strict signs `p` takes on the open interval `(lo, hi)`,
/// with `None` bounds meaning infinity. Exact: every root-free segment of the
/// interval is sampled once.
pub fn strict_signs(p: &Poly, lo: Option<&Rational>, hi: Option<&Rational>) -> StrictSigns {
    let mut out = StrictSigns::default();
    if p.is_zero() {
        return out;
    }
    if p.degree() == Some(0) {
        let x = match (lo, hi) {
            (Some(a), Some(b)) => midpoint(a, b),
            (Some(a), None) => a + Rational::one(),
            (None, Some(b)) => b - Rational::one(),
            (None, None) => Rational::zero(),
        };
        out.record(p, &x);
        return out;
    }
    let sturm = SturmSequence::new(p);
    let bound = sturm.base().cauchy_bound();
    // Finite stand-ins for infinite ends lie beyond every root.
    let a = match lo {
        Some(a) => a.clone(),
        None => hi.map_or_else(|| -bound.clone(), |b| (-bound.clone()).min(b.clone())) - Rational::one(),
    };
    let b = match hi {
        Some(b) => b.clone(),
        None => bound.clone().max(a.clone()) + Rational::one(),
    };
    if a >= b {
        return out;
    }
    let base = sturm.base();
    let mut stack = vec![(a, b)];
    while let Some((l, u)) = stack.pop() {
        let count = sturm.count_open(&l, &u);
        let m = midpoint(&l, &u);
        if count == 0 {
            out.record(p, &m);
            continue;
        }
        let at_m = base.eval(&m);
        if count == 1 && !at_m.is_zero() {
            out.record(p, &m);
            let root_left = sturm.count_open(&l, &m) == 1;
            let (mut s, mut t) = if root_left { (l, m) } else { (m, u) };
            loop {
                let c = midpoint(&s, &t);
                if base.eval(&c).is_zero() {
                    out.record(p, &midpoint(&s, &c));
                    out.record(p, &midpoint(&c, &t));
                    break;
                }
                let root_below = sturm.count_open(&s, &c) == 1;
                match (root_left, root_below) {
                    (true, false) | (false, true) => {
                        out.record(p, &c);
                        break;
                    }
                    (true, true) => t = c,
                    (false, false) => s = c,
                }
            }
            continue;
        }
        if !at_m.is_zero() {
            out.record(p, &m);
        }
        stack.push((l, m.clone()));
        stack.push((m, u));
    }
    out
}
