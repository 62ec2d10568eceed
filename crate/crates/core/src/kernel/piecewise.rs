use num_traits::Zero;

use crate::exactnum::Rational;
use crate::poly::Poly;

/// Piecewise polynomial on the real line.
///
/// `pieces[i]` is active on `[breakpoints[i-1], breakpoints[i])`, with the
/// first and last pieces covering the unbounded ends. At a breakpoint the
/// value comes from the piece on its right.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Self {
        assert_eq!(pieces.len(), breakpoints.len() + 1, "piece count mismatch");
        assert!(
            breakpoints.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must increase"
        );
        PiecewisePoly {
            breakpoints,
            pieces,
        }
    }

    pub fn global(p: Poly) -> Self {
        PiecewisePoly::new(Vec::new(), vec![p])
    }

    pub fn zero() -> Self {
        Self::global(Poly::zero())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// `(lower, upper, piece)` per open interval; `None` bounds are infinite.
    pub fn intervals(&self) -> impl Iterator<Item = (Option<&Rational>, Option<&Rational>, &Poly)> {
        self.pieces.iter().enumerate().map(move |(i, p)| {
            let lo = i.checked_sub(1).map(|j| &self.breakpoints[j]);
            let hi = self.breakpoints.get(i);
            (lo, hi, p)
        })
    }

    fn piece_index(&self, x: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b <= x)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn left_limit(&self, x: &Rational) -> Rational {
        self.pieces[self.breakpoints.partition_point(|b| b < x)].eval(x)
    }

    pub fn right_limit(&self, x: &Rational) -> Rational {
        self.eval(x)
    }

    /// Same function over the union of the current breakpoints and `extra`.
    fn refine(&self, extra: &[Rational]) -> PiecewisePoly {
        let mut bps: Vec<Rational> = self.breakpoints.iter().chain(extra).cloned().collect();
        bps.sort();
        bps.dedup();
        let mut pieces = Vec::with_capacity(bps.len() + 1);
        for i in 0..=bps.len() {
            // any point strictly inside the i-th refined interval picks its source piece
            let idx = match i {
                0 => 0,
                _ => self.piece_index(&bps[i - 1]),
            };
            pieces.push(self.pieces[idx].clone());
        }
        PiecewisePoly::new(bps, pieces)
    }

    /// `sum c_i f_i` on the common refinement of all breakpoints.
    pub fn linear_combination(terms: &[(Rational, &PiecewisePoly)]) -> PiecewisePoly {
        let all: Vec<Rational> = terms
            .iter()
            .flat_map(|(_, f)| f.breakpoints.iter().cloned())
            .collect();
        let mut acc: Option<PiecewisePoly> = None;
        for (c, f) in terms {
            let r = f.refine(&all);
            let scaled: Vec<Poly> = r.pieces.iter().map(|p| p.scale(c)).collect();
            acc = Some(match acc {
                None => PiecewisePoly::new(r.breakpoints, scaled),
                Some(a) => {
                    let pieces = a.pieces.iter().zip(&scaled).map(|(x, y)| x + y).collect();
                    PiecewisePoly::new(a.breakpoints, pieces)
                }
            });
        }
        acc.unwrap_or_else(PiecewisePoly::zero)
    }

    pub fn add_poly(&self, p: &Poly) -> PiecewisePoly {
        PiecewisePoly::new(
            self.breakpoints.clone(),
            self.pieces.iter().map(|q| q + p).collect(),
        )
    }

    pub fn mul_poly(&self, p: &Poly) -> PiecewisePoly {
        PiecewisePoly::new(
            self.breakpoints.clone(),
            self.pieces.iter().map(|q| q * p).collect(),
        )
    }

    /// Exact integral over `[a, b]`, `a <= b`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (lo, hi, p) in self.intervals() {
            let s = lo.map_or(a, |l| l.max(a));
            let t = hi.map_or(b, |h| h.min(b));
            if s < t {
                total += p.integrate_interval(s, t);
            }
        }
        total
    }

    /// Integral over the whole line; `None` unless both unbounded pieces vanish.
    pub fn integrate_all(&self) -> Option<Rational> {
        if !self.pieces[0].is_zero() || !self.pieces[self.pieces.len() - 1].is_zero() {
            return None;
        }
        match (self.breakpoints.first(), self.breakpoints.last()) {
            (Some(a), Some(b)) => Some(self.integrate(a, b)),
            _ => Some(Rational::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn hat() -> PiecewisePoly {
        // 1 + x on [-1, 0), 1 - x on [0, 1), zero outside
        PiecewisePoly::new(
            vec![int(-1), int(0), int(1)],
            vec![
                Poly::zero(),
                Poly::from_ints(&[1, 1]),
                Poly::from_ints(&[1, -1]),
                Poly::zero(),
            ],
        )
    }

    #[test]
    fn evaluation_is_right_closed() {
        let step = PiecewisePoly::new(vec![int(0)], vec![Poly::zero(), Poly::one()]);
        assert_eq!(step.eval(&int(0)), int(1));
        assert_eq!(step.left_limit(&int(0)), int(0));
        assert_eq!(step.eval(&rat(-1, 2)), int(0));
    }

    #[test]
    fn integrals() {
        let h = hat();
        assert_eq!(h.integrate_all(), Some(int(1)));
        assert_eq!(h.integrate(&rat(-1, 2), &rat(1, 2)), rat(3, 4));
        assert_eq!(h.integrate(&int(-5), &int(-2)), int(0));
        assert_eq!(PiecewisePoly::global(Poly::one()).integrate_all(), None);
    }

    #[test]
    fn combination_matches_pointwise() {
        let h = hat();
        let step = PiecewisePoly::new(vec![rat(1, 3)], vec![Poly::zero(), Poly::x()]);
        let c = PiecewisePoly::linear_combination(&[(int(2), &h), (rat(-1, 2), &step)]);
        for n in -12..=12 {
            let x = rat(n, 8);
            assert_eq!(c.eval(&x), int(2) * h.eval(&x) - rat(1, 2) * step.eval(&x));
        }
        assert_eq!(c.breakpoints().len(), 4);
    }
}
