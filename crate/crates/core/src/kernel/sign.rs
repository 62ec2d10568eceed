use num_traits::{One, Signed};
use serde::Serialize;

use super::KernelB;
use crate::exactnum::{int, rat, Rational};
use crate::poly::sturm::strict_signs;

/// Grid size of the sampled sign check.
pub const DEFAULT_SIGN_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    /// Uniform grid over `[-1, 1]` plus the slice breakpoints.
    Sampled,
    /// Sturm-certified sign of every polynomial piece on the whole line.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignClass {
    /// Identically zero slice: both nonnegative and nonpositive.
    Zero,
    NonNegative,
    NonPositive,
    Violation {
        positive_at: Rational,
        negative_at: Rational,
    },
}

impl SignClass {
    pub fn is_nonneg(&self) -> bool {
        matches!(self, SignClass::Zero | SignClass::NonNegative)
    }

    pub fn is_nonpos(&self) -> bool {
        matches!(self, SignClass::Zero | SignClass::NonPositive)
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, SignClass::Violation { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignReport {
    pub y: Rational,
    pub mode: SignMode,
    pub class: SignClass,
}

#[derive(Default)]
struct Witnesses {
    positive: Option<Rational>,
    negative: Option<Rational>,
}

impl Witnesses {
    fn observe(&mut self, x: &Rational, value: &Rational) {
        if value.is_positive() && self.positive.is_none() {
            self.positive = Some(x.clone());
        } else if value.is_negative() && self.negative.is_none() {
            self.negative = Some(x.clone());
        }
    }

    fn classify(self) -> SignClass {
        match (self.positive, self.negative) {
            (None, None) => SignClass::Zero,
            (Some(_), None) => SignClass::NonNegative,
            (None, Some(_)) => SignClass::NonPositive,
            (Some(p), Some(n)) => SignClass::Violation {
                positive_at: p,
                negative_at: n,
            },
        }
    }
}

/// Sign of `x -> B_k(x, y)`: one common sign, or a pair of witnesses with
/// opposite strict signs.
pub fn sign_certificate(kb: &KernelB, y: &Rational, mode: SignMode) -> SignReport {
    match mode {
        SignMode::Sampled => sign_certificate_on_grid(kb, y, DEFAULT_SIGN_GRID),
        SignMode::Exact => exact_certificate(kb, y),
    }
}

/// Sampled check on `grid + 1` equispaced points of `[-1, 1]` plus every
/// breakpoint of the slice inside `[-1, 1]`.
pub fn sign_certificate_on_grid(kb: &KernelB, y: &Rational, grid: usize) -> SignReport {
    let grid = grid.max(1) as i64;
    let mut w = Witnesses::default();
    let mut xs: Vec<Rational> = (0..=grid).map(|i| rat(2 * i - grid, grid)).collect();
    let (lo, hi) = (int(-1), int(1));
    xs.extend(
        kb.x_slice(y)
            .breakpoints()
            .iter()
            .filter(|b| **b >= lo && **b <= hi)
            .cloned(),
    );
    for x in &xs {
        w.observe(x, &kb.eval(x, y));
    }
    SignReport {
        y: y.clone(),
        mode: SignMode::Sampled,
        class: w.classify(),
    }
}

fn exact_certificate(kb: &KernelB, y: &Rational) -> SignReport {
    let slice = kb.x_slice(y);
    let mut w = Witnesses::default();
    for b in slice.breakpoints() {
        w.observe(b, &kb.eval(b, y));
    }
    for (lo, hi, piece) in slice.intervals() {
        let s = strict_signs(piece, lo, hi);
        for x in [s.positive_at, s.negative_at].into_iter().flatten() {
            w.observe(&x, &piece.eval(&x));
        }
    }
    if let (Some(first), Some(last)) = (slice.breakpoints().first(), slice.breakpoints().last()) {
        // pieces are evaluated on open intervals; add the far tails for completeness
        for x in [first - Rational::one(), last + Rational::one()] {
            w.observe(&x, &kb.eval(&x, y));
        }
    }
    SignReport {
        y: y.clone(),
        mode: SignMode::Exact,
        class: w.classify(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::NodeSet;
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn kb(v: &[(i64, i64)]) -> KernelB {
        KernelB::new(NodeSet::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap())
    }

    #[test]
    fn examples() {
        for mode in [SignMode::Sampled, SignMode::Exact] {
            let k1 = kb(&[(0, 1)]);
            assert_eq!(sign_certificate(&k1, &rat(-7, 10), mode).class, SignClass::NonNegative);
            let k2 = kb(&[(-1, 2), (1, 2)]);
            let at_node = sign_certificate(&k2, &rat(1, 2), mode).class;
            assert!(at_node.is_nonneg() && at_node.is_nonpos());
            // right of the hull B_2(x, 9/10) = -(x - 9/10) > 0 for 1/2 <= x < 9/10
            assert_eq!(sign_certificate(&k2, &rat(9, 10), mode).class, SignClass::NonNegative);
            assert_eq!(sign_certificate(&k2, &int(0), mode).class, SignClass::NonPositive);
        }
    }

    #[test]
    fn exact_mode_never_violates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=4 {
            for _ in 0..10 {
                let kb = KernelB::new(NodeSet::random(k, &mut rng));
                for _ in 0..10 {
                    let y = rat(rng.gen_range(-40..=40), 37);
                    let r = sign_certificate(&kb, &y, SignMode::Exact);
                    assert!(!r.class.is_violation(), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn exact_mode_reports_witnesses_for_a_sign_changing_slice() {
        // a fabricated kernel is not needed: strict_signs drives the decision,
        // so check it directly on a piece that crosses zero
        let p = Poly::from_ints(&[-1, 3]);
        let s = strict_signs(&p, Some(&int(0)), Some(&int(1)));
        assert!(s.positive_at.is_some() && s.negative_at.is_some());
    }
}
