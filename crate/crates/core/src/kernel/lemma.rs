use num_traits::{One, Signed, Zero};

use super::lagrange_basis_of;
use crate::error::{Error, Result};
use crate::exactnum::{pow, Rational};
use crate::poly::Poly;

/// Outcome of interpolating `f_k(y) = y^(k-1) 1{y>0}` on `k + 1` points.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub k: u32,
    pub points: Vec<Rational>,
    /// Degree `<= k-1` polynomial matching `f_k` at all `k + 1` points.
    pub full_match: Option<Poly>,
    /// Number of leave-one-out interpolants that also hit the left-out point.
    pub leave_one_out_matches: usize,
    pub all_nonneg: bool,
    pub all_nonpos: bool,
    /// A full match is `y^(k-1)` on nonnegative points or `0` on nonpositive ones.
    pub consistent: bool,
}

fn target(k: u32, y: &Rational) -> Rational {
    if y.is_positive() {
        pow(y, k - 1)
    } else {
        Rational::zero()
    }
}

/// Enumerates the interpolants of `f_k` on every `k`-subset of `points` and
/// checks whether any of them also matches the remaining point.
pub fn verify_lemma_interpolation(k: u32, points: &[Rational]) -> Result<LemmaReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("lemma check needs k >= 1".into()));
    }
    if points.len() != k as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "need {} points for k = {k}, got {}",
            k + 1,
            points.len()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort();
    if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedNode(w[0].clone()));
    }

    let mut full_match = None;
    let mut matches = 0;
    for left_out in 0..pts.len() {
        let subset: Vec<Rational> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != left_out)
            .map(|(_, y)| y.clone())
            .collect();
        let basis = lagrange_basis_of(&subset)?;
        let q = basis
            .iter()
            .zip(&subset)
            .fold(Poly::zero(), |acc, (p, y)| &acc + &p.scale(&target(k, y)));
        if q.eval(&pts[left_out]) == target(k, &pts[left_out]) {
            matches += 1;
            full_match.get_or_insert(q);
        }
    }

    let zero = Rational::zero();
    let all_nonneg = pts.iter().all(|y| y >= &zero);
    let all_nonpos = pts.iter().all(|y| y <= &zero);
    let power = Poly::monomial(Rational::one(), k as usize - 1);
    let consistent = match &full_match {
        None => true,
        Some(q) => (q == &power && all_nonneg) || (q.is_zero() && all_nonpos),
    };
    Ok(LemmaReport {
        k,
        points: pts,
        full_match,
        leave_one_out_matches: matches,
        all_nonneg,
        all_nonpos,
        consistent,
    })
}
