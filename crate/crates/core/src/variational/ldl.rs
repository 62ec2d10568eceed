//! Exact rational LDL^T for symmetric positive definite matrices.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// `A = L D L^T` with unit lower-triangular `L` and positive diagonal `D`.
#[derive(Debug, Clone)]
pub struct Ldl {
    l: Matrix,
    d: Vec<Rational>,
}

impl Ldl {
    /// Factors without pivoting; fails on the first nonpositive pivot.
    pub fn factor(a: &Matrix) -> Result<Ldl> {
        let n = a.len();
        let mut l = vec![vec![Rational::zero(); n]; n];
        let mut d = vec![Rational::zero(); n];
        for j in 0..n {
            let mut dj = a[j][j].clone();
            for p in 0..j {
                dj -= &l[j][p] * &l[j][p] * &d[p];
            }
            if !dj.is_positive() {
                return Err(Error::NotPositiveDefinite { index: j, pivot: dj });
            }
            l[j][j] = Rational::from_integer(1.into());
            for i in j + 1..n {
                let mut v = a[i][j].clone();
                for p in 0..j {
                    v -= &l[i][p] * &l[j][p] * &d[p];
                }
                l[i][j] = v / &dj;
            }
            d[j] = dj;
        }
        Ok(Ldl { l, d })
    }

    pub fn pivots(&self) -> &[Rational] {
        &self.d
    }

    pub fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        let n = self.d.len();
        let mut z = b.to_vec();
        for i in 0..n {
            for p in 0..i {
                let t = &self.l[i][p] * &z[p];
                z[i] -= t;
            }
        }
        for (zi, di) in z.iter_mut().zip(&self.d) {
            *zi /= di;
        }
        for i in (0..n).rev() {
            for p in i + 1..n {
                let t = &self.l[p][i] * &z[p];
                z[i] -= t;
            }
        }
        z
    }
}

pub fn mat_vec(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn solves_hilbert_matrix_exactly() {
        let n = 6;
        let h: Matrix = (0..n)
            .map(|i| (0..n).map(|j| rat(1, (i + j + 1) as i64)).collect())
            .collect();
        let f = Ldl::factor(&h).unwrap();
        let x: Vec<Rational> = (0..n).map(|i| int(i as i64 - 2)).collect();
        let b = mat_vec(&h, &x);
        assert_eq!(f.solve(&b), x);
    }

    #[test]
    fn rejects_indefinite() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(1)]];
        assert!(matches!(
            Ldl::factor(&a),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let singular = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(Ldl::factor(&singular).is_err());
    }
}
