//! Variational confirmations of the sharp constant.
//!
//! The Rayleigh quotient `||u^(k)||_2^2 / ||u||_1^2` is minimised over finite
//! polynomial subspaces of clamped functions. On the cone of nonnegative `u`
//! the `L^1` norm is the linear functional `int u`, so the subspace optimum
//! is the quadratic form `b^T G^{-1} b` with `G` the Gram matrix of k-th
//! derivatives and `b` the vector of integrals.

mod kalyabin;
pub mod ldl;

pub use kalyabin::{kalyabin_bounds, landau_integral_exact, landau_integral_f64, BoundValue, KalyabinBounds};

use num_traits::{Signed, Zero};
use serde::Serialize;

use self::ldl::{dot, mat_vec, Ldl, Matrix};
use crate::constants::sharp_constant_squared;
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::poly::{landau_kernel, Poly};

/// Number of sign-sampling cells used by the fixed-point iteration.
pub const DEFAULT_SIGN_CELLS: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSpec {
    /// `(1-x^2)^k x^n`; the span always contains the Landau kernel.
    LandauWeighted,
    /// `(1-x^2)^(k+1) x^n`; never contains the Landau kernel.
    LandauExcluded,
}

impl BasisSpec {
    pub fn name(self) -> &'static str {
        match self {
            BasisSpec::LandauWeighted => "landau_weighted",
            BasisSpec::LandauExcluded => "landau_excluded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSystem {
    pub k: u32,
    pub spec: BasisSpec,
    pub basis: Vec<Poly>,
    /// `gram[m][n] = int phi_m^(k) phi_n^(k)`
    pub gram: Matrix,
    /// `load[n] = int phi_n`
    pub load: Vec<Rational>,
}

impl GalerkinSystem {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// `sum c_n phi_n`.
    pub fn combine(&self, coefficients: &[Rational]) -> Poly {
        self.basis
            .iter()
            .zip(coefficients)
            .fold(Poly::zero(), |acc, (phi, c)| &acc + &phi.scale(c))
    }
}

pub fn assemble_galerkin(k: u32, spec: BasisSpec, size: usize) -> Result<GalerkinSystem> {
    if k == 0 || size == 0 {
        return Err(Error::InvalidArgument(format!(
            "Galerkin system needs k >= 1 and size >= 1 (k = {k}, size = {size})"
        )));
    }
    let weight = match spec {
        BasisSpec::LandauWeighted => landau_kernel(k),
        BasisSpec::LandauExcluded => landau_kernel(k + 1),
    };
    let basis: Vec<Poly> = (0..size)
        .map(|n| &weight * &Poly::monomial(int(1), n))
        .collect();
    let (lo, hi) = (int(-1), int(1));
    for (n, phi) in basis.iter().enumerate() {
        for j in 0..k as usize {
            let d = phi.differentiate(j);
            if !d.eval(&lo).is_zero() || !d.eval(&hi).is_zero() {
                return Err(Error::Identity(format!(
                    "basis function {n} violates the clamped condition at order {j}"
                )));
            }
        }
    }
    let derivs: Vec<Poly> = basis.iter().map(|p| p.differentiate(k as usize)).collect();
    let mut gram = vec![vec![Rational::zero(); size]; size];
    for m in 0..size {
        for n in m..size {
            let v = (&derivs[m] * &derivs[n]).integrate_interval(&lo, &hi);
            gram[n][m] = v.clone();
            gram[m][n] = v;
        }
    }
    let load = basis.iter().map(|p| p.integrate_interval(&lo, &hi)).collect();
    let sys = GalerkinSystem {
        k,
        spec,
        basis,
        gram,
        load,
    };
    // linear independence of the basis
    Ldl::factor(&sys.gram)?;
    Ok(sys)
}

/// Subspace optimum `c'^2 = b^T G^{-1} b`; never exceeds the sharp `c^2` and
/// reaches it whenever the Landau kernel lies in the span.
pub fn constrained_min(sys: &GalerkinSystem) -> Result<Rational> {
    let f = Ldl::factor(&sys.gram)?;
    Ok(dot(&sys.load, &f.solve(&sys.load)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub size: usize,
    #[serde(serialize_with = "crate::verify::ser_rational")]
    pub value: Rational,
    /// `c^2 - c'^2`.
    #[serde(serialize_with = "crate::verify::ser_rational")]
    pub gap: Rational,
}

/// `c'^2` for sizes `1..=max_size` of nested subspaces; errors if the
/// sequence ever decreases or exceeds `c^2`.
pub fn convergence_sweep(k: u32, spec: BasisSpec, max_size: usize) -> Result<Vec<SweepRow>> {
    if max_size == 0 {
        return Err(Error::InvalidArgument("max_size must be >= 1".into()));
    }
    let c2 = sharp_constant_squared(k);
    let mut rows: Vec<SweepRow> = Vec::with_capacity(max_size);
    for size in 1..=max_size {
        let value = constrained_min(&assemble_galerkin(k, spec, size)?)?;
        if let Some(prev) = rows.last() {
            if value < prev.value {
                return Err(Error::Identity(format!(
                    "sweep decreased at size {size}: {} -> {value}",
                    prev.value
                )));
            }
        }
        if value > c2 {
            return Err(Error::Identity(format!(
                "subspace optimum {value} exceeds c^2 = {c2} at size {size}"
            )));
        }
        rows.push(SweepRow {
            size,
            gap: &c2 - &value,
            value,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult {
    /// `||u^(k)||_2^2` at the fixed point, normalised to `||u||_1 = 1`.
    pub lambda: Rational,
    pub coefficients: Vec<Rational>,
    pub iterations: usize,
    pub sign_pattern_stable: bool,
}

/// Midpoints and boundaries of `cells` equal cells of `[-1, 1]`.
fn sign_cells(cells: usize) -> Vec<(Rational, Rational, Rational)> {
    let n = cells as i64;
    (0..n)
        .map(|i| {
            let a = Rational::new((2 * i - n).into(), n.into());
            let b = Rational::new((2 * i + 2 - n).into(), n.into());
            let m = Rational::new((2 * i + 1 - n).into(), n.into());
            (a, b, m)
        })
        .collect()
}

fn sign_pattern(u: &Poly, cells: &[(Rational, Rational, Rational)]) -> Vec<i8> {
    cells
        .iter()
        .map(|(_, _, m)| {
            let v = u.eval(m);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Discretised fixed-point iteration for
/// `(-1)^k u^(2k) = lambda sign(u) int |u|` with clamped ends.
///
/// Each step freezes `s = sign(u)` on a grid of cells, solves
/// `G c = (int phi_n s)_n` and renormalises to `int u s = 1`. The iteration
/// stops when the grid sign pattern repeats; for a positive fixed point
/// `lambda` is exactly `1 / c'^2` of the subspace.
pub fn bvp_fixed_point(sys: &GalerkinSystem, init: &[Rational], max_iter: usize) -> Result<FixedPointResult> {
    bvp_fixed_point_on_grid(sys, init, max_iter, DEFAULT_SIGN_CELLS)
}

pub fn bvp_fixed_point_on_grid(
    sys: &GalerkinSystem,
    init: &[Rational],
    max_iter: usize,
    cells: usize,
) -> Result<FixedPointResult> {
    if init.len() != sys.size() {
        return Err(Error::InvalidArgument(format!(
            "initial vector has {} entries, basis has {}",
            init.len(),
            sys.size()
        )));
    }
    let u0 = sys.combine(init);
    if u0.is_zero() {
        return Err(Error::InvalidArgument("initial function is identically zero".into()));
    }
    let grid = sign_cells(cells.max(1));
    let cell_integrals: Vec<Vec<Rational>> = sys
        .basis
        .iter()
        .map(|phi| {
            let anti = phi.antiderivative();
            grid.iter().map(|(a, b, _)| anti.eval(b) - anti.eval(a)).collect()
        })
        .collect();
    let signed_load = |signs: &[i8]| -> Vec<Rational> {
        cell_integrals
            .iter()
            .map(|row| {
                row.iter()
                    .zip(signs)
                    .map(|(v, s)| match s {
                        1 => v.clone(),
                        -1 => -v,
                        _ => Rational::zero(),
                    })
                    .sum()
            })
            .collect()
    };
    let ldl = Ldl::factor(&sys.gram)?;
    let mut signs = sign_pattern(&u0, &grid);
    for iteration in 1..=max_iter {
        let load = signed_load(&signs);
        let c = ldl.solve(&load);
        let next = sign_pattern(&sys.combine(&c), &grid);
        let l1 = dot(&c, &signed_load(&next));
        if !l1.is_positive() {
            return Err(Error::Identity(format!(
                "iterate {iteration} has nonpositive sampled L1 norm {l1}"
            )));
        }
        let c: Vec<Rational> = c.iter().map(|x| x / &l1).collect();
        if next == signs {
            let lambda = dot(&c, &mat_vec(&sys.gram, &c));
            return Ok(FixedPointResult {
                lambda,
                coefficients: c,
                iterations: iteration,
                sign_pattern_stable: true,
            });
        }
        signs = next;
    }
    Err(Error::NonConvergence(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn assemble_examples() {
        let s = assemble_galerkin(1, BasisSpec::LandauWeighted, 1).unwrap();
        assert_eq!(s.gram, vec![vec![rat(8, 3)]]);
        assert_eq!(s.load, vec![rat(4, 3)]);
        let s = assemble_galerkin(1, BasisSpec::LandauExcluded, 1).unwrap();
        assert_eq!(s.gram, vec![vec![rat(256, 105)]]);
        assert_eq!(s.load, vec![rat(16, 15)]);
        let s = assemble_galerkin(2, BasisSpec::LandauWeighted, 1).unwrap();
        assert_eq!(s.gram, vec![vec![rat(128, 5)]]);
        assert_eq!(s.load, vec![rat(16, 15)]);
        assert!(assemble_galerkin(1, BasisSpec::LandauWeighted, 0).is_err());
    }

    #[test]
    fn gram_is_symmetric() {
        let s = assemble_galerkin(2, BasisSpec::LandauExcluded, 5).unwrap();
        for m in 0..5 {
            for n in 0..5 {
                assert_eq!(s.gram[m][n], s.gram[n][m]);
            }
        }
    }

    #[test]
    fn constrained_min_examples() {
        let v = |k, spec, size| constrained_min(&assemble_galerkin(k, spec, size).unwrap()).unwrap();
        assert_eq!(v(1, BasisSpec::LandauWeighted, 1), rat(2, 3));
        assert_eq!(v(1, BasisSpec::LandauExcluded, 1), rat(7, 15));
        assert_eq!(v(2, BasisSpec::LandauWeighted, 3), rat(2, 45));
    }

    #[test]
    fn sweep_examples() {
        let rows = convergence_sweep(1, BasisSpec::LandauWeighted, 4).unwrap();
        assert!(rows.iter().all(|r| r.value == rat(2, 3) && r.gap.is_zero()));
        let rows = convergence_sweep(1, BasisSpec::LandauExcluded, 8).unwrap();
        assert_eq!(rows[0].value, rat(7, 15));
        assert!(rows.windows(2).all(|w| w[0].value <= w[1].value));
        assert!(rows[7].value > rows[0].value);
        let one = convergence_sweep(2, BasisSpec::LandauExcluded, 1).unwrap();
        let l3 = landau_kernel(3);
        let load = l3.integrate_interval(&int(-1), &int(1));
        let gram = (l3.differentiate(2) * l3.differentiate(2)).integrate_interval(&int(-1), &int(1));
        assert_eq!(one[0].value, &load * &load / gram);
        assert!(one[0].value < rat(2, 45));
    }

    #[test]
    fn fixed_point_examples() {
        let s = assemble_galerkin(1, BasisSpec::LandauWeighted, 1).unwrap();
        let r = bvp_fixed_point(&s, &[int(1)], 10).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.lambda, rat(3, 2));
        let s = assemble_galerkin(2, BasisSpec::LandauWeighted, 1).unwrap();
        assert_eq!(bvp_fixed_point(&s, &[int(1)], 10).unwrap().lambda, rat(45, 2));
        let s = assemble_galerkin(1, BasisSpec::LandauWeighted, 3).unwrap();
        let r = bvp_fixed_point(&s, &[int(1), rat(1, 5), rat(1, 3)], 10).unwrap();
        assert_eq!(r.lambda, rat(3, 2));
        // minimiser is a multiple of (1 - x^2): higher coefficients vanish
        assert!(r.coefficients[1].is_zero() && r.coefficients[2].is_zero());
        assert_eq!(r.coefficients[0], rat(3, 4));
    }

    #[test]
    fn fixed_point_rejects_zero_init() {
        let s = assemble_galerkin(1, BasisSpec::LandauWeighted, 2).unwrap();
        assert!(bvp_fixed_point(&s, &[int(0), int(0)], 5).is_err());
        assert!(bvp_fixed_point(&s, &[int(1)], 5).is_err());
    }

    #[test]
    fn fixed_point_from_sign_changing_start_recovers_positive_solution() {
        // u0 = (1-x^2) x changes sign; one solve with the frozen sign pattern
        // gives an odd iterate, then the pattern settles
        let s = assemble_galerkin(1, BasisSpec::LandauWeighted, 4).unwrap();
        let r = bvp_fixed_point(&s, &[int(0), int(1), int(0), int(0)], 20);
        match r {
            Ok(fp) => assert!(fp.sign_pattern_stable && fp.lambda.is_positive()),
            Err(Error::NonConvergence(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
