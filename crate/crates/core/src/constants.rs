//! Closed-form sharp constants and the cross-check table.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{double_factorial, factorial, int, pow, radical_eval, rat, RadicalScalar, Rational};
use crate::kernel::{KernelB, NodeSet};
use crate::poly::{landau_kernel, legendre_roots, monic_legendre};
use crate::variational::{assemble_galerkin, constrained_min, kalyabin_bounds, BasisSpec};
use crate::verify::ser_rational;

fn odd_double_factorial(k: u32) -> Rational {
    double_factorial(2 * k as i64 - 1).expect("2k-1 >= -1")
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    Ok(())
}

/// `c^2 = 1 / (((2k-1)!!)^2 (k + 1/2))`.
pub fn sharp_constant_squared(k: u32) -> Rational {
    let df = odd_double_factorial(k);
    Rational::one() / (&df * &df * (int(k as i64) + rat(1, 2)))
}

/// `c = 1 / ((2k-1)!! sqrt(k + 1/2))`, held as `(1/(2k-1)!!) sqrt(2/(2k+1))`.
pub fn sharp_constant(k: u32) -> RadicalScalar {
    let r = rat(2, 2 * k as i64 + 1);
    RadicalScalar::new(Rational::one() / odd_double_factorial(k), r, 0).expect("positive radicand")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalRatio {
    /// `int |L_k|`
    pub l1: Rational,
    /// `int (L_k^(k))^2`
    pub deriv_l2_sq: Rational,
    pub ratio: RadicalScalar,
}

/// Norms of the Landau kernel, once in closed form and once by integrating
/// the expanded polynomial; the two must agree exactly.
pub fn extremal_ratio(k: u32) -> Result<ExtremalRatio> {
    check_k(k)?;
    let (lo, hi) = (int(-1), int(1));
    let fk2 = factorial(k) * factorial(k);
    let p = pow(&int(2), 2 * k + 1);
    let kk = int(2 * k as i64 + 1);
    let l1_closed = &fk2 / factorial(2 * k) * &p / &kk;
    let d_closed = &fk2 * &p / &kk;

    let lk = landau_kernel(k);
    // L_k >= 0 on [-1, 1], so the L^1 norm is the plain integral
    let l1 = lk.integrate_interval(&lo, &hi);
    let dk = lk.differentiate(k as usize);
    let d = (&dk * &dk).integrate_interval(&lo, &hi);
    if l1 != l1_closed {
        return Err(Error::Identity(format!("L^1 norm of L_{k}: integrated {l1}, closed form {l1_closed}")));
    }
    if d != d_closed {
        return Err(Error::Identity(format!(
            "derivative norm of L_{k}: integrated {d}, closed form {d_closed}"
        )));
    }
    let ratio = RadicalScalar::new(l1.clone(), Rational::one() / &d, 0)?;
    Ok(ExtremalRatio {
        l1,
        deriv_l2_sq: d,
        ratio,
    })
}

/// `int_{-1}^{1} P_k^2` for the monic Legendre polynomial, by integration.
pub fn monic_legendre_norm_sq(k: u32) -> Rational {
    let p = monic_legendre(k);
    (&p * &p).integrate_interval(&int(-1), &int(1))
}

#[derive(Debug, Clone)]
pub struct KernelRouteCheck {
    /// `int (vertical integral)^2` at the root approximants
    pub norm_sq: Rational,
    /// `(k! c)^2`
    pub target_sq: Rational,
    pub tolerance: Rational,
    pub pass: bool,
}

/// The vertical integral of `B_k` at rational approximants of the Legendre
/// roots is a near-monic-Legendre polynomial; its `L^2` norm must sit within
/// `10^(4-digits)` of `k! c`.
pub fn kernel_route_check(k: u32, digits: usize) -> Result<KernelRouteCheck> {
    check_k(k)?;
    let nodes = NodeSet::new(legendre_roots(k, digits)?)?;
    let v = KernelB::new(nodes).vertical_integral_poly()?;
    let norm_sq = (&v * &v).integrate_interval(&int(-1), &int(1));
    let target_sq = sharp_constant_squared(k) * factorial(k) * factorial(k);
    let exp = digits.saturating_sub(4) as u32;
    let tolerance = Rational::one() / pow(&int(10), exp);
    // ||v|| >= ||P_k|| by minimality and ||v|| - ||P_k|| <= (A - B) / (2 sqrt B)
    let excess = &norm_sq - &target_sq;
    let pass = excess >= Rational::zero() && &excess * &excess <= int(4) * &tolerance * &tolerance * &target_sq;
    Ok(KernelRouteCheck {
        norm_sq,
        target_sq,
        tolerance,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub k: u32,
    pub c_exact: RadicalScalar,
    #[serde(serialize_with = "ser_rational")]
    pub c_squared: Rational,
    pub c_decimal: String,
    #[serde(serialize_with = "ser_rational")]
    pub landau_l1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub landau_deriv_l2_sq: Rational,
    pub kalyabin_lower: RadicalScalar,
    pub kalyabin_upper: RadicalScalar,
    pub kalyabin_upper_decimal: String,
    #[serde(serialize_with = "ser_rational")]
    pub galerkin_check: Rational,
}

fn constants_row(k: u32, digits: usize) -> Result<ConstantsRow> {
    let c = sharp_constant(k);
    let c2 = sharp_constant_squared(k);
    let ext = extremal_ratio(k)?;
    let kb = kalyabin_bounds(k, &Rational::one())?;
    let lower = kb
        .lower
        .exact()
        .cloned()
        .ok_or_else(|| Error::Identity(format!("Kalyabin lower bound not exact at k = {k}")))?;
    let upper = kb
        .upper
        .exact()
        .cloned()
        .ok_or_else(|| Error::Identity(format!("Kalyabin upper bound not exact at k = {k}")))?;
    let galerkin = constrained_min(&assemble_galerkin(k, BasisSpec::LandauWeighted, 1)?)?;

    let fail = |what: &str| Err(Error::Identity(format!("k = {k}: {what}")));
    if c.squared_rational().as_ref() != Some(&c2) {
        return fail("c^2 disagrees with the closed form");
    }
    if &ext.l1 * &ext.l1 / &ext.deriv_l2_sq != c2 || ext.ratio != c {
        return fail("Landau ratio differs from c");
    }
    if lower != c {
        return fail("Kalyabin lower bound differs from c");
    }
    if galerkin != c2 {
        return fail("Galerkin optimum differs from c^2");
    }
    Ok(ConstantsRow {
        k,
        c_decimal: radical_eval(&c, digits),
        c_exact: c,
        c_squared: c2,
        landau_l1: ext.l1,
        landau_deriv_l2_sq: ext.deriv_l2_sq,
        kalyabin_lower: lower,
        kalyabin_upper_decimal: radical_eval(&upper, digits),
        kalyabin_upper: upper,
        galerkin_check: galerkin,
    })
}

/// Rows for `k = 1..=k_max`, every row invariant checked before it is returned.
pub fn constants_table(k_max: u32, digits: usize) -> Result<Vec<ConstantsRow>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be >= 1".into()));
    }
    (1..=k_max).map(|k| constants_row(k, digits)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::radical_cmp;
    use std::cmp::Ordering;

    #[test]
    fn sharp_constant_examples() {
        assert_eq!(sharp_constant(1), RadicalScalar::sqrt(rat(2, 3)).unwrap());
        assert_eq!(radical_eval(&sharp_constant(1), 7), "0.8164966");
        assert_eq!(sharp_constant_squared(2), rat(2, 45));
        assert_eq!(radical_eval(&sharp_constant(2), 7), "0.2108185");
        let c3 = RadicalScalar::new(rat(1, 15), rat(2, 7), 0).unwrap();
        assert_eq!(sharp_constant(3), c3);
        assert_eq!(radical_eval(&sharp_constant(3), 6), "0.0356348");
    }

    #[test]
    fn legendre_consistency() {
        for k in 1..=10 {
            let f = factorial(k);
            assert_eq!(sharp_constant_squared(k) * &f * &f, monic_legendre_norm_sq(k), "k = {k}");
        }
    }

    #[test]
    fn extremal_examples() {
        let e = extremal_ratio(1).unwrap();
        assert_eq!((e.l1, e.deriv_l2_sq), (rat(4, 3), rat(8, 3)));
        assert_eq!(e.ratio, RadicalScalar::sqrt(rat(2, 3)).unwrap());
        let e = extremal_ratio(2).unwrap();
        assert_eq!((e.l1, e.deriv_l2_sq), (rat(16, 15), rat(128, 5)));
        assert_eq!(e.ratio.squared_rational().unwrap(), rat(2, 45));
        for k in 1..=10 {
            assert_eq!(extremal_ratio(k).unwrap().ratio, sharp_constant(k));
        }
        assert!(extremal_ratio(0).is_err());
    }

    #[test]
    fn table_examples() {
        let t = constants_table(1, 12).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].c_squared, rat(2, 3));
        assert_eq!(radical_eval(&t[0].kalyabin_upper, 5), "1.1107");
        let t = constants_table(3, 8).unwrap();
        let decimals: Vec<_> = t.iter().map(|r| r.c_decimal.clone()).collect();
        assert_eq!(decimals, ["0.81649658", "0.21081851", "0.035634832"]);
        assert!(constants_table(0, 12).is_err());
        for row in constants_table(6, 10).unwrap() {
            assert_eq!(radical_cmp(&row.c_exact, &row.kalyabin_upper), Ordering::Less);
        }
    }

    #[test]
    fn kernel_route() {
        for k in 1..=6 {
            for digits in [8, 20] {
                let chk = kernel_route_check(k, digits).unwrap();
                assert!(chk.pass, "k = {k}, digits = {digits}: {chk:?}");
            }
        }
    }
}
