//! Verification suites that drive every exact check and collect the outcome
//! in a serialisable report.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::constants::{sharp_constant, sharp_constant_squared};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, int, radical_cmp, rat, Rational};
use crate::kernel::{default_probes, sign_certificate, verify_lemma_interpolation, KernelB, NodeSet, SignMode};
use crate::poly::{landau_kernel, Poly};
use crate::variational::{
    assemble_galerkin, bvp_fixed_point, constrained_min, convergence_sweep, kalyabin_bounds, BasisSpec, SweepRow,
};

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&fmt_rational(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernel,
    Lemma,
    Galerkin,
    Bvp,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Lemma => "lemma",
            Suite::Galerkin => "galerkin",
            Suite::Bvp => "bvp",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub status: Status,
    /// False when the check rests on sampling or rounded inputs.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Case {
    fn new(id: impl Into<String>, exact: bool, witness: Option<String>) -> Self {
        Case {
            id: id.into(),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            exact,
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub basis: BasisSpec,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub k: u32,
    pub cases: Vec<Case>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepTable>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub k: u32,
    /// Fixed nodes for the kernel suite; random sets are drawn otherwise.
    pub nodes: Option<NodeSet>,
    pub mode: SignMode,
    /// Basis size for the galerkin and bvp suites.
    pub size: usize,
    pub seed: u64,
    /// Random node sets in the kernel suite.
    pub node_sets: usize,
    /// Random `y` values per node set for sign certificates.
    pub sign_samples: usize,
    /// Random point sets in the lemma suite.
    pub lemma_sets: usize,
}

impl VerifyOptions {
    pub fn new(k: u32) -> Self {
        VerifyOptions {
            k,
            nodes: None,
            mode: SignMode::Exact,
            size: 6,
            seed: 0,
            node_sets: 25,
            sign_samples: 25,
            lemma_sets: 200,
        }
    }
}

/// Runs a suite; `Err` only for invalid options, never for a failed check.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if opts.size == 0 {
        return Err(Error::InvalidArgument("size must be >= 1".into()));
    }
    if let Some(nodes) = &opts.nodes {
        if nodes.len() != opts.k as usize {
            return Err(Error::InvalidArgument(format!(
                "k = {} needs {} nodes, got {}",
                opts.k,
                opts.k,
                nodes.len()
            )));
        }
    }
    let start = Instant::now();
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    let mut sweeps = Vec::new();
    let parts: &[Suite] = match suite {
        Suite::All => &[Suite::Kernel, Suite::Lemma, Suite::Galerkin, Suite::Bvp],
        _ => std::slice::from_ref(&suite),
    };
    for &part in parts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((part as u64) << 32) ^ opts.k as u64);
        match part {
            Suite::Kernel => kernel_suite(opts, &mut rng, &mut cases, &mut notes),
            Suite::Lemma => lemma_suite(opts, &mut rng, &mut cases),
            Suite::Galerkin => galerkin_suite(opts, &mut cases, &mut sweeps),
            Suite::Bvp => bvp_suite(opts, &mut rng, &mut cases, &mut notes),
            Suite::All => unreachable!(),
        }
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerifyReport {
        suite,
        k: opts.k,
        pass: cases.iter().all(Case::passed),
        cases,
        notes,
        sweeps,
        elapsed: start.elapsed(),
    })
}

fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let d = rng.gen_range(1..=20i64);
    rat(rng.gen_range(-bound * d..=bound * d), d)
}

/// First failure across node sets, as `Some(witness)`.
type Outcome = Option<String>;

fn first_failure(outcome: &mut Outcome, set: usize, witness: Option<String>) {
    if outcome.is_none() {
        if let Some(w) = witness {
            *outcome = Some(format!("set {set}: {w}"));
        }
    }
}

fn kernel_suite<R: Rng>(opts: &VerifyOptions, rng: &mut R, cases: &mut Vec<Case>, notes: &mut Vec<String>) {
    let k = opts.k;
    let sets: Vec<NodeSet> = match &opts.nodes {
        Some(n) => vec![n.clone()],
        None => (0..opts.node_sets.max(1))
            .map(|_| NodeSet::random(k as usize, rng))
            .collect(),
    };
    if let Some(n) = &opts.nodes {
        let outside = n.outside_unit_interval();
        if !outside.is_empty() {
            notes.push(format!(
                "nodes outside (-1, 1): {}",
                outside.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
            ));
        }
    }

    let mut vanish = None;
    let mut jump = None;
    let mut off_hull = None;
    let mut monic = None;
    let mut sign = None;
    let mut repro = None;
    let families = [
        ("landau", landau_kernel(k)),
        ("landau_x", &landau_kernel(k) * &Poly::x()),
        ("landau_next", landau_kernel(k + 1)),
    ];
    let probes = default_probes();

    for (i, nodes) in sets.iter().enumerate() {
        let kb = KernelB::new(nodes.clone());
        let mut xs: Vec<Rational> = vec![int(-1), int(0), int(1)];
        xs.extend((0..47).map(|_| random_rational(rng, 1)));

        let w = nodes.nodes().iter().find_map(|yn| {
            xs.iter()
                .find(|x| !kb.eval(x, yn).is_zero())
                .map(|x| format!("B({x}, {yn}) = {}", kb.eval(x, yn)))
        });
        first_failure(&mut vanish, i, w);

        let j = kb.continuity_jump_poly();
        first_failure(&mut jump, i, (!j.is_zero()).then(|| format!("jump polynomial {j}")));

        let mut w = None;
        for _ in 0..50 {
            let (x, y) = (random_rational(rng, 2), random_rational(rng, 2));
            // B_1 is discontinuous at x in {0, y, y_n}
            if k == 1 && (x.is_zero() || x == y || nodes.nodes().contains(&x)) {
                continue;
            }
            if let Some(v) = kb.closed_form_off_hull(&x, &y) {
                let actual = kb.eval(&x, &y);
                if actual != v {
                    w = Some(format!("B({x}, {y}) = {actual}, closed form {v}"));
                    break;
                }
            }
        }
        first_failure(&mut off_hull, i, w);

        let w = match kb.vertical_integral_poly() {
            Err(e) => Some(e.to_string()),
            Ok(p) => {
                let target = kb.signed_node_product();
                let fk = crate::exactnum::factorial(k);
                (0..10).map(|_| random_rational(rng, 1)).find_map(|y| {
                    let v = kb.vertical_integral_at(&y) * &fk;
                    (v != target.eval(&y) || p.eval(&y) != v)
                        .then(|| format!("at y = {y}: k! int B dx = {v}, expected {}", target.eval(&y)))
                })
            }
        };
        first_failure(&mut monic, i, w);

        let mut w = None;
        let mut ys: Vec<Rational> = nodes.nodes().to_vec();
        ys.extend((0..opts.sign_samples).map(|_| random_rational(rng, 1)));
        for y in &ys {
            let report = sign_certificate(&kb, y, opts.mode);
            if report.class.is_violation() {
                w = Some(format!("y = {y}: {:?}", report.class));
                break;
            }
        }
        first_failure(&mut sign, i, w);

        let w = families.iter().find_map(|(name, f)| match kb.reproduce(f, &probes) {
            Ok(dev) if dev.is_zero() => None,
            Ok(dev) => Some(format!("{name}: deviation {dev}")),
            Err(e) => Some(format!("{name}: {e}")),
        });
        first_failure(&mut repro, i, w);
    }

    let sign_exact = opts.mode == SignMode::Exact;
    cases.push(Case::new("kernel.closed_form_off_hull", true, off_hull));
    cases.push(Case::new("kernel.continuity_jump", true, jump));
    cases.push(Case::new("kernel.monic_identity", true, monic));
    cases.push(Case::new("kernel.node_vanishing", true, vanish));
    cases.push(Case::new("kernel.reproduce", true, repro));
    cases.push(Case::new("kernel.sign_constancy", sign_exact, sign));
}

/// `count` distinct rationals in `(lo, hi)` with `lo, hi` in `{-1, 0, 1}`.
fn random_points<R: Rng>(rng: &mut R, count: usize, lo: i64, hi: i64) -> Vec<Rational> {
    let mut pts: Vec<Rational> = Vec::with_capacity(count);
    while pts.len() < count {
        let d = rng.gen_range(2..=30i64);
        let y = rat(rng.gen_range(lo * d + 1..hi * d), d);
        if !pts.contains(&y) {
            pts.push(y);
        }
    }
    pts
}

fn lemma_suite<R: Rng>(opts: &VerifyOptions, rng: &mut R, cases: &mut Vec<Case>) {
    let k = opts.k;
    let n = k as usize + 1;
    let power = Poly::monomial(Rational::one(), k as usize - 1);
    let (mut mixed, mut positive, mut negative) = (None, None, None);
    let show = |pts: &[Rational]| pts.iter().map(fmt_rational).collect::<Vec<_>>().join(", ");
    for i in 0..opts.lemma_sets.max(3) {
        let (pts, slot) = match i % 3 {
            0 => (random_points(rng, n, 0, 1), &mut positive),
            1 => (random_points(rng, n, -1, 0), &mut negative),
            _ => {
                // at least one strictly negative and one strictly positive point
                let mut p = random_points(rng, n, -1, 1);
                if !p.iter().any(|y| y.is_negative()) {
                    let j = p.iter().position(|y| y.is_positive()).expect("distinct points");
                    p[j] = -&p[j];
                }
                if !p.iter().any(|y| y.is_positive()) {
                    let j = p.iter().position(|y| y.is_negative()).expect("distinct points");
                    p[j] = -&p[j];
                }
                (p, &mut mixed)
            }
        };
        let w = match verify_lemma_interpolation(k, &pts) {
            Err(e) => Some(e.to_string()),
            Ok(r) => match i % 3 {
                0 if r.full_match.as_ref() != Some(&power) => Some(format!("[{}]: no y^{} interpolant", show(&pts), k - 1)),
                1 if !r.full_match.as_ref().is_some_and(Poly::is_zero) => Some(format!("[{}]: no zero interpolant", show(&pts))),
                2 if r.full_match.is_some() => Some(format!(
                    "[{}]: mixed signs but interpolant {}",
                    show(&pts),
                    r.full_match.as_ref().expect("checked")
                )),
                _ if !r.consistent => Some(format!("[{}]: inconsistent report", show(&pts))),
                _ => None,
            },
        };
        first_failure(slot, i, w);
    }
    cases.push(Case::new("lemma.mixed_signs_no_interpolant", true, mixed));
    cases.push(Case::new("lemma.negative_points_zero", true, negative));
    cases.push(Case::new("lemma.positive_points_power", true, positive));
}

fn galerkin_suite(opts: &VerifyOptions, cases: &mut Vec<Case>, sweeps: &mut Vec<SweepTable>) {
    let k = opts.k;
    let c2 = sharp_constant_squared(k);
    for spec in [BasisSpec::LandauWeighted, BasisSpec::LandauExcluded] {
        let id = format!("galerkin.{}", spec.name());
        match convergence_sweep(k, spec, opts.size) {
            Err(e) => cases.push(Case::new(format!("{id}.sweep"), true, Some(e.to_string()))),
            Ok(rows) => {
                cases.push(Case::new(format!("{id}.sweep"), true, None));
                if spec == BasisSpec::LandauWeighted {
                    let w = rows
                        .iter()
                        .find(|r| !r.gap.is_zero())
                        .map(|r| format!("size {}: c'^2 = {}, c^2 = {c2}", r.size, r.value));
                    cases.push(Case::new(format!("{id}.exact"), true, w));
                } else {
                    let w = rows
                        .iter()
                        .find(|r| !r.gap.is_positive())
                        .map(|r| format!("size {}: excluded basis reached c^2", r.size));
                    cases.push(Case::new(format!("{id}.strictly_below"), true, w));
                }
                sweeps.push(SweepTable { basis: spec, rows });
            }
        }
    }
    let w = match kalyabin_bounds(k, &Rational::one()) {
        Err(e) => Some(e.to_string()),
        Ok(b) => {
            let c = sharp_constant(k);
            match (b.lower.exact(), b.upper.exact()) {
                (Some(lo), Some(hi)) if *lo == c && radical_cmp(&c, hi).is_lt() => None,
                _ => Some(format!("lower {:?}, upper {:?}, c = {c}", b.lower, b.upper)),
            }
        }
    };
    cases.push(Case::new("galerkin.kalyabin_sandwich", true, w));
}

fn bvp_suite<R: Rng>(opts: &VerifyOptions, rng: &mut R, cases: &mut Vec<Case>, notes: &mut Vec<String>) {
    let k = opts.k;
    let size = opts.size;
    let sys = match assemble_galerkin(k, BasisSpec::LandauWeighted, size) {
        Ok(s) => s,
        Err(e) => {
            cases.push(Case::new("bvp.assemble", true, Some(e.to_string())));
            return;
        }
    };
    // 1 + sum c_n x^n with sum |c_n| <= 1/2 keeps u positive on (-1, 1)
    let mut init = vec![Rational::one()];
    let bound = 2 * size.max(2) as i64;
    init.extend((1..size).map(|_| rat(rng.gen_range(-10..=10), 10 * bound)));
    let w_fixed;
    let mut w_product = None;
    let mut w_value = None;
    match bvp_fixed_point(&sys, &init, 50) {
        Err(e) => w_fixed = Some(e.to_string()),
        Ok(fp) => {
            w_fixed = None;
            notes.push(format!("bvp converged in {} iteration(s), lambda = {}", fp.iterations, fp.lambda));
            match constrained_min(&sys) {
                Ok(m) if &fp.lambda * &m == Rational::one() => {}
                Ok(m) => w_product = Some(format!("lambda * c'^2 = {}", &fp.lambda * &m)),
                Err(e) => w_product = Some(e.to_string()),
            }
            let expected = Rational::one() / sharp_constant_squared(k);
            if fp.lambda != expected {
                w_value = Some(format!("lambda = {}, expected {expected}", fp.lambda));
            }
        }
    }
    cases.push(Case::new("bvp.fixed_point", true, w_fixed));
    cases.push(Case::new("bvp.lambda_equals_inverse_c2", true, w_value));
    cases.push(Case::new("bvp.lambda_times_min", true, w_product));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_suite_fixed_nodes() {
        let mut opts = VerifyOptions::new(2);
        opts.nodes = Some(NodeSet::new(vec![rat(-1, 2), rat(1, 2)]).unwrap());
        let r = run_suite(Suite::Kernel, &opts).unwrap();
        assert!(r.pass, "{:?}", r.cases);
        assert_eq!(r.cases.len(), 6);
        let ids: Vec<_> = r.cases.iter().map(|c| c.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn wrong_node_count_is_rejected() {
        let mut opts = VerifyOptions::new(3);
        opts.nodes = Some(NodeSet::new(vec![rat(-1, 2), rat(1, 2)]).unwrap());
        assert!(run_suite(Suite::Kernel, &opts).is_err());
        assert!(run_suite(Suite::Lemma, &VerifyOptions::new(0)).is_err());
    }

    #[test]
    fn every_suite_passes_small_k() {
        for k in 1..=3 {
            let mut opts = VerifyOptions::new(k);
            opts.node_sets = 4;
            opts.lemma_sets = 30;
            opts.size = 4;
            let r = run_suite(Suite::All, &opts).unwrap();
            assert!(r.pass, "k = {k}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn galerkin_report_has_zero_final_gap() {
        let mut opts = VerifyOptions::new(1);
        opts.size = 6;
        let r = run_suite(Suite::Galerkin, &opts).unwrap();
        let weighted = &r.sweeps[0];
        assert_eq!(weighted.basis, BasisSpec::LandauWeighted);
        assert!(weighted.rows.last().unwrap().gap.is_zero());
    }

    #[test]
    fn reports_are_reproducible() {
        let mut opts = VerifyOptions::new(2);
        opts.node_sets = 3;
        opts.seed = 7;
        let a = run_suite(Suite::Kernel, &opts).unwrap();
        let b = run_suite(Suite::Kernel, &opts).unwrap();
        assert_eq!(a.cases, b.cases);
    }
}
