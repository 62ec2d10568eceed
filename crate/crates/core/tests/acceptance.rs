use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharpsob::constants::{extremal_ratio, monic_legendre_norm_sq, sharp_constant, sharp_constant_squared};
use sharpsob::exactnum::{double_factorial, factorial, int, radical_cmp, radical_eval, rat, Rational};
use sharpsob::kernel::SignMode;
use sharpsob::variational::{
    assemble_galerkin, bvp_fixed_point, constrained_min, convergence_sweep, kalyabin_bounds, BasisSpec,
};
use sharpsob::verify::{run_suite, Suite, VerifyOptions};
use sharpsob::RadicalScalar;

const SEED: u64 = 20240607;

fn report(n: u32, title: &str, start: Instant, budget: Duration, failures: Vec<String>) {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("runtime {elapsed:?} over budget {budget:?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} [{status}] {title} ({elapsed:.2?})");
    for f in &failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

#[test]
fn criterion_1_sharp_constant_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=10u32 {
        let df = double_factorial(2 * k as i64 - 1).unwrap();
        let closed = Rational::one() / (&df * &df * (int(k as i64) + rat(1, 2)));
        let c2 = sharp_constant(k).squared_rational().unwrap();
        if c2 != closed || sharp_constant_squared(k) != closed {
            failures.push(format!("k = {k}: c^2 = {c2}, closed form {closed}"));
        }
        let f = factorial(k);
        let legendre = monic_legendre_norm_sq(k) / (&f * &f);
        if legendre != closed {
            failures.push(format!("k = {k}: ||P_k||^2/(k!)^2 = {legendre}"));
        }
    }
    report(1, "c^2 = 1/(((2k-1)!!)^2 (k+1/2)) = ||P_k||^2/(k!)^2, k <= 10", start, Duration::from_secs(1), failures);
}

#[test]
fn criterion_2_extremal_equality() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=10u32 {
        match extremal_ratio(k) {
            Err(e) => failures.push(format!("k = {k}: {e}")),
            Ok(e) if e.ratio != sharp_constant(k) => failures.push(format!("k = {k}: ratio {}", e.ratio)),
            Ok(_) => {}
        }
    }
    let e1 = extremal_ratio(1).unwrap();
    if (e1.l1, e1.deriv_l2_sq) != (rat(4, 3), rat(8, 3)) {
        failures.push("k = 1 norms differ from 4/3, 8/3".into());
    }
    let e2 = extremal_ratio(2).unwrap();
    if (e2.l1, e2.deriv_l2_sq) != (rat(16, 15), rat(128, 5)) {
        failures.push("k = 2 norms differ from 16/15, 128/5".into());
    }
    report(2, "||L_k||_1 / ||L_k^(k)||_2 = c, k <= 10", start, Duration::from_secs(1), failures);
}

#[test]
fn criterion_3_kernel_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=4u32 {
        let mut opts = VerifyOptions::new(k);
        opts.seed = SEED;
        opts.node_sets = 25;
        opts.mode = SignMode::Exact;
        let r = run_suite(Suite::Kernel, &opts).unwrap();
        for c in r.failures() {
            failures.push(format!("k = {k}: {} {:?}", c.id, c.witness));
        }
        if r.cases.iter().any(|c| !c.exact) {
            failures.push(format!("k = {k}: non-exact case in report"));
        }
    }
    report(3, "kernel identities on 25 random node sets, k <= 4", start, Duration::from_secs(60), failures);
}

#[test]
fn criterion_4_kalyabin_coincidence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=6u32 {
        let b = kalyabin_bounds(k, &Rational::one()).unwrap();
        let c = sharp_constant(k);
        match (b.lower.exact(), b.upper.exact()) {
            (Some(lo), Some(hi)) => {
                if *lo != c {
                    failures.push(format!("k = {k}: lower {lo} != c {c}"));
                }
                if radical_cmp(hi, &c) != Ordering::Greater {
                    failures.push(format!("k = {k}: upper {hi} not above c"));
                }
            }
            _ => failures.push(format!("k = {k}: bounds not exact")),
        }
    }
    let upper = kalyabin_bounds(1, &Rational::one()).unwrap().upper;
    let expected = RadicalScalar::new(rat(1, 4), int(2), 1).unwrap();
    if upper.exact() != Some(&expected) {
        failures.push(format!("k = 1 upper {upper:?} is not pi sqrt(2)/4"));
    }
    let decimal: f64 = radical_eval(&expected, 12).parse().unwrap();
    if (decimal - 1.1107).abs() > 1e-4 {
        failures.push(format!("k = 1 upper decimal {decimal}"));
    }
    report(4, "Kalyabin lower = c, upper > c, k <= 6", start, Duration::from_secs(1), failures);
}

#[test]
fn criterion_5_galerkin_exactness_and_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=3u32 {
        let c2 = sharp_constant_squared(k);
        for size in 1..=8 {
            let v = constrained_min(&assemble_galerkin(k, BasisSpec::LandauWeighted, size).unwrap()).unwrap();
            if v != c2 {
                failures.push(format!("k = {k}, size {size}: weighted c'^2 = {v}"));
            }
        }
    }
    let c2 = sharp_constant_squared(1);
    let rows = convergence_sweep(1, BasisSpec::LandauExcluded, 8).unwrap();
    if rows[0].value != rat(7, 15) {
        failures.push(format!("size 1 spot check: {} != 7/15", rows[0].value));
    }
    for w in rows.windows(2) {
        if w[1].value <= w[0].value {
            failures.push(format!(
                "not strictly increasing: size {} -> {}: {} -> {}",
                w[0].size, w[1].size, w[0].value, w[1].value
            ));
        }
    }
    let last = rows.last().unwrap();
    let tol = &c2 / int(1000);
    if last.gap >= tol {
        failures.push(format!(
            "final gap {} (= {:.4} c^2) not below c^2/1000",
            last.gap,
            sharpsob::exactnum::to_f64(&(&last.gap / &c2))
        ));
    }
    report(5, "weighted bases exact; excluded sweep converges", start, Duration::from_secs(30), failures);
}

#[test]
fn criterion_6_bvp_fixed_point() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 1..=2u32 {
        for size in 1..=4usize {
            let sys = assemble_galerkin(k, BasisSpec::LandauWeighted, size).unwrap();
            // 1 + small perturbation stays positive on (-1, 1)
            let mut init = vec![Rational::one()];
            init.extend((1..size).map(|_| rat(rng.gen_range(-5..=5), 10 * size as i64)));
            match bvp_fixed_point(&sys, &init, 50) {
                Err(e) => failures.push(format!("k = {k}, size {size}: {e}")),
                Ok(fp) => {
                    let m = constrained_min(&sys).unwrap();
                    if &fp.lambda * &m != Rational::one() {
                        failures.push(format!("k = {k}, size {size}: lambda c'^2 = {}", &fp.lambda * &m));
                    }
                    let expected = if k == 1 { rat(3, 2) } else { rat(45, 2) };
                    if fp.lambda != expected {
                        failures.push(format!("k = {k}, size {size}: lambda = {}", fp.lambda));
                    }
                }
            }
        }
    }
    report(6, "BVP fixed point lambda = 3/2, 45/2", start, Duration::from_secs(5), failures);
}

#[test]
fn criterion_7_lemma_checker() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=3u32 {
        let mut opts = VerifyOptions::new(k);
        opts.seed = SEED;
        opts.lemma_sets = 200;
        let r = run_suite(Suite::Lemma, &opts).unwrap();
        for c in r.failures() {
            failures.push(format!("k = {k}: {} {:?}", c.id, c.witness));
        }
        if r.cases.is_empty() || !r.cases.iter().all(|c| c.exact) {
            failures.push(format!("k = {k}: unexpected case list"));
        }
    }
    report(7, "lemma interpolation on 200 random point sets, k <= 3", start, Duration::from_secs(10), failures);
}
