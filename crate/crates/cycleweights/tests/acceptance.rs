//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `--nocapture` to see them). Exact small-n quantities are
//! held to oracle equivalence; large-n limit behavior is held to pinned
//! tolerances and convergence trends at the stated sizes.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use cycleweights::exact::{
    compute_norms, dist_k, dist_l1, dist_rj, expected_k, factorial_moment, NormTable,
};
use cycleweights::gof::{ks_samples_vs_cdf, total_variation_truncated};
use cycleweights::limits::{
    algebraic_expected_k_constant, poisson_cdf, poisson_pmf, subexp_growth_concentration_point,
    superexp_decay_expected_rj_log, tail_length_probs,
};
use cycleweights::montecarlo::{draw_batch, run_batch};
use cycleweights::saddle::{asymptotic_hn, asymptotic_theta, ratio_bounds, solve_saddle, GenFnSpec};
use cycleweights::special::reg_lower_gamma;
use cycleweights::weights::{build_weights, FamilyParams, WeightTable};

const MAX_N: usize = 20_000;

fn check(name: &str, pass: bool, detail: String) {
    if pass {
        println!("[PASS] {name}: {detail}");
    } else {
        println!("[FAIL] {name}: {detail}");
        panic!("{name} failed: {detail}");
    }
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_grid(xs: &[f64]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", inner.join(", "))
}

fn nonincreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0])
}

fn algebraic_norms() -> &'static NormTable {
    static CELL: OnceLock<NormTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_weights(&FamilyParams::algebraic(1.0).unwrap(), MAX_N).unwrap();
        compute_norms(&w, MAX_N).unwrap()
    })
}

fn subexp_weights() -> &'static WeightTable {
    static CELL: OnceLock<WeightTable> = OnceLock::new();
    CELL.get_or_init(|| {
        build_weights(&FamilyParams::sub_exp_growth(1.0 / 3.0).unwrap(), MAX_N).unwrap()
    })
}

fn subexp_norms() -> &'static NormTable {
    static CELL: OnceLock<NormTable> = OnceLock::new();
    CELL.get_or_init(|| compute_norms(subexp_weights(), MAX_N).unwrap())
}

fn ewens_norms() -> &'static NormTable {
    static CELL: OnceLock<NormTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_weights(&FamilyParams::ewens(2.0).unwrap(), 10_000).unwrap();
        compute_norms(&w, 10_000).unwrap()
    })
}

fn subdecay_norms() -> &'static NormTable {
    static CELL: OnceLock<NormTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_weights(&FamilyParams::sub_exp_decay_power(2.0).unwrap(), MAX_N).unwrap();
        compute_norms(&w, MAX_N).unwrap()
    })
}

fn superdecay_norms() -> &'static NormTable {
    static CELL: OnceLock<NormTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_weights(&FamilyParams::super_exp_decay(2.0).unwrap(), MAX_N).unwrap();
        compute_norms(&w, MAX_N).unwrap()
    })
}

/// C1: every exact quantity matches exhaustive enumeration for all family
/// presets and n <= 8, to 1e-10 relative, in under 10 seconds.
#[test]
fn c01_enumeration_oracle() {
    let start = Instant::now();
    let presets = vec![
        FamilyParams::uniform(),
        FamilyParams::ewens(2.0).unwrap(),
        FamilyParams::asymptotic_ewens(2.0).unwrap(),
        FamilyParams::algebraic(1.0).unwrap(),
        FamilyParams::sub_exp_growth(1.0 / 3.0).unwrap(),
        FamilyParams::super_exp_growth(1.5).unwrap(),
        FamilyParams::sub_exp_decay_power(2.0).unwrap(),
        FamilyParams::sub_exp_decay_stretched(0.5).unwrap(),
        FamilyParams::super_exp_decay(2.0).unwrap(),
    ];
    let tol = 1e-10;
    let mut worst = 0.0_f64;
    let rel = |got: f64, expect: f64| {
        if expect == 0.0 {
            got.abs()
        } else {
            (got - expect).abs() / expect.abs()
        }
    };
    for params in &presets {
        let weights = build_weights(params, 8).unwrap();
        let thetas: Vec<f64> = weights.log_thetas().iter().map(|lt| lt.exp()).collect();
        let norms = compute_norms(&weights, 8).unwrap();
        for n in 1..=8 {
            worst = worst.max(rel(norms.log_h(n).exp(), common::oracle_h(n, &thetas)));
            let l1 = dist_l1(&norms, n).unwrap().probs();
            for (p, q) in l1.iter().zip(common::oracle_l1(n, &thetas)) {
                worst = worst.max(rel(*p, q));
            }
            for j in 1..=n {
                let rj = dist_rj(&norms, n, j).unwrap().probs();
                for (p, q) in rj.iter().zip(common::oracle_rj(n, j, &thetas)) {
                    worst = worst.max(rel(*p, q));
                }
            }
            let k = dist_k(&norms, n).unwrap().probs();
            for (p, q) in k.iter().zip(common::oracle_k(n, &thetas)) {
                worst = worst.max(rel(*p, q));
            }
            worst = worst.max(rel(
                expected_k(&norms, n).unwrap(),
                common::oracle_expected_k(n, &thetas),
            ));
            for orders in common::all_order_maps(n) {
                worst = worst.max(rel(
                    factorial_moment(&norms, n, &orders).unwrap(),
                    common::oracle_factorial_moment(n, &orders, &thetas),
                ));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        "C01 enumeration oracle",
        worst <= tol && elapsed < 10.0,
        format!("max rel err {worst:.2e} (tol {tol:.0e}), {elapsed:.2}s (cap 10s)"),
    );
}

/// C2: constant weights theta = 2 reproduce the rising-factorial closed
/// form h_n = Gamma(theta+n)/(Gamma(theta) n!) to 1e-8 up to n = 500,
/// in under a second.
#[test]
fn c02_constant_weights_closed_form() {
    let start = Instant::now();
    let theta = 2.0;
    let w = build_weights(&FamilyParams::ewens(theta).unwrap(), 500).unwrap();
    let norms = compute_norms(&w, 500).unwrap();
    let mut log_closed = 0.0;
    let mut worst = 0.0_f64;
    for n in 1..=500usize {
        log_closed += (theta + n as f64 - 1.0).ln() - (n as f64).ln();
        worst = worst.max(((norms.log_h(n) - log_closed).exp() - 1.0).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        "C02 closed-form norms",
        worst <= 1e-8 && elapsed < 1.0,
        format!("max rel err {worst:.2e} (tol 1e-8), {elapsed:.3}s (cap 1s)"),
    );
}

/// C3: asymptotically constant weights theta_j = 2 + 1/j: the number of
/// fixed points converges to Poisson(theta_1 = 3) in total variation,
/// decreasing along n in {500, 1000, 2000, 5000} and <= 0.02 at 5000.
#[test]
fn c03_poisson_limit_for_fixed_points() {
    let params = FamilyParams::asymptotic_ewens(2.0).unwrap();
    let w = build_weights(&params, 5_000).unwrap();
    let lambda = w.log_theta(1).exp();
    let mut tvs = Vec::new();
    for &n in &[500usize, 1_000, 2_000, 5_000] {
        let norms = compute_norms(&w, n).unwrap();
        let probs = dist_rj(&norms, n, 1).unwrap().probs();
        let poisson: Vec<f64> = (0..probs.len()).map(|k| poisson_pmf(lambda, k)).collect();
        let tail = 1.0 - poisson_cdf(lambda, probs.len() - 1);
        tvs.push(total_variation_truncated(&probs, &poisson, tail));
    }
    let last = *tvs.last().unwrap();
    check(
        "C03 Poisson limit of R_1",
        strictly_decreasing(&tvs) && last <= 0.02,
        format!("TV along n grid {}, final {last:.3e} (tol 0.02)", fmt_grid(&tvs)),
    );
}

/// C4: algebraic weights gamma = 1: the law of L1/sqrt(n) approaches
/// Gamma(shape 2, rate 1) in sup distance, decreasing along
/// {1e3, 5e3, 2e4} and <= 0.05 at n = 2e4.
#[test]
fn c04_gamma_limit_of_l1() {
    let norms = algebraic_norms();
    let cdf = |s: f64| reg_lower_gamma(2.0, s);
    let mut dists = Vec::new();
    for &n in &[1_000usize, 5_000, 20_000] {
        let pmf = dist_l1(norms, n).unwrap();
        let scale = (n as f64).sqrt();
        let mut cum = 0.0;
        let mut d = 0.0_f64;
        for j in 1..=n {
            let f = cdf(j as f64 / scale);
            d = d.max((cum - f).abs());
            cum += pmf.log_prob[j - 1].exp();
            d = d.max((cum - f).abs());
        }
        dists.push(d);
    }
    let last = *dists.last().unwrap();
    check(
        "C04 Gamma limit of L1",
        strictly_decreasing(&dists) && last <= 0.05,
        format!("sup distance along n grid {}, final {last:.3e} (tol 0.05)", fmt_grid(&dists)),
    );
}

/// C5: algebraic weights gamma = 1: E_n(K) n^{-1/2} lands in [0.85, 1.15]
/// at n = 2e4 (limit constant 1) and is closer to 1 than at n = 1e3.
#[test]
fn c05_mean_cycle_count_constant() {
    let norms = algebraic_norms();
    let constant = algebraic_expected_k_constant(1.0);
    let ratio = |n: usize| expected_k(norms, n).unwrap() / (n as f64).sqrt() / constant;
    let at_1k = ratio(1_000);
    let at_20k = ratio(20_000);
    check(
        "C05 E(K) scaling constant",
        (0.85..=1.15).contains(&at_20k) && (at_20k - 1.0).abs() < (at_1k - 1.0).abs(),
        format!("E(K)/sqrt(n) = {at_20k:.4} at n=2e4 (band [0.85, 1.15]), {at_1k:.4} at n=1e3"),
    );
}

/// C6: the saddle-point approximation of ln h_n for algebraic weights
/// gamma = 1 is within 0.05 of the exact recursion at n = 1e4, with the
/// gap nonincreasing along {1e2, 1e3, 1e4}.
#[test]
fn c06_saddle_matches_exact_norms() {
    let norms = algebraic_norms();
    let spec = GenFnSpec::algebraic(1.0);
    let mut gaps = Vec::new();
    for &n in &[100usize, 1_000, 10_000] {
        let sol = solve_saddle(&spec, n).unwrap();
        let approx = asymptotic_hn(&sol).unwrap();
        gaps.push((approx - norms.log_h(n)).abs());
    }
    let last = *gaps.last().unwrap();
    check(
        "C06 saddle vs exact ln h_n",
        nonincreasing(&gaps) && last <= 0.05,
        format!("|delta ln h| along n grid {}, final {last:.3e} (tol 0.05)", fmt_grid(&gaps)),
    );
}

/// C7: the two-sided saddle ratio bounds bracket the exact
/// ln(h_{n-j}/h_n) for algebraic weights gamma = 1, n = 1e4, all
/// j <= 100, with 0.02 slack absorbing the (1 + o(1)).
#[test]
fn c07_ratio_bounds_bracket_exact() {
    let norms = algebraic_norms();
    let spec = GenFnSpec::algebraic(1.0);
    let n = 10_000usize;
    let mut worst_low = 0.0_f64;
    let mut worst_high = 0.0_f64;
    let mut ok = true;
    for j in 0..=100usize {
        let exact = norms.log_h(n - j) - norms.log_h(n);
        let (lower, upper) = ratio_bounds(&spec, n, j).unwrap();
        ok &= exact >= lower - 0.02 && exact <= upper + 0.02;
        worst_low = worst_low.max(lower - exact);
        worst_high = worst_high.max(exact - upper);
    }
    check(
        "C07 ratio bounds",
        ok,
        format!(
            "j<=100 bracketed; worst overshoot below {worst_low:.3e}, above {worst_high:.3e} (slack 0.02)"
        ),
    );
}

/// C8: super-exponential growth gamma = 3/2: the whole permutation is a
/// single cycle with probability increasing along {50, 100, 200, 400} and
/// >= 0.95 at n = 400.
#[test]
fn c08_single_giant_cycle() {
    let w = build_weights(&FamilyParams::super_exp_growth(1.5).unwrap(), 400).unwrap();
    let norms = compute_norms(&w, 400).unwrap();
    let mut ps = Vec::new();
    for &n in &[50usize, 100, 200, 400] {
        let p = (w.log_theta(n) - (n as f64).ln() - norms.log_h(n)).exp();
        ps.push(p);
    }
    let increasing = ps.windows(2).all(|w| w[1] > w[0]);
    let last = *ps.last().unwrap();
    check(
        "C08 single-cycle concentration",
        increasing && last >= 0.95,
        format!("P(L1=n) along n grid {ps:.4?}, final {last:.4} (floor 0.95)"),
    );
}

/// C9: sub-exponential growth gamma = 1/3: extracted coefficients obey
/// ln theta_n = n^(1/3) + o(1), with |ln theta_n - n^(1/3)| <= 0.1 at
/// n = 2e4 and decreasing along a geometric grid; the saddle-point
/// coefficient approximation agrees with extraction within 0.1 at n = 1e4.
#[test]
fn c09_subexp_growth_parameters() {
    let w = subexp_weights();
    let mut gaps = Vec::new();
    for &n in &[2_500usize, 5_000, 10_000, 20_000] {
        gaps.push((w.log_theta(n) - (n as f64).powf(1.0 / 3.0)).abs());
    }
    let last = *gaps.last().unwrap();
    let spec = GenFnSpec::sub_exp_growth(1.0 / 3.0);
    // ln theta_m is approximated by the saddle formula at m - 1.
    let m = 10_000usize;
    let approx = asymptotic_theta(&spec, m - 1).unwrap();
    let saddle_gap = (approx - w.log_theta(m)).abs();
    check(
        "C09 sub-exponential coefficients",
        strictly_decreasing(&gaps) && last <= 0.1 && saddle_gap <= 0.1,
        format!(
            "|ln theta_n - n^(1/3)| along grid {} (tol 0.1), saddle gap {saddle_gap:.3e} at n=1e4",
            fmt_grid(&gaps)
        ),
    );
}

/// C10: power-law decay theta_n = n^-2 at n = 2e4: the law of n - L1
/// matches h_m / sum_j h_j within 2% for m <= 10, and K - 1 is within
/// 0.02 total variation of Poisson(sum theta_j / j).
#[test]
fn c10_decay_tail_law_and_cycle_count() {
    let norms = subdecay_norms();
    let n = MAX_N;
    let l1 = dist_l1(norms, n).unwrap();
    let tail = tail_length_probs(norms, 10).unwrap();
    let mut worst_rel = 0.0_f64;
    for (m, &q) in tail.iter().enumerate() {
        let p = l1.log_prob[n - m - 1].exp();
        worst_rel = worst_rel.max((p - q).abs() / p);
    }

    let lambda: f64 = (1..=n)
        .map(|j| (norms.weights().log_theta(j) - (j as f64).ln()).exp())
        .sum();
    let k_probs = dist_k(norms, n).unwrap().probs();
    let shifted: Vec<f64> = k_probs.to_vec(); // index k = P(K = k+1) = P(K-1 = k)
    let poisson: Vec<f64> = (0..shifted.len()).map(|k| poisson_pmf(lambda, k)).collect();
    let tail_mass = 1.0 - poisson_cdf(lambda, shifted.len() - 1);
    let tv = total_variation_truncated(&shifted, &poisson, tail_mass);

    check(
        "C10 decay regime laws",
        worst_rel <= 0.02 && tv <= 0.02,
        format!("tail-law rel err {worst_rel:.3e} (tol 0.02), TV(K-1, Poisson) {tv:.3e} (tol 0.02)"),
    );
}

/// C11: sampler fidelity. Constant weights theta = 2 at n = 1000, 1e5
/// samples, fixed seed: empirical L1 within 0.02 TV of the exact law, and
/// the mean cycle count within 3 standard errors of E(K).
///
/// KNOWN RED (tolerance below the estimator floor): the plug-in TV of an
/// empirical pmf over ~1000 support points at 1e5 samples concentrates at
/// 0.5 sqrt(2/(pi m)) sum_j sqrt(p_j) ~ 0.038 even when the samples are
/// drawn from the exact law itself (multinomial control: 0.036-0.039
/// across seeds), so 0.02 is unreachable by any exact sampler at this
/// budget. Sampler exactness is established by
/// `c11_supplement_type_distribution_exactness`, C12, and the mean-K
/// clause here.
#[test]
fn c11_sampler_fidelity() {
    let norms = ewens_norms();
    let n = 1_000usize;
    let stats = run_batch(norms, n, 100_000, 20_260_810, 1).unwrap();
    let exact = dist_l1(norms, n).unwrap().probs();
    let mut empirical = vec![0.0; n + 1];
    for bin in &stats.l1.bins {
        empirical[bin.value] = bin.frequency;
    }
    let tv = cycleweights::gof::total_variation(&empirical[1..], &exact);
    let ek = expected_k(norms, n).unwrap();
    let z = (stats.k_moments.mean - ek).abs() / stats.k_moments.std_error;
    check(
        "C11 sampler fidelity",
        tv <= 0.02 && z <= 3.0,
        format!(
            "TV(L1) {tv:.3e} (tol 0.02; plug-in floor at this budget is ~3.8e-2), \
             mean K off by {z:.2} SE (cap 3)"
        ),
    );
}

/// C11 supplement: exactness of the sampler where the total-variation
/// budget is attainable. At n = 6 the cycle-type distribution has 11
/// atoms; 1e6 draws give an estimator floor near 1e-3, and the empirical
/// distribution must be within 0.01 of exhaustive enumeration.
#[test]
fn c11_supplement_type_distribution_exactness() {
    let n = 6usize;
    let params = FamilyParams::ewens(2.0).unwrap();
    let weights = build_weights(&params, n).unwrap();
    let thetas: Vec<f64> = weights.log_thetas().iter().map(|lt| lt.exp()).collect();
    let norms = compute_norms(&weights, n).unwrap();
    let reference = common::oracle_type_distribution(n, &thetas);
    let samples = draw_batch(&norms, n, 1_000_000, 77_007).unwrap();
    let mut counts = vec![0u64; reference.len()];
    for rec in &samples {
        let idx = reference
            .iter()
            .position(|(ct, _)| ct == rec.cycle_type.counts())
            .expect("sampled type enumerated");
        counts[idx] += 1;
    }
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / samples.len() as f64)
        .collect();
    let exact: Vec<f64> = reference.iter().map(|(_, p)| *p).collect();
    let tv = cycleweights::gof::total_variation(&empirical, &exact);
    check(
        "C11s cycle-type exactness",
        tv <= 0.01,
        format!("TV(empirical types, enumeration) {tv:.3e} over 1e6 draws (tol 0.01)"),
    );
}

/// C12: stick-breaking limit. Constant weights theta = 2 at n = 1e4, 1e4
/// samples: the first discovered cycle fraction is Beta(1, 2) to KS 0.03,
/// and so is the second fraction of the remainder.
#[test]
fn c12_gem_limit_of_cycle_fractions() {
    let norms = ewens_norms();
    let n = 10_000usize;
    let samples = draw_batch(norms, n, 10_000, 4_242).unwrap();
    let beta_cdf = |s: f64| 1.0 - (1.0 - s.clamp(0.0, 1.0)).powi(2);
    let first: Vec<f64> = samples
        .iter()
        .map(|r| r.ordered_lengths[0] as f64 / n as f64)
        .collect();
    let ks1 = ks_samples_vs_cdf(&first, beta_cdf);
    let second: Vec<f64> = samples
        .iter()
        .filter(|r| r.k >= 2)
        .map(|r| r.ordered_lengths[1] as f64 / (n - r.ordered_lengths[0]) as f64)
        .collect();
    let ks2 = ks_samples_vs_cdf(&second, beta_cdf);
    check(
        "C12 GEM stick fractions",
        ks1 <= 0.03 && ks2 <= 0.03,
        format!("KS first {ks1:.3e}, KS second {ks2:.3e} (tol 0.03, {} second-stick samples)",
            second.len()),
    );
}

/// C13: super-exponential decay gamma = 2: ln E_n(R_1) is within a factor
/// of 2 of 2 sqrt(log n) at n = 2e4, and the ratio trends toward 1 along a
/// geometric grid.
#[test]
fn c13_superexp_decay_expected_fixed_points() {
    let norms = superdecay_norms();
    let mut ratios = Vec::new();
    for &n in &[1_250usize, 2_500, 5_000, 10_000, 20_000] {
        let actual = norms.weights().log_theta(1) + norms.log_h(n - 1) - norms.log_h(n);
        let predicted = superexp_decay_expected_rj_log(2.0, n, 1);
        ratios.push(actual / predicted);
    }
    let first_gap = (ratios[0] - 1.0).abs();
    let last = *ratios.last().unwrap();
    let last_gap = (last - 1.0).abs();
    check(
        "C13 decay-regime E(R_1) growth",
        (0.5..=2.0).contains(&last) && last_gap < first_gap,
        format!("ln E(R_1)/prediction along grid {ratios:.3?} (band [0.5, 2], trending to 1)"),
    );
}

/// C14: sub-exponential growth gamma = 1/3: the mode of the exact L1 law
/// at n = 2e4 lies within a factor of 2 of B (log n)^3 with B = 27/8.
/// Desk-scale trend check only; the full (log n)^(1/gamma) concentration
/// is far beyond reachable sizes.
///
/// KNOWN RED (asymptopia out of reach): the saddle radius satisfies
/// 1 - r_n = [a^-1 ln(n (1-r_n)^c / (A r_n))]^(-1/b), and at n = 2e4 the
/// (1-r)^c factor still eats most of ln n (effective log 3.85 vs 9.90),
/// putting the exact mode near 0.06 of the limit target; the factor-2
/// band needs n beyond ~1e7, far over the size cap. The mode itself is
/// validated against the finite-size saddle prediction by
/// `c14_supplement_mode_tracks_saddle`, and the ratio to the limit target
/// trends upward as required.
#[test]
fn c14_subexp_growth_concentration() {
    let norms = subexp_norms();
    let n = MAX_N;
    let pmf = dist_l1(norms, n).unwrap();
    let mode = pmf.mode() as f64;
    let b = subexp_growth_concentration_point(1.0 / 3.0);
    let target = b * (n as f64).ln().powi(3);
    let ratio = mode / target;
    check(
        "C14 concentration of L1",
        (0.5..=2.0).contains(&ratio),
        format!(
            "mode {mode} vs B(log n)^3 = {target:.0}, ratio {ratio:.3} (band [0.5, 2]; \
             the finite-size saddle prediction matches the mode, see C14s)"
        ),
    );
}

/// C14 supplement: the exact L1 mode agrees with the finite-size saddle
/// prediction argmax_j (j^gamma - j |ln r_n|) within 5% along the grid,
/// and the ratio of the mode to the limiting B (log n)^(1/gamma) target
/// increases toward 1.
#[test]
fn c14_supplement_mode_tracks_saddle() {
    let norms = subexp_norms();
    let spec = GenFnSpec::series(subexp_weights().clone()).unwrap();
    let b = subexp_growth_concentration_point(1.0 / 3.0);
    let mut ratios = Vec::new();
    let mut ok = true;
    let mut detail = Vec::new();
    for &n in &[2_500usize, 5_000, 10_000, 20_000] {
        let mode = dist_l1(norms, n).unwrap().mode() as f64;
        let s = -solve_saddle(&spec, n).unwrap().r.ln();
        // argmax of j^(1/3) - s j
        let predicted = (1.0 / (3.0 * s)).powf(1.5);
        ok &= (mode / predicted - 1.0).abs() <= 0.05;
        ratios.push(mode / (b * (n as f64).ln().powi(3)));
        detail.push(format!("n={n}: mode {mode:.0} vs saddle {predicted:.1}"));
    }
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    check(
        "C14s mode vs finite-size saddle",
        ok && increasing,
        format!(
            "{}; ratio to limit target rising {}",
            detail.join("; "),
            fmt_grid(&ratios)
        ),
    );
}
