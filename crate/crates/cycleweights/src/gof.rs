//! Distances for comparing exact, sampled, and limiting distributions.

/// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
///
/// `xs` need not be sorted. The statistic is the usual
/// `max_i max(|F(x_(i)) - i/n|, |F(x_(i)) - (i+1)/n|)`.
pub fn ks_samples_vs_cdf(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// Sup-distance between a discrete distribution and a continuous CDF.
///
/// `points` are `(x, p)` atoms sorted by `x`. At every atom both the
/// left and right limits of the empirical step function are compared.
pub fn ks_discrete_vs_cdf(points: &[(f64, f64)], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut cum = 0.0;
    let mut d: f64 = 0.0;
    for &(x, p) in points {
        let f = cdf(x);
        d = d.max((cum - f).abs());
        cum += p;
        d = d.max((cum - f).abs());
    }
    d
}

/// Total variation distance `1/2 sum_k |p_k - q_k|` between pmfs on a
/// shared integer support (shorter slice padded with zeros).
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let mut s = 0.0;
    for k in 0..len {
        let pk = p.get(k).copied().unwrap_or(0.0);
        let qk = q.get(k).copied().unwrap_or(0.0);
        s += (pk - qk).abs();
    }
    0.5 * s
}

/// Total variation against a truncated reference pmf whose mass beyond the
/// truncation is `q_tail` (counts fully toward the distance).
pub fn total_variation_truncated(p: &[f64], q: &[f64], q_tail: f64) -> f64 {
    total_variation(p, q) + 0.5 * q_tail
}

/// Pearson chi-square statistic of observed counts against expected counts.
pub fn chi_square_stat(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}
