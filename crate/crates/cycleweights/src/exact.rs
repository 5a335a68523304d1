//! Exact finite-n computations: normalization constants, distributions of
//! the typical cycle length `L1`, the cycle counts `R_j`, the total number
//! of cycles `K`, and factorial moments.
//!
//! Everything rests on the convolution recursion
//!
//! ```text
//! n h_n = sum_{j=1..n} theta_j h_{n-j},    h_0 = 1,
//! ```
//!
//! run on logarithms with streaming log-sum-exp. The distribution of the
//! cycle containing a fixed index is `P_n(L1 = j) = theta_j h_{n-j} / (n h_n)`,
//! and factorial moments of the cycle counts are
//! `E prod_j (R_j)_[k_j] = (h_{n - sum j k_j} / h_n) prod_j (theta_j / j)^{k_j}`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::logsum::{CompensatedSum, LogSumAcc};
use crate::special::ln_gamma;
use crate::weights::{FamilyKind, WeightTable};

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("n = {n} out of range (table holds up to {max})")]
    OutOfRange { n: usize, max: usize },
    #[error("normalization h_{0} vanished for a built-in family")]
    ZeroNorm(usize),
    #[error("log accumulator overflowed at n = {0}; table too large for this family")]
    Overflow(usize),
    #[error("constraint sum j*k_j = {got} exceeds n = {n}")]
    MomentOrderTooLarge { got: usize, n: usize },
    #[error("marker degree {needed} exceeds budget {budget} with non-negligible mass")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("cycle type sums to {got}, expected {expect}")]
    BadCycleType { got: usize, expect: usize },
}

/// A cycle type: the multiplicities `r_j` of cycle lengths summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Validates `sum_j j r_j = n` and drops zero entries.
    pub fn new(n: usize, counts: BTreeMap<usize, usize>) -> Result<Self, ExactError> {
        let counts: BTreeMap<usize, usize> =
            counts.into_iter().filter(|&(_, r)| r > 0).collect();
        let got: usize = counts.iter().map(|(&j, &r)| j * r).sum();
        if got != n {
            return Err(ExactError::BadCycleType { got, expect: n });
        }
        Ok(CycleType { n, counts })
    }

    pub fn from_lengths(lengths: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        for &l in lengths {
            *counts.entry(l).or_insert(0) += 1;
        }
        let n = lengths.iter().sum();
        CycleType { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// Total number of cycles `K = sum_j r_j`.
    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }
}

/// `ln h_0 .. ln h_N` together with the weight table that produced it.
///
/// Immutable after construction; queries are pure and thread-safe.
#[derive(Debug, Clone)]
pub struct NormTable {
    log_h: Vec<f64>,
    weights: WeightTable,
}

/// Runs the recursion up to `n_max`. O(N^2) log-sum-exp steps.
///
/// For built-in families every `h_n` is strictly positive; a `-inf` entry
/// can only arise from custom zero weights (e.g. no admissible cycle
/// decomposition of `n`), and is an error for any other family.
pub fn compute_norms(weights: &WeightTable, n_max: usize) -> Result<NormTable, ExactError> {
    if n_max > weights.n_max() {
        return Err(ExactError::OutOfRange {
            n: n_max,
            max: weights.n_max(),
        });
    }
    let lt = weights.log_thetas();
    let mut log_h = Vec::with_capacity(n_max + 1);
    log_h.push(0.0);
    for n in 1..=n_max {
        let mut acc = LogSumAcc::new();
        for j in 1..=n {
            acc.add(lt[j - 1] + log_h[n - j]);
        }
        let v = acc.value() - (n as f64).ln();
        if v == f64::INFINITY {
            return Err(ExactError::Overflow(n));
        }
        if v == f64::NEG_INFINITY && weights.kind() != FamilyKind::Custom {
            return Err(ExactError::ZeroNorm(n));
        }
        log_h.push(v);
    }
    Ok(NormTable {
        log_h,
        weights: weights.clone(),
    })
}

impl NormTable {
    pub fn n_max(&self) -> usize {
        self.log_h.len() - 1
    }

    /// `ln h_n`, valid for `0 <= n <= n_max`.
    #[inline]
    pub fn log_h(&self, n: usize) -> f64 {
        self.log_h[n]
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    /// Relative residual of the recursion at `n`, re-evaluated from the
    /// stored entries: `|h_n - (1/n) sum theta_j h_{n-j}| / h_n`.
    pub fn recursion_residual(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max());
        let lt = self.weights.log_thetas();
        let mut acc = LogSumAcc::new();
        for j in 1..=n {
            acc.add(lt[j - 1] + self.log_h[n - j]);
        }
        let rhs = acc.value() - (n as f64).ln();
        ((rhs - self.log_h[n]).exp() - 1.0).abs()
    }

    fn check_n(&self, n: usize) -> Result<(), ExactError> {
        if n == 0 || n > self.n_max() {
            return Err(ExactError::OutOfRange {
                n,
                max: self.n_max(),
            });
        }
        Ok(())
    }
}

/// A probability mass function stored as log-probabilities over an integer
/// support, ordered by support value. `-inf` marks exact (or underflowed)
/// zeros.
#[derive(Debug, Clone, Serialize)]
pub struct Pmf {
    pub support: Vec<usize>,
    pub log_prob: Vec<f64>,
    pub label: String,
}

impl Pmf {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Linear probabilities, materialized at the output boundary.
    pub fn probs(&self) -> Vec<f64> {
        self.log_prob.iter().map(|lp| lp.exp()).collect()
    }

    pub fn prob_of(&self, value: usize) -> f64 {
        match self.support.binary_search(&value) {
            Ok(i) => self.log_prob[i].exp(),
            Err(_) => 0.0,
        }
    }

    /// `ln(sum of probabilities)`; 0 for a normalized pmf.
    pub fn log_total(&self) -> f64 {
        let mut acc = LogSumAcc::new();
        for &lp in &self.log_prob {
            acc.add(lp);
        }
        acc.value()
    }

    pub fn mean(&self) -> f64 {
        let mut s = CompensatedSum::new();
        for (&k, &lp) in self.support.iter().zip(&self.log_prob) {
            s.add(k as f64 * lp.exp());
        }
        s.value()
    }

    /// Support value with the largest probability (smallest on ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for i in 1..self.log_prob.len() {
            if self.log_prob[i] > self.log_prob[best] {
                best = i;
            }
        }
        self.support[best]
    }

    /// Cumulative probability `P(X <= value)`.
    pub fn cdf(&self, value: f64) -> f64 {
        let mut s = CompensatedSum::new();
        for (&k, &lp) in self.support.iter().zip(&self.log_prob) {
            if (k as f64) <= value {
                s.add(lp.exp());
            }
        }
        s.value()
    }
}

/// Distribution of the length of the cycle containing index 1:
/// `P_n(L1 = j) = theta_j h_{n-j} / (n h_n)` over `j = 1..=n`.
pub fn dist_l1(norms: &NormTable, n: usize) -> Result<Pmf, ExactError> {
    norms.check_n(n)?;
    let lt = norms.weights.log_thetas();
    let base = -(n as f64).ln() - norms.log_h(n);
    let log_prob: Vec<f64> = (1..=n)
        .map(|j| lt[j - 1] + norms.log_h(n - j) + base)
        .collect();
    Ok(Pmf {
        support: (1..=n).collect(),
        log_prob,
        label: format!("L1(n={n})"),
    })
}

/// Expected total number of cycles `E_n(K) = sum_j theta_j h_{n-j} / (j h_n)`.
pub fn expected_k(norms: &NormTable, n: usize) -> Result<f64, ExactError> {
    norms.check_n(n)?;
    let lt = norms.weights.log_thetas();
    let mut acc = LogSumAcc::new();
    for j in 1..=n {
        acc.add(lt[j - 1] - (j as f64).ln() + norms.log_h(n - j));
    }
    Ok((acc.value() - norms.log_h(n)).exp())
}

/// Joint factorial moment `E_n( prod_j (R_j)_[k_j] )` for the exponent map
/// given as `(j, k_j)` pairs with `sum j k_j <= n`:
///
/// ```text
/// (h_{n - sum j k_j} / h_n) prod_j (theta_j / j)^{k_j}
/// ```
pub fn factorial_moment(
    norms: &NormTable,
    n: usize,
    orders: &[(usize, u32)],
) -> Result<f64, ExactError> {
    norms.check_n(n)?;
    let mut total = 0usize;
    for &(j, k) in orders {
        assert!(j >= 1, "cycle length index must be >= 1");
        total += j * k as usize;
    }
    if total > n {
        return Err(ExactError::MomentOrderTooLarge { got: total, n });
    }
    let lt = norms.weights.log_thetas();
    let mut log_val = norms.log_h(n - total) - norms.log_h(n);
    for &(j, k) in orders {
        if k > 0 {
            log_val += k as f64 * (lt[j - 1] - (j as f64).ln());
        }
    }
    Ok(log_val.exp())
}

/// Which weights carry the counting marker `u` in the marked recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Marking {
    /// Every `theta_j` is marked: the marker exponent counts all cycles (K).
    AllLengths,
    /// Only `theta_j` is marked: the exponent counts cycles of length j (R_j).
    Single(usize),
}

/// Default cap on the tracked marker degree.
pub const DEFAULT_MARKER_BUDGET: usize = 4096;

/// Mass unaccounted for by a budget-capped marked recursion must stay
/// below this before we call the pmf exact.
const TRUNCATION_TOL: f64 = 1e-9;

/// Marked recursion, normalized level by level.
///
/// Running the `h` recursion with marked weights `u theta_j` yields
/// polynomials `h_n(u)` with positive coefficients and
/// `P(marker = k) = [u^k] h_n(u) / h_n(1)`. Dividing each level by
/// `n h_n` turns the update into a convex combination
///
/// ```text
/// c_n[k] = sum_m P_n(L1 = m) c_{n-m}[k - marked(m)]
/// ```
///
/// whose entries are probabilities in [0, 1], so this recursion runs in
/// linear space; the full dynamic range stays inside the log-space `h`
/// table that feeds the `P_n(L1 = m)` factors. Coefficients are exact
/// under degree truncation because marking only ever shifts powers up.
fn marked_distribution(
    norms: &NormTable,
    n: usize,
    marking: Marking,
    budget: usize,
) -> Result<Vec<f64>, ExactError> {
    norms.check_n(n)?;
    let lt = norms.weights.log_thetas();
    let max_degree = match marking {
        Marking::AllLengths => n,
        Marking::Single(j) => n / j,
    };
    let cap = budget.min(max_degree);
    // With the full degree available no source row is ever cropped, so a
    // row-sum deviation from 1 is pure float drift and safe to rescale.
    // Under a cap, real mass may be cropped away and must stay visible to
    // the final shortfall check below.
    let renormalize = cap == max_degree;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    for m in 1..=n {
        let base = -(m as f64).ln() - norms.log_h(m);
        let mut row = vec![0.0_f64; 1];
        for l in 1..=m {
            let w = (lt[l - 1] + norms.log_h(m - l) + base).exp();
            if w == 0.0 {
                continue;
            }
            let shift = match marking {
                Marking::AllLengths => 1,
                Marking::Single(j) => usize::from(l == j),
            };
            let src = &rows[m - l];
            let take = src.len().min(cap + 1 - shift);
            if take + shift > row.len() {
                row.resize(take + shift, 0.0);
            }
            let dst = &mut row[shift..shift + take];
            for (d, &s) in dst.iter_mut().zip(src[..take].iter()) {
                *d += w * s;
            }
        }
        while row.len() > 1 && *row.last().unwrap() == 0.0 {
            row.pop();
        }
        if renormalize {
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() < 1e-6 {
                let inv = 1.0 / total;
                for v in row.iter_mut() {
                    *v *= inv;
                }
            }
        }
        rows.push(row);
    }

    let mut dist = rows.pop().unwrap();
    let mass: f64 = dist.iter().sum();
    if cap < max_degree && (1.0 - mass).abs() > TRUNCATION_TOL {
        return Err(ExactError::BudgetExceeded {
            needed: max_degree,
            budget,
        });
    }
    dist.resize(max_degree + 1, 0.0);
    Ok(dist)
}

/// Exact pmf of `R_j` (number of cycles of length `j`) over `0..=n/j`,
/// by the marked recursion.
pub fn dist_rj(norms: &NormTable, n: usize, j: usize) -> Result<Pmf, ExactError> {
    dist_rj_budgeted(norms, n, j, DEFAULT_MARKER_BUDGET)
}

pub fn dist_rj_budgeted(
    norms: &NormTable,
    n: usize,
    j: usize,
    budget: usize,
) -> Result<Pmf, ExactError> {
    assert!(j >= 1, "cycle length must be >= 1");
    if j > n {
        return Err(ExactError::OutOfRange { n: j, max: n });
    }
    let dist = marked_distribution(norms, n, Marking::Single(j), budget)?;
    Ok(Pmf {
        support: (0..dist.len()).collect(),
        log_prob: dist.iter().map(|p| p.ln()).collect(),
        label: format!("R_{j}(n={n})"),
    })
}

/// Exact pmf of the total number of cycles `K` over `1..=n`.
pub fn dist_k(norms: &NormTable, n: usize) -> Result<Pmf, ExactError> {
    dist_k_budgeted(norms, n, DEFAULT_MARKER_BUDGET)
}

pub fn dist_k_budgeted(norms: &NormTable, n: usize, budget: usize) -> Result<Pmf, ExactError> {
    let dist = marked_distribution(norms, n, Marking::AllLengths, budget)?;
    Ok(Pmf {
        support: (1..dist.len()).collect(),
        log_prob: dist[1..].iter().map(|p| p.ln()).collect(),
        label: format!("K(n={n})"),
    })
}

/// Ratio beyond which the alternating series is flagged unreliable.
const SERIES_CANCELLATION_LIMIT: f64 = 1e12;

/// Cross-check path for `dist_rj`: the inclusion-exclusion series
///
/// ```text
/// P(R_j = k) = sum_{i>=0} (-1)^i / (k! i!) (theta_j/j)^{k+i} h_{n-j(k+i)} / h_n
/// ```
///
/// evaluated in linear space with max-term scaling and compensated
/// summation. Returns the pmf and a reliability flag: `false` when the
/// largest term exceeds the result by more than a factor of 1e12 for some
/// `k` (cancellation has eaten the significand), in which case the marked
/// path should be used alone.
pub fn dist_rj_series(norms: &NormTable, n: usize, j: usize) -> Result<(Pmf, bool), ExactError> {
    assert!(j >= 1, "cycle length must be >= 1");
    norms.check_n(n)?;
    if j > n {
        return Err(ExactError::OutOfRange { n: j, max: n });
    }
    let log_ratio = norms.weights.log_theta(j) - (j as f64).ln();
    let kmax = n / j;
    let mut probs = Vec::with_capacity(kmax + 1);
    let mut reliable = true;
    for k in 0..=kmax {
        // log magnitudes of the alternating terms, i = 0..=kmax-k
        let mut log_terms = Vec::with_capacity(kmax - k + 1);
        let mut max_log = f64::NEG_INFINITY;
        for i in 0..=(kmax - k) {
            let m = k + i;
            let lt = m as f64 * log_ratio + norms.log_h(n - j * m) - norms.log_h(n)
                - ln_gamma(k as f64 + 1.0)
                - ln_gamma(i as f64 + 1.0);
            max_log = max_log.max(lt);
            log_terms.push(lt);
        }
        let mut sum = CompensatedSum::new();
        for (i, &lt) in log_terms.iter().enumerate() {
            let scaled = (lt - max_log).exp();
            sum.add(if i % 2 == 0 { scaled } else { -scaled });
        }
        let value = sum.value() * max_log.exp();
        // Cancellation check: the rounding floor of the largest term must
        // not swamp the result. Entries whose largest term is already
        // negligible on the probability scale are harmless zeros.
        let scaled_sum = sum.value().abs();
        let cancelled = scaled_sum.is_nan() || scaled_sum * SERIES_CANCELLATION_LIMIT < 1.0;
        if cancelled && max_log > 1e-18_f64.ln() {
            reliable = false;
        }
        probs.push(if value.is_finite() { value.max(0.0) } else { 0.0 });
    }
    let pmf = Pmf {
        support: (0..=kmax).collect(),
        log_prob: probs.iter().map(|p| p.ln()).collect(),
        label: format!("R_{j}(n={n}) series"),
    };
    Ok((pmf, reliable))
}
