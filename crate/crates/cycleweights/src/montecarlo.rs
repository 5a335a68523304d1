//! Exact sampling of cycle types and reproducible batch statistics.
//!
//! Sampling exploits the self-similarity of the measure: conditioned on
//! the first cycles, the remaining indices form the same model at the
//! reduced size. Drawing cycle lengths one at a time from
//! `P_m(L = l) = theta_l h_{m-l} / (m h_m)` on the remaining size `m`
//! therefore produces the cycle lengths in discovery order with exactly
//! the right joint law. The `h` table makes each draw an O(drawn length)
//! scan, so a full sample costs O(n) expected work; no Markov chain or
//! mixing-time argument is involved.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{CycleType, NormTable, Pmf};
use crate::rng::CounterRng;

#[derive(Debug, Error, PartialEq)]
pub enum McError {
    #[error("batch needs at least one sample")]
    EmptyBatch,
    #[error("n = {n} exceeds the norm table (max {max})")]
    OutOfRange { n: usize, max: usize },
    #[error("pmf `{label}` is not normalized (log total = {log_total})")]
    Unnormalized { label: String, log_total: f64 },
}

/// One sampled permutation, reduced to its cycle lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub cycle_type: CycleType,
    /// Lengths in discovery order (the cycle containing the smallest
    /// remaining index comes first).
    pub ordered_lengths: Vec<usize>,
    /// The same lengths sorted nonincreasing.
    pub sorted_lengths: Vec<usize>,
    /// Number of cycles.
    pub k: usize,
}

/// Draws one cycle type of size `n`.
pub fn sample_cycle_type(
    norms: &NormTable,
    n: usize,
    rng: &mut CounterRng,
) -> Result<SampleRecord, McError> {
    if n == 0 || n > norms.n_max() {
        return Err(McError::OutOfRange {
            n,
            max: norms.n_max(),
        });
    }
    let lt = norms.weights().log_thetas();
    let mut ordered_lengths = Vec::new();
    let mut m = n;
    while m > 0 {
        let u = rng.next_f64();
        let base = -(m as f64).ln() - norms.log_h(m);
        let mut acc = 0.0;
        let mut drawn = 0;
        let mut last_positive = m;
        for l in 1..=m {
            let p = (lt[l - 1] + norms.log_h(m - l) + base).exp();
            if p > 0.0 {
                last_positive = l;
                acc += p;
                if acc >= u {
                    drawn = l;
                    break;
                }
            }
        }
        // Rounding can leave acc slightly below 1; the remainder goes to
        // the largest admissible length (forbidden lengths of custom
        // tables have p = 0 and are never drawn).
        if drawn == 0 {
            drawn = last_positive;
        }
        ordered_lengths.push(drawn);
        m -= drawn;
    }
    let k = ordered_lengths.len();
    let mut sorted_lengths = ordered_lengths.clone();
    sorted_lengths.sort_unstable_by(|a, b| b.cmp(a));
    let cycle_type = CycleType::from_lengths(&ordered_lengths);
    debug_assert_eq!(cycle_type.n(), n);
    Ok(SampleRecord {
        cycle_type,
        ordered_lengths,
        sorted_lengths,
        k,
    })
}

/// Inverse-CDF draw from a pmf: linear scan over the support in order,
/// converting log-probabilities on the fly. Exactly reproducible given the
/// stream state.
pub fn inverse_cdf_draw(pmf: &Pmf, rng: &mut CounterRng) -> Result<usize, McError> {
    let log_total = pmf.log_total();
    if log_total.abs() > 1e-6 {
        return Err(McError::Unnormalized {
            label: pmf.label.clone(),
            log_total,
        });
    }
    let u = rng.next_f64();
    let mut acc = 0.0;
    let mut last_positive = None;
    for (&k, &lp) in pmf.support.iter().zip(&pmf.log_prob) {
        let p = lp.exp();
        if p > 0.0 {
            last_positive = Some(k);
            acc += p;
            if acc >= u {
                return Ok(k);
            }
        }
    }
    Ok(last_positive.expect("normalized pmf has a positive entry"))
}

/// Value/count histogram over a usize-valued statistic.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Histogram {
    pub bins: Vec<HistBin>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistBin {
    pub value: usize,
    pub count: u64,
    pub frequency: f64,
}

impl Histogram {
    fn from_counts(counts: BTreeMap<usize, u64>, total: u64) -> Self {
        let bins = counts
            .into_iter()
            .map(|(value, count)| HistBin {
                value,
                count,
                frequency: count as f64 / total as f64,
            })
            .collect();
        Histogram { bins, total }
    }

    /// Empirical pmf over `0..=max_value`.
    pub fn frequencies(&self, max_value: usize) -> Vec<f64> {
        let mut out = vec![0.0; max_value + 1];
        for bin in &self.bins {
            if bin.value <= max_value {
                out[bin.value] = bin.frequency;
            }
        }
        out
    }

    pub fn frequency_of(&self, value: usize) -> f64 {
        self.bins
            .iter()
            .find(|b| b.value == value)
            .map_or(0.0, |b| b.frequency)
    }
}

/// Sample mean with its standard error (sample sd / sqrt(count)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentStats {
    pub mean: f64,
    pub std_error: f64,
}

fn moments(values: impl Iterator<Item = f64> + Clone, count: usize) -> MomentStats {
    let n = count as f64;
    let mean = values.clone().sum::<f64>() / n;
    if count < 2 {
        return MomentStats {
            mean,
            std_error: 0.0,
        };
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    MomentStats {
        mean,
        std_error: sd / n.sqrt(),
    }
}

/// Per-j histogram and moments of `R_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RjStats {
    pub j: usize,
    pub histogram: Histogram,
    pub moments: MomentStats,
}

/// Aggregated statistics of a sampling batch.
///
/// Deterministic for fixed `(seed, n, num_samples, family)`: each sample
/// uses the substream keyed by its index, and aggregation runs in index
/// order, so the result is bit-identical regardless of worker count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchStats {
    pub n: usize,
    pub num_samples: usize,
    pub seed: u64,
    pub j_max: usize,
    pub l1: Histogram,
    pub k: Histogram,
    pub l1_moments: MomentStats,
    pub k_moments: MomentStats,
    pub r_j: Vec<RjStats>,
}

/// Draws `num_samples` cycle types in parallel and aggregates them.
pub fn run_batch(
    norms: &NormTable,
    n: usize,
    num_samples: usize,
    seed: u64,
    j_max: usize,
) -> Result<BatchStats, McError> {
    if num_samples == 0 {
        return Err(McError::EmptyBatch);
    }
    let samples = draw_batch(norms, n, num_samples, seed)?;

    let mut l1_counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut k_counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut rj_counts: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); j_max];
    for rec in &samples {
        *l1_counts.entry(rec.ordered_lengths[0]).or_insert(0) += 1;
        *k_counts.entry(rec.k).or_insert(0) += 1;
        for j in 1..=j_max {
            let r = rec.cycle_type.counts().get(&j).copied().unwrap_or(0);
            *rj_counts[j - 1].entry(r).or_insert(0) += 1;
        }
    }

    let total = num_samples as u64;
    let l1_values: Vec<f64> = samples
        .iter()
        .map(|r| r.ordered_lengths[0] as f64)
        .collect();
    let k_values: Vec<f64> = samples.iter().map(|r| r.k as f64).collect();
    let r_j = (1..=j_max)
        .map(|j| {
            let values: Vec<f64> = samples
                .iter()
                .map(|r| r.cycle_type.counts().get(&j).copied().unwrap_or(0) as f64)
                .collect();
            RjStats {
                j,
                histogram: Histogram::from_counts(rj_counts[j - 1].clone(), total),
                moments: moments(values.iter().copied(), num_samples),
            }
        })
        .collect();

    Ok(BatchStats {
        n,
        num_samples,
        seed,
        j_max,
        l1: Histogram::from_counts(l1_counts, total),
        k: Histogram::from_counts(k_counts, total),
        l1_moments: moments(l1_values.iter().copied(), num_samples),
        k_moments: moments(k_values.iter().copied(), num_samples),
        r_j,
    })
}

/// The raw samples of a batch, in sample-index order.
pub fn draw_batch(
    norms: &NormTable,
    n: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<SampleRecord>, McError> {
    (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::substream(seed, i as u64);
            sample_cycle_type(norms, n, &mut rng)
        })
        .collect()
}
