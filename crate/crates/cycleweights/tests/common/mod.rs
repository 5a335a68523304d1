//! Brute-force oracle: exhaustive enumeration of cycle types.
//!
//! A cycle type `(r_1, ..., r_n)` with `sum j r_j = n` is realized by
//! `n! / prod_j (j^{r_j} r_j!)` permutations, each carrying weight
//! `prod_j theta_j^{r_j}`, so its contribution to `h_n` is
//! `prod_j (theta_j / j)^{r_j} / r_j!`. Everything here works in plain
//! linear f64 arithmetic on small n, fully independent of the log-space
//! recursions under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// All cycle types of `n`, as maps `j -> r_j` (integer partitions of n).
pub fn enumerate_cycle_types(n: usize) -> Vec<BTreeMap<usize, usize>> {
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    recurse(n, n, &mut current, &mut out);
    out
}

fn recurse(
    remaining: usize,
    max_part: usize,
    current: &mut BTreeMap<usize, usize>,
    out: &mut Vec<BTreeMap<usize, usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        *current.entry(part).or_insert(0) += 1;
        recurse(remaining - part, part, current, out);
        let c = current.get_mut(&part).unwrap();
        *c -= 1;
        if *c == 0 {
            current.remove(&part);
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `prod_j (theta_j / j)^{r_j} / r_j!`, the probability weight of a cycle
/// type before normalization. `thetas[j-1] = theta_j`.
pub fn type_weight(counts: &BTreeMap<usize, usize>, thetas: &[f64]) -> f64 {
    counts
        .iter()
        .map(|(&j, &r)| (thetas[j - 1] / j as f64).powi(r as i32) / factorial(r))
        .product()
}

pub fn oracle_h(n: usize, thetas: &[f64]) -> f64 {
    enumerate_cycle_types(n)
        .iter()
        .map(|ct| type_weight(ct, thetas))
        .sum()
}

/// `P(L1 = l)` for `l = 1..=n`. Conditional on a cycle type, the cycle
/// containing a fixed index has length `l` with probability `l r_l / n`.
pub fn oracle_l1(n: usize, thetas: &[f64]) -> Vec<f64> {
    let h = oracle_h(n, thetas);
    let mut pmf = vec![0.0; n];
    for ct in enumerate_cycle_types(n) {
        let w = type_weight(&ct, thetas);
        for (&l, &r) in &ct {
            pmf[l - 1] += w * (l * r) as f64 / n as f64;
        }
    }
    for p in &mut pmf {
        *p /= h;
    }
    pmf
}

/// `P(R_j = k)` for `k = 0..=n/j`.
pub fn oracle_rj(n: usize, j: usize, thetas: &[f64]) -> Vec<f64> {
    let h = oracle_h(n, thetas);
    let mut pmf = vec![0.0; n / j + 1];
    for ct in enumerate_cycle_types(n) {
        let w = type_weight(&ct, thetas);
        let r = ct.get(&j).copied().unwrap_or(0);
        pmf[r] += w;
    }
    for p in &mut pmf {
        *p /= h;
    }
    pmf
}

/// `P(K = k)` for `k = 1..=n`.
pub fn oracle_k(n: usize, thetas: &[f64]) -> Vec<f64> {
    let h = oracle_h(n, thetas);
    let mut pmf = vec![0.0; n];
    for ct in enumerate_cycle_types(n) {
        let w = type_weight(&ct, thetas);
        let k: usize = ct.values().sum();
        pmf[k - 1] += w;
    }
    for p in &mut pmf {
        *p /= h;
    }
    pmf
}

pub fn oracle_expected_k(n: usize, thetas: &[f64]) -> f64 {
    let h = oracle_h(n, thetas);
    enumerate_cycle_types(n)
        .iter()
        .map(|ct| type_weight(ct, thetas) * ct.values().sum::<usize>() as f64)
        .sum::<f64>()
        / h
}

fn falling(r: usize, k: u32) -> f64 {
    let mut v = 1.0;
    for i in 0..k as usize {
        if i >= r {
            return 0.0;
        }
        v *= (r - i) as f64;
    }
    v
}

/// `E prod_j (R_j)_[k_j]` for the order map `orders = [(j, k_j), ...]`.
pub fn oracle_factorial_moment(n: usize, orders: &[(usize, u32)], thetas: &[f64]) -> f64 {
    let h = oracle_h(n, thetas);
    enumerate_cycle_types(n)
        .iter()
        .map(|ct| {
            let prod: f64 = orders
                .iter()
                .map(|&(j, k)| falling(ct.get(&j).copied().unwrap_or(0), k))
                .product();
            type_weight(ct, thetas) * prod
        })
        .sum::<f64>()
        / h
}

/// Every order map `[(j, k_j)]` with `sum j k_j <= n`: one per cycle type
/// of each total `s <= n` (k_j = multiplicity of part j).
pub fn all_order_maps(n: usize) -> Vec<Vec<(usize, u32)>> {
    let mut out = vec![vec![]];
    for s in 1..=n {
        for ct in enumerate_cycle_types(s) {
            out.push(ct.into_iter().map(|(j, r)| (j, r as u32)).collect());
        }
    }
    out
}

/// The distinct empirical cycle types of n and their exact probabilities.
pub fn oracle_type_distribution(n: usize, thetas: &[f64]) -> Vec<(BTreeMap<usize, usize>, f64)> {
    let h = oracle_h(n, thetas);
    enumerate_cycle_types(n)
        .into_iter()
        .map(|ct| {
            let w = type_weight(&ct, thetas) / h;
            (ct, w)
        })
        .collect()
}
