//! Subcommand implementations (everything except `verify`).

use serde_json::json;

use cycleweights::exact::{compute_norms, dist_k, dist_l1, dist_rj, expected_k, factorial_moment};
use cycleweights::montecarlo::{draw_batch, run_batch};
use cycleweights::saddle::{asymptotic_hn, solve_saddle, GenFnSpec};
use cycleweights::weights::{build_weights, FamilyKind, WeightTable};
use cycleweights::{NormTable, Pmf, Statistic};

use crate::config::{parse_statistic, RunConfig};
use crate::error::CliError;
use crate::output::{emit, Cell, Table};

fn family_meta(config: &RunConfig) -> (&'static str, serde_json::Value) {
    ("family", serde_json::to_value(&config.family).unwrap())
}

fn build_table(config: &RunConfig, n_max: usize) -> Result<WeightTable, CliError> {
    // The sub-exponential extraction needs at least two coefficients.
    let n_build = n_max.max(2);
    Ok(build_weights(&config.family, n_build)?)
}

fn norms_up_to(config: &RunConfig, n_max: usize) -> Result<NormTable, CliError> {
    let weights = build_table(config, n_max)?;
    Ok(compute_norms(&weights, n_max)?)
}

pub fn cmd_weights(config: &RunConfig) -> Result<(), CliError> {
    let grid = config.require_n_grid()?;
    let n_max = *grid.iter().max().unwrap();
    let weights = build_table(config, n_max)?;
    let mut table = Table::new("weights", vec!["n", "log_theta"]);
    table.meta.push(family_meta(config));
    for &n in grid {
        table.push(vec![Cell::Int(n as u64), Cell::Float(weights.log_theta(n))]);
    }
    emit(&table.render(config.format), config.out.as_deref())
}

pub fn cmd_normalize(config: &RunConfig) -> Result<(), CliError> {
    let grid = config.require_n_grid()?;
    let n_max = *grid.iter().max().unwrap();
    let norms = norms_up_to(config, n_max)?;
    let mut table = Table::new("normalize", vec!["n", "log_h"]);
    table.meta.push(family_meta(config));
    for &n in grid {
        table.push(vec![Cell::Int(n as u64), Cell::Float(norms.log_h(n))]);
    }
    emit(&table.render(config.format), config.out.as_deref())
}

fn pmf_table(config: &RunConfig, pmf: &Pmf) -> Table {
    let mut table = Table::new("dist", vec!["k", "probability", "log_probability"]);
    table.meta.push(family_meta(config));
    table.meta.push(("label", json!(pmf.label)));
    for (&k, &lp) in pmf.support.iter().zip(&pmf.log_prob) {
        table.push(vec![
            Cell::Int(k as u64),
            Cell::Float(lp.exp()),
            Cell::Float(lp),
        ]);
    }
    table
}

pub fn cmd_dist(config: &RunConfig) -> Result<(), CliError> {
    let n = config.require_n()?;
    let name = config
        .statistic
        .as_deref()
        .ok_or_else(|| CliError::Config("dist needs --statistic (L1, K, or Rj)".into()))?;
    let statistic = parse_statistic(name, config.j)?;
    let norms = norms_up_to(config, n)?;
    let pmf = match statistic {
        Statistic::L1 => dist_l1(&norms, n)?,
        Statistic::K => dist_k(&norms, n)?,
        Statistic::Rj(j) => {
            if j == 0 || j > n {
                return Err(CliError::Config(format!("need 1 <= j <= n, got j={j}")));
            }
            dist_rj(&norms, n, j)?
        }
        Statistic::LargestCycles => {
            return Err(CliError::Config(
                "dist supports L1, K, and Rj (largest cycles have no exact finite pmf here)".into(),
            ))
        }
    };
    emit(
        &pmf_table(config, &pmf).render(config.format),
        config.out.as_deref(),
    )
}

pub fn cmd_moments(config: &RunConfig) -> Result<(), CliError> {
    let n = config.require_n()?;
    let norms = norms_up_to(config, n)?;
    let mut table = Table::new("moments", vec!["quantity", "value"]);
    table.meta.push(family_meta(config));
    table.meta.push(("n", json!(n)));
    table.push(vec![
        Cell::Text("expected_K".into()),
        Cell::Float(expected_k(&norms, n)?),
    ]);
    for j in 1..=config.j_max.min(n) {
        table.push(vec![
            Cell::Text(format!("expected_R_{j}")),
            Cell::Float(factorial_moment(&norms, n, &[(j, 1)])?),
        ]);
    }
    emit(&table.render(config.format), config.out.as_deref())
}

pub fn cmd_sample(config: &RunConfig, raw: bool) -> Result<(), CliError> {
    let n = config.require_n()?;
    if config.num_samples == 0 {
        return Err(CliError::Config("sample needs --samples >= 1".into()));
    }
    let norms = norms_up_to(config, n)?;
    if raw {
        // One CSV row per sample, in sample-index order.
        let samples = draw_batch(&norms, n, config.num_samples, config.seed)?;
        let mut out = String::from("sample_index,K,L1,sorted_lengths\n");
        for (i, rec) in samples.iter().enumerate() {
            let lengths: Vec<String> = rec.sorted_lengths.iter().map(|l| l.to_string()).collect();
            out.push_str(&format!(
                "{i},{},{},{}\n",
                rec.k,
                rec.ordered_lengths[0],
                lengths.join(";")
            ));
        }
        emit(&out, config.out.as_deref())
    } else {
        let stats = run_batch(&norms, n, config.num_samples, config.seed, config.j_max)?;
        let mut root = serde_json::to_value(&stats).unwrap();
        root.as_object_mut()
            .unwrap()
            .insert("family".into(), serde_json::to_value(&config.family).unwrap());
        root.as_object_mut()
            .unwrap()
            .insert("command".into(), json!("sample"));
        let mut text = serde_json::to_string_pretty(&root).unwrap();
        text.push('\n');
        emit(&text, config.out.as_deref())
    }
}

/// Saddle spec for the configured family: closed form for algebraic
/// growth, the truncated weight series otherwise. `n_hint` is the largest
/// saddle index wanted; the series table must extend well past the saddle
/// radius for the tail guard, which for the O(N^2) sub-exponential
/// extraction means trading table length against build cost (the guard
/// still rejects any truncation that proves too short).
pub fn saddle_spec(config: &RunConfig, n_hint: usize) -> Result<GenFnSpec, CliError> {
    match config.family.kind {
        FamilyKind::Algebraic => Ok(GenFnSpec::algebraic(config.family.gamma.unwrap())),
        FamilyKind::SubExpGrowth => {
            let weights = build_table(config, (4 * n_hint).max(256).min(config.max_n))?;
            Ok(GenFnSpec::series(weights)?)
        }
        _ => {
            // O(N) tables: build to the cap so slowly-opening radii
            // (constant-weight families need N ~ 16 n) stay covered.
            let weights = build_table(config, config.max_n)?;
            Ok(GenFnSpec::series(weights)?)
        }
    }
}

pub fn cmd_saddle(config: &RunConfig, with_exact: bool) -> Result<(), CliError> {
    let grid = config.require_n_grid()?;
    let spec = saddle_spec(config, *grid.iter().max().unwrap())?;
    let exact = if with_exact {
        Some(norms_up_to(config, *grid.iter().max().unwrap())?)
    } else {
        None
    };
    let mut table = Table::new(
        "saddle",
        vec![
            "n",
            "r_n",
            "I_m1",
            "I_0",
            "I_1",
            "log_h_asymptotic",
            "log_h_exact",
            "delta",
        ],
    );
    table.meta.push(family_meta(config));
    for &n in grid {
        let sol = solve_saddle(&spec, n)?;
        let approx = asymptotic_hn(&sol)?;
        let (log_h_exact, delta) = match &exact {
            Some(norms) => {
                let e = norms.log_h(n);
                (Cell::Float(e), Cell::Float(approx - e))
            }
            None => (Cell::Empty, Cell::Empty),
        };
        table.push(vec![
            Cell::Int(n as u64),
            Cell::Float(sol.r),
            Cell::Float(sol.i_m1.expect("h-side spec provides I_(-1)")),
            Cell::Float(sol.i_0),
            Cell::Float(sol.i_1),
            Cell::Float(approx),
            log_h_exact,
            delta,
        ]);
    }
    emit(&table.render(config.format), config.out.as_deref())
}
