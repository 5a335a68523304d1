//! Run configuration: a JSON config file plus flag overrides (flags win).
//!
//! The size cap comes from `CYCLEWEIGHTS_MAX_N` (default 20000); every
//! requested table size must stay at or below it, since the exact
//! recursion is O(N^2).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use cycleweights::{FamilyKind, FamilyParams, Statistic, DEFAULT_MAX_N};

use crate::error::CliError;
use crate::output::OutputFormat;

pub const MAX_N_ENV: &str = "CYCLEWEIGHTS_MAX_N";

/// The config file schema. Unknown keys are rejected to catch typos.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<FamilyParams>,
    pub max_n: Option<usize>,
    pub n: Option<usize>,
    pub n_grid: Option<Vec<usize>>,
    pub statistics: Option<Vec<String>>,
    pub num_samples: Option<usize>,
    pub seed: Option<u64>,
    pub j: Option<usize>,
    pub j_max: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub tolerances: Option<BTreeMap<String, f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// Flag values collected by the argument parser (all optional).
#[derive(Debug, Default)]
pub struct FlagOverrides {
    pub family: Option<String>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<usize>,
    pub n_grid: Option<Vec<usize>>,
    pub statistic: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub j: Option<usize>,
    pub j_max: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

/// Verification tolerances with their defaults; individual entries can be
/// overridden through the config file's `tolerances` map.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// TV(R_1, Poisson(theta_1)).
    pub poisson_tv: f64,
    /// KS of the exact L1/n law against Beta(1, theta).
    pub beta_ks: f64,
    /// KS of the exact rescaled L1 law against its Gamma limit.
    pub gamma_ks: f64,
    /// |E(K) n^(-g/(g+1)) / C - 1| for algebraic growth.
    pub mean_k_band: f64,
    /// |E(K)/(theta log n) - 1| for convergent weights.
    pub mean_k_log_rel: f64,
    /// |ln h_n(saddle) - ln h_n(exact)|.
    pub saddle_log_gap: f64,
    /// Floor on P(L1 = n) and P(K = 1) under super-exponential growth.
    pub single_cycle_floor: f64,
    /// |ln theta_n - n^gamma| for sub-exponential growth.
    pub subexp_log_gap: f64,
    /// Relative error of the decay-regime tail law over m <= 10.
    pub tail_rel: f64,
    /// KS of sampled stick fractions against Beta(1, theta).
    pub gem_ks: f64,
    /// |ratio - 1| of the L1 mode to its finite-size saddle prediction.
    pub mode_rel: f64,
    /// Multiplicative band (x to 1/x) for weak growth predictions.
    pub factor_band: f64,
    /// |h_n Gamma(theta) / (n^(theta-1) Lambda(n)) - 1|.
    pub norm_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            poisson_tv: 0.02,
            beta_ks: 0.05,
            gamma_ks: 0.05,
            mean_k_band: 0.15,
            mean_k_log_rel: 0.25,
            saddle_log_gap: 0.05,
            single_cycle_floor: 0.95,
            subexp_log_gap: 0.1,
            tail_rel: 0.02,
            gem_ks: 0.03,
            mode_rel: 0.05,
            factor_band: 2.0,
            norm_ratio: 0.05,
        }
    }
}

impl Tolerances {
    fn apply(&mut self, overrides: &BTreeMap<String, f64>) -> Result<(), CliError> {
        for (key, &value) in overrides {
            let slot = match key.as_str() {
                "poisson_tv" => &mut self.poisson_tv,
                "beta_ks" => &mut self.beta_ks,
                "gamma_ks" => &mut self.gamma_ks,
                "mean_k_band" => &mut self.mean_k_band,
                "mean_k_log_rel" => &mut self.mean_k_log_rel,
                "saddle_log_gap" => &mut self.saddle_log_gap,
                "single_cycle_floor" => &mut self.single_cycle_floor,
                "subexp_log_gap" => &mut self.subexp_log_gap,
                "tail_rel" => &mut self.tail_rel,
                "gem_ks" => &mut self.gem_ks,
                "mode_rel" => &mut self.mode_rel,
                "factor_band" => &mut self.factor_band,
                "norm_ratio" => &mut self.norm_ratio,
                other => {
                    return Err(CliError::Config(format!("unknown tolerance `{other}`")));
                }
            };
            if !value.is_finite() || value <= 0.0 {
                return Err(CliError::Config(format!("tolerance `{key}` must be positive")));
            }
            *slot = value;
        }
        Ok(())
    }
}

/// Fully resolved run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub family: FamilyParams,
    pub max_n: usize,
    pub n_grid: Vec<usize>,
    pub statistic: Option<String>,
    pub num_samples: usize,
    pub seed: u64,
    pub j: usize,
    pub j_max: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
}

fn family_kind_from_str(s: &str) -> Result<FamilyKind, CliError> {
    Ok(match s {
        "uniform" => FamilyKind::Uniform,
        "ewens" => FamilyKind::Ewens,
        "asymptotic_ewens" => FamilyKind::AsymptoticEwens,
        "algebraic" => FamilyKind::Algebraic,
        "sub_exp_growth" => FamilyKind::SubExpGrowth,
        "super_exp_growth" => FamilyKind::SuperExpGrowth,
        "sub_exp_decay_power" => FamilyKind::SubExpDecayPower,
        "sub_exp_decay_stretched" => FamilyKind::SubExpDecayStretched,
        "super_exp_decay" => FamilyKind::SuperExpDecay,
        "custom" => FamilyKind::Custom,
        other => {
            return Err(CliError::Config(format!(
                "unknown family `{other}` (expected uniform, ewens, asymptotic_ewens, algebraic, \
                 sub_exp_growth, super_exp_growth, sub_exp_decay_power, sub_exp_decay_stretched, \
                 super_exp_decay, custom)"
            )))
        }
    })
}

pub fn parse_statistic(s: &str, j: usize) -> Result<Statistic, CliError> {
    match s.to_ascii_uppercase().as_str() {
        "L1" => Ok(Statistic::L1),
        "K" => Ok(Statistic::K),
        "RJ" | "R_J" => Ok(Statistic::Rj(j)),
        other => Err(CliError::Config(format!(
            "unknown statistic `{other}` (expected L1, K, Rj)"
        ))),
    }
}

fn env_cap() -> Result<usize, CliError> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("{MAX_N_ENV}={v} is not a size"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

/// Merges config file and flags (flags win) and validates sizes.
pub fn resolve(file: FileConfig, flags: FlagOverrides) -> Result<RunConfig, CliError> {
    let cap = env_cap()?;
    let max_n = file.max_n.unwrap_or(cap).min(cap);

    let family = match &flags.family {
        Some(name) => {
            let kind = family_kind_from_str(name)?;
            FamilyParams {
                kind,
                theta: flags.theta,
                gamma: flags.gamma,
                custom_log_weights: file
                    .family
                    .as_ref()
                    .and_then(|f| f.custom_log_weights.clone()),
            }
        }
        None => {
            let mut base = file
                .family
                .clone()
                .ok_or_else(|| CliError::Config("no family given (flag --family or config)".into()))?;
            if let Some(t) = flags.theta {
                base.theta = Some(t);
            }
            if let Some(g) = flags.gamma {
                base.gamma = Some(g);
            }
            base
        }
    };
    family.validate().map_err(CliError::from)?;

    let n_grid: Vec<usize> = flags
        .n_grid
        .or_else(|| flags.n.map(|n| vec![n]))
        .or_else(|| file.n_grid.clone())
        .or_else(|| file.n.map(|n| vec![n]))
        .unwrap_or_default();
    for &n in &n_grid {
        if n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if n > max_n {
            return Err(CliError::Config(format!(
                "n = {n} exceeds the size cap {max_n} ({MAX_N_ENV} or config max_n)"
            )));
        }
    }

    let statistic = flags
        .statistic
        .or_else(|| file.statistics.as_ref().and_then(|v| v.first().cloned()));

    let format = match flags.format {
        Some(f) => f,
        None => match file.format.as_deref() {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "unknown format `{other}` (expected csv or json)"
                )))
            }
        },
    };

    let mut tolerances = Tolerances::default();
    if let Some(map) = &file.tolerances {
        tolerances.apply(map)?;
    }

    Ok(RunConfig {
        family,
        max_n,
        n_grid,
        statistic,
        num_samples: flags.samples.or(file.num_samples).unwrap_or(0),
        seed: flags.seed.or(file.seed).unwrap_or(0),
        j: flags.j.or(file.j).unwrap_or(1),
        j_max: flags.j_max.or(file.j_max).unwrap_or(5),
        format,
        out: flags.out.or(file.out),
        tolerances,
    })
}

impl RunConfig {
    /// The n grid, required nonempty (exit 2 otherwise).
    pub fn require_n_grid(&self) -> Result<&[usize], CliError> {
        if self.n_grid.is_empty() {
            return Err(CliError::Config(
                "no sizes given: pass --n or --n-grid (or set n/n_grid in the config)".into(),
            ));
        }
        Ok(&self.n_grid)
    }

    /// A single n, required (exit 2 otherwise).
    pub fn require_n(&self) -> Result<usize, CliError> {
        match self.n_grid.as_slice() {
            [n] => Ok(*n),
            [] => Err(CliError::Config("this command needs --n".into())),
            _ => Err(CliError::Config(
                "this command needs a single --n, not an n grid".into(),
            )),
        }
    }
}
