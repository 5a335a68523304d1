//! Cycle-weight families and their log-weight tables.
//!
//! Every family is materialized as `ln theta_n` for `n = 1..=N`. Log
//! storage is mandatory: the stretched-exponential growth family at
//! `gamma = 3/2`, `n = 1e4` has `ln theta_n = 1e6`, far outside linear
//! f64 range.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logsum::LogSumAcc;
use crate::special::{ln_binomial_rising, ln_gamma};

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("{family}: gamma = {gamma} outside required range {required}")]
    InvalidGamma {
        family: &'static str,
        gamma: f64,
        required: &'static str,
    },
    #[error("theta = {0} must be positive and finite")]
    InvalidTheta(f64),
    #[error("custom weight list has {len} entries, need at least {need}")]
    CustomTooShort { len: usize, need: usize },
    #[error("custom log-weights must be finite or -inf, found {0}")]
    InvalidCustomEntry(f64),
    #[error("table length must be at least {need}, got {got}")]
    TooSmallN { need: usize, got: usize },
    #[error("family `{family}` is missing required parameter `{param}`")]
    MissingParameter {
        family: &'static str,
        param: &'static str,
    },
}

/// The weight regimes, ordered roughly from fastest-growing to
/// fastest-decaying `theta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `theta_n = 1` (uniform random permutations).
    Uniform,
    /// `theta_n = theta`.
    Ewens,
    /// `theta_n = theta + 1/n`, a concrete convergent instance of
    /// `theta_n -> theta` with a nontrivial slowly varying correction.
    AsymptoticEwens,
    /// `theta_n = Gamma(gamma + n + 1) / n! ~ n^gamma`.
    Algebraic,
    /// `theta_n ~ exp(n^gamma)`, `0 < gamma < 1`, defined exactly as the
    /// shifted Taylor coefficients of `A (1-z)^-c exp(a (1-z)^-b)`.
    SubExpGrowth,
    /// `theta_n = exp(n^gamma)`, `gamma > 1`.
    SuperExpGrowth,
    /// `theta_n = n^-gamma`.
    SubExpDecayPower,
    /// `theta_n = exp(-n^gamma)`, `0 < gamma < 1`.
    SubExpDecayStretched,
    /// `theta_n = exp(-n^gamma)`, `gamma > 1`.
    SuperExpDecay,
    /// User-supplied `ln theta_n` table; `-inf` marks a forbidden length.
    Custom,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Uniform => "uniform",
            FamilyKind::Ewens => "ewens",
            FamilyKind::AsymptoticEwens => "asymptotic_ewens",
            FamilyKind::Algebraic => "algebraic",
            FamilyKind::SubExpGrowth => "sub_exp_growth",
            FamilyKind::SuperExpGrowth => "super_exp_growth",
            FamilyKind::SubExpDecayPower => "sub_exp_decay_power",
            FamilyKind::SubExpDecayStretched => "sub_exp_decay_stretched",
            FamilyKind::SuperExpDecay => "super_exp_decay",
            FamilyKind::Custom => "custom",
        }
    }
}

/// A weight family with its parameters.
///
/// Serializes as `{"family": ..., "theta": ..., "gamma": ...,
/// "custom_log_weights": ...}` with absent fields omitted. The derived
/// sub-exponential parameters `(a, b, c, A)` are never serialized; they
/// are recomputed from `gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(rename = "family")]
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_log_weights: Option<Vec<f64>>,
}

impl FamilyParams {
    pub fn uniform() -> Self {
        FamilyParams {
            kind: FamilyKind::Uniform,
            theta: None,
            gamma: None,
            custom_log_weights: None,
        }
    }

    pub fn ewens(theta: f64) -> Result<Self, WeightError> {
        let p = FamilyParams {
            kind: FamilyKind::Ewens,
            theta: Some(theta),
            gamma: None,
            custom_log_weights: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn asymptotic_ewens(theta: f64) -> Result<Self, WeightError> {
        let p = FamilyParams {
            kind: FamilyKind::AsymptoticEwens,
            theta: Some(theta),
            gamma: None,
            custom_log_weights: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn algebraic(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::Algebraic, gamma)
    }

    pub fn sub_exp_growth(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::SubExpGrowth, gamma)
    }

    pub fn super_exp_growth(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::SuperExpGrowth, gamma)
    }

    pub fn sub_exp_decay_power(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::SubExpDecayPower, gamma)
    }

    pub fn sub_exp_decay_stretched(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::SubExpDecayStretched, gamma)
    }

    pub fn super_exp_decay(gamma: f64) -> Result<Self, WeightError> {
        Self::gamma_family(FamilyKind::SuperExpDecay, gamma)
    }

    fn gamma_family(kind: FamilyKind, gamma: f64) -> Result<Self, WeightError> {
        let p = FamilyParams {
            kind,
            theta: None,
            gamma: Some(gamma),
            custom_log_weights: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn custom(log_weights: Vec<f64>) -> Result<Self, WeightError> {
        let p = FamilyParams {
            kind: FamilyKind::Custom,
            theta: None,
            gamma: None,
            custom_log_weights: Some(log_weights),
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks parameter presence and the per-regime gamma ranges.
    pub fn validate(&self) -> Result<(), WeightError> {
        match self.kind {
            FamilyKind::Uniform => Ok(()),
            FamilyKind::Ewens | FamilyKind::AsymptoticEwens => {
                let theta = self.theta.ok_or(WeightError::MissingParameter {
                    family: self.kind.as_str(),
                    param: "theta",
                })?;
                if !(theta > 0.0 && theta.is_finite()) {
                    return Err(WeightError::InvalidTheta(theta));
                }
                Ok(())
            }
            FamilyKind::Algebraic => self.check_gamma(|g| g > 0.0, "gamma > 0"),
            FamilyKind::SubExpGrowth | FamilyKind::SubExpDecayStretched => {
                self.check_gamma(|g| g > 0.0 && g < 1.0, "0 < gamma < 1")
            }
            FamilyKind::SuperExpGrowth | FamilyKind::SuperExpDecay => {
                self.check_gamma(|g| g > 1.0, "gamma > 1")
            }
            FamilyKind::SubExpDecayPower => self.check_gamma(|g| g > 0.0, "gamma > 0"),
            FamilyKind::Custom => {
                let list =
                    self.custom_log_weights
                        .as_ref()
                        .ok_or(WeightError::MissingParameter {
                            family: "custom",
                            param: "custom_log_weights",
                        })?;
                for &w in list {
                    // -inf is the sentinel for theta_n = 0; +inf and NaN are invalid.
                    if w.is_nan() || w == f64::INFINITY {
                        return Err(WeightError::InvalidCustomEntry(w));
                    }
                }
                Ok(())
            }
        }
    }

    fn check_gamma(
        &self,
        ok: impl Fn(f64) -> bool,
        required: &'static str,
    ) -> Result<(), WeightError> {
        let gamma = self.gamma.ok_or(WeightError::MissingParameter {
            family: self.kind.as_str(),
            param: "gamma",
        })?;
        if !gamma.is_finite() || !ok(gamma) {
            return Err(WeightError::InvalidGamma {
                family: self.kind.as_str(),
                gamma,
                required,
            });
        }
        Ok(())
    }

    pub fn theta_value(&self) -> Option<f64> {
        self.theta
    }

    pub fn gamma_value(&self) -> Option<f64> {
        self.gamma
    }

    pub fn label(&self) -> String {
        match self.kind {
            FamilyKind::Uniform => "uniform".to_string(),
            FamilyKind::Ewens | FamilyKind::AsymptoticEwens => {
                format!("{}(theta={})", self.kind.as_str(), self.theta.unwrap_or(f64::NAN))
            }
            FamilyKind::Custom => "custom".to_string(),
            _ => format!("{}(gamma={})", self.kind.as_str(), self.gamma.unwrap_or(f64::NAN)),
        }
    }
}

/// Derived parameters `(a, b, c, A)` of the sub-exponential-growth
/// generating function `A (1-z)^-c exp(a (1-z)^-b)`, chosen so that the
/// extracted coefficients satisfy `ln theta_n = n^gamma + o(n^gamma)`:
///
/// ```text
/// b = gamma / (1 - gamma)
/// a = (1 - gamma) gamma^(gamma / (1 - gamma))
/// c = b/2 + 1
/// A = sqrt(2 pi (b+1)) (a b)^(-(1/2 - c) / (b+1))
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubExpParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub big_a: f64,
}

pub fn sub_exp_params(gamma: f64) -> SubExpParams {
    assert!(gamma > 0.0 && gamma < 1.0, "sub-exp growth needs 0 < gamma < 1");
    let b = gamma / (1.0 - gamma);
    let a = (1.0 - gamma) * gamma.powf(gamma / (1.0 - gamma));
    let c = 0.5 * b + 1.0;
    let big_a = (2.0 * std::f64::consts::PI * (b + 1.0)).sqrt()
        * (a * b).powf(-(0.5 - c) / (b + 1.0));
    SubExpParams { a, b, c, big_a }
}

/// `ln theta_n` for `n = 1..=N`, tagged with its generating family.
///
/// Immutable after construction; share it read-only across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    log_theta: Vec<f64>,
    params: FamilyParams,
}

impl WeightTable {
    pub fn n_max(&self) -> usize {
        self.log_theta.len()
    }

    /// `ln theta_j`, 1-based.
    #[inline]
    pub fn log_theta(&self, j: usize) -> f64 {
        self.log_theta[j - 1]
    }

    /// The raw table, `[0] = ln theta_1`.
    pub fn log_thetas(&self) -> &[f64] {
        &self.log_theta
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn kind(&self) -> FamilyKind {
        self.params.kind
    }
}

/// Builds the log-weight table of a family up to `n_max`.
pub fn build_weights(params: &FamilyParams, n_max: usize) -> Result<WeightTable, WeightError> {
    params.validate()?;
    if n_max == 0 {
        return Err(WeightError::TooSmallN { need: 1, got: 0 });
    }
    let log_theta = match params.kind {
        FamilyKind::Uniform => vec![0.0; n_max],
        FamilyKind::Ewens => {
            let lt = params.theta.unwrap().ln();
            vec![lt; n_max]
        }
        FamilyKind::AsymptoticEwens => {
            let theta = params.theta.unwrap();
            (1..=n_max).map(|n| (theta + 1.0 / n as f64).ln()).collect()
        }
        FamilyKind::Algebraic => {
            let gamma = params.gamma.unwrap();
            (1..=n_max)
                .map(|n| {
                    let nf = n as f64;
                    ln_gamma(gamma + nf + 1.0) - ln_gamma(nf + 1.0)
                })
                .collect()
        }
        FamilyKind::SuperExpGrowth => {
            let gamma = params.gamma.unwrap();
            (1..=n_max).map(|n| (n as f64).powf(gamma)).collect()
        }
        FamilyKind::SubExpDecayPower => {
            let gamma = params.gamma.unwrap();
            (1..=n_max).map(|n| -gamma * (n as f64).ln()).collect()
        }
        FamilyKind::SubExpDecayStretched | FamilyKind::SuperExpDecay => {
            let gamma = params.gamma.unwrap();
            (1..=n_max).map(|n| -(n as f64).powf(gamma)).collect()
        }
        FamilyKind::SubExpGrowth => return extract_subexp_coeffs(params, n_max),
        FamilyKind::Custom => {
            let list = params.custom_log_weights.as_ref().unwrap();
            if list.len() < n_max {
                return Err(WeightError::CustomTooShort {
                    len: list.len(),
                    need: n_max,
                });
            }
            list[..n_max].to_vec()
        }
    };
    Ok(WeightTable {
        log_theta,
        params: params.clone(),
    })
}

/// Exact Taylor coefficients of the sub-exponential-growth family.
///
/// With `G(z) = A (1-z)^-c exp(H(z))` and `H(z) = a (1-z)^-b`, the weights
/// are the shifted coefficients `theta_n = [z^(n-1)] G(z)`. The factor
/// series have coefficients
///
/// ```text
/// [z^k] H        = a C(k+b-1, k)
/// [z^m] (1-z)^-c = C(m+c-1, m)
/// ```
///
/// and `F = exp(H)` satisfies `m F_m = sum_{k=1..m} k H_k F_{m-k}` with
/// `F_0 = e^a`. All terms are positive, so both the recurrence and the
/// final convolution with `A C(m+c-1, m)` accumulate in log space without
/// cancellation. Total work is O(N^2).
pub fn extract_subexp_coeffs(
    params: &FamilyParams,
    n_max: usize,
) -> Result<WeightTable, WeightError> {
    params.validate()?;
    if params.kind != FamilyKind::SubExpGrowth {
        return Err(WeightError::MissingParameter {
            family: params.kind.as_str(),
            param: "sub_exp_growth family",
        });
    }
    if n_max < 2 {
        return Err(WeightError::TooSmallN { need: 2, got: n_max });
    }
    let SubExpParams { a, b, c, big_a } = sub_exp_params(params.gamma.unwrap());
    let m_max = n_max - 1; // highest power of z needed

    let ln_a = a.ln();
    let log_n: Vec<f64> = (0..=m_max).map(|k| (k.max(1) as f64).ln()).collect();

    // ln [z^k] H for k >= 1
    let log_h: Vec<f64> = (0..=m_max)
        .map(|k| ln_a + ln_binomial_rising(b, k))
        .collect();

    // ln F_m via the exp-of-series recurrence
    let mut log_f = vec![0.0; m_max + 1];
    log_f[0] = a;
    for m in 1..=m_max {
        let mut acc = LogSumAcc::new();
        for k in 1..=m {
            acc.add(log_n[k] + log_h[k] + log_f[m - k]);
        }
        log_f[m] = acc.value() - log_n[m];
    }

    // ln [z^m] A (1-z)^-c
    let log_g: Vec<f64> = (0..=m_max)
        .map(|m| big_a.ln() + ln_binomial_rising(c, m))
        .collect();

    // theta_n = [z^(n-1)] G = sum_m g_m f_(n-1-m)
    let mut log_theta = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = LogSumAcc::new();
        for m in 0..n {
            acc.add(log_g[m] + log_f[n - 1 - m]);
        }
        log_theta.push(acc.value());
    }

    Ok(WeightTable {
        log_theta,
        params: params.clone(),
    })
}
