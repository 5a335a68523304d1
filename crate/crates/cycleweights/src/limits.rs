//! Limiting laws of the cycle statistics, per weight regime, as evaluable
//! predictions.
//!
//! Each [`LimitLaw`] pairs a distribution (or limiting constant) with the
//! rescaling that maps the raw statistic onto it. The regime table:
//!
//! | weights                          | L1                                   | K                         | R_j                 |
//! |----------------------------------|--------------------------------------|---------------------------|---------------------|
//! | `exp(n^g), g > 1`                | point mass at n                      | `K -> 1`                  | `R_j -> 0`          |
//! | `~exp(n^g), 0 < g < 1`           | `L1/(log n)^{1/g} -> (1-g)^{-1/g}`   | (open)                    | `Poisson(theta_j/j)`|
//! | `~n^g, g > 0`                    | `L1/n^{1/(g+1)} => Gamma(g+1, a)`    | `E(K) ~ C n^{g/(g+1)}`    | `Poisson(theta_j/j)`|
//! | `theta_n -> theta`               | `L1/n => Beta(1, theta)`             | `E(K) ~ theta log n`      | `Poisson(theta_j/j)`|
//! | `n^-g` or `exp(-n^g), g < 1`     | `n - L1 => pmf prop. to h_m`         | `K-1 => Poisson(sum theta_j/j)` | `Poisson(theta_j/j)` |
//! | `exp(-n^g), g > 1`               | `L1/(log n/(g-1))^{1/g} -> 1`        | (open)                    | `ln E(R_j)` growth  |
//!
//! In the convergent regime the sorted normalized cycle lengths converge
//! jointly to the Poisson-Dirichlet distribution, realized here through
//! its GEM stick-breaking construction.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::NormTable;
use crate::logsum::CompensatedSum;
use crate::rng::CounterRng;
use crate::special::{ln_gamma, reg_lower_gamma};
use crate::weights::{build_weights, FamilyKind, FamilyParams, WeightError, WeightTable};

#[derive(Debug, Error, PartialEq)]
pub enum LimitsError {
    #[error("no limit law is available for ({family}, {statistic})")]
    Unsupported {
        family: &'static str,
        statistic: String,
    },
    #[error("s = {s} outside the support of {law}")]
    OutsideSupport { s: f64, law: &'static str },
    #[error("{0} is not a univariate distribution; evaluate it through its dedicated routine")]
    NotUnivariate(&'static str),
    #[error("series for {what} did not converge within the available table")]
    NotConverged { what: &'static str },
    #[error("sum of h_n diverges for family {0}; the tail law needs decaying weights")]
    NotSummable(&'static str),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// The statistics whose limits are tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Length of the cycle containing a fixed index.
    L1,
    /// Total number of cycles.
    K,
    /// Number of cycles of length j.
    Rj(usize),
    /// Sorted normalized cycle lengths.
    LargestCycles,
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statistic::L1 => write!(f, "L1"),
            Statistic::K => write!(f, "K"),
            Statistic::Rj(j) => write!(f, "R_{j}"),
            Statistic::LargestCycles => write!(f, "largest_cycles"),
        }
    }
}

/// The shape of a limiting prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawKind {
    /// `P(stat = n) -> 1`: the whole permutation is one cycle.
    PointMassAtN,
    /// The rescaled statistic concentrates at a deterministic point.
    LogPowerConcentration { point: f64 },
    /// Gamma distribution with the given shape and rate.
    Gamma { shape: f64, rate: f64 },
    /// Beta distribution; tail `P(X > s) = (1-s)^beta` when `alpha = 1`.
    Beta { alpha: f64, beta: f64 },
    /// Poisson with the given mean (mean 0 is the point mass at 0).
    Poisson { mean: f64 },
    /// `stat - 1` is asymptotically Poisson with the given mean.
    PoissonShifted { mean: f64 },
    /// GEM stick-breaking law of the normalized cycle lengths in order of
    /// discovery; sorting yields Poisson-Dirichlet.
    Gem { theta: f64 },
    /// `n - L1` converges to the pmf proportional to `h_m`.
    Tail,
    /// A rescaled mean converges to a constant (not a distribution).
    MeanConstant { constant: f64 },
}

impl LawKind {
    pub fn name(&self) -> &'static str {
        match self {
            LawKind::PointMassAtN => "point_mass_at_n",
            LawKind::LogPowerConcentration { .. } => "log_power_concentration",
            LawKind::Gamma { .. } => "gamma",
            LawKind::Beta { .. } => "beta",
            LawKind::Poisson { .. } => "poisson",
            LawKind::PoissonShifted { .. } => "poisson_shifted",
            LawKind::Gem { .. } => "gem",
            LawKind::Tail => "tail",
            LawKind::MeanConstant { .. } => "mean_constant",
        }
    }
}

/// A limit law together with the rescaling it applies to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitLaw {
    pub kind: LawKind,
    pub rescale: String,
}

impl LimitLaw {
    fn new(kind: LawKind, rescale: impl Into<String>) -> Self {
        LimitLaw {
            kind,
            rescale: rescale.into(),
        }
    }

    /// Wire format: `{"law": ..., "params": {...}, "rescale": ...}`.
    pub fn to_json(&self) -> Value {
        let params = match &self.kind {
            LawKind::PointMassAtN | LawKind::Tail => json!({}),
            LawKind::LogPowerConcentration { point } => json!({ "point": point }),
            LawKind::Gamma { shape, rate } => json!({ "shape": shape, "rate": rate }),
            LawKind::Beta { alpha, beta } => json!({ "alpha": alpha, "beta": beta }),
            LawKind::Poisson { mean } | LawKind::PoissonShifted { mean } => {
                json!({ "mean": mean })
            }
            LawKind::Gem { theta } => json!({ "theta": theta }),
            LawKind::MeanConstant { constant } => json!({ "constant": constant }),
        };
        json!({ "law": self.kind.name(), "params": params, "rescale": self.rescale })
    }
}

/// Rate of the Gamma limit of `L1 / n^{1/(gamma+1)}` for algebraic weights:
/// `a = Gamma(gamma+1)^{1/(gamma+1)}`. With shape `gamma + 1` this makes
/// `x^gamma e^{-a x}` a probability density.
pub fn algebraic_gamma_rate(gamma: f64) -> f64 {
    (ln_gamma(gamma + 1.0) / (gamma + 1.0)).exp()
}

/// Constant of `E_n(K) n^{-gamma/(gamma+1)}` for algebraic weights:
/// `(Gamma(gamma)/gamma^gamma)^{1/(gamma+1)}`.
pub fn algebraic_expected_k_constant(gamma: f64) -> f64 {
    ((ln_gamma(gamma) - gamma * gamma.ln()) / (gamma + 1.0)).exp()
}

/// Concentration point of `L1/(log n)^{1/gamma}` for sub-exponential
/// growth: `(1-gamma)^{-1/gamma}`.
pub fn subexp_growth_concentration_point(gamma: f64) -> f64 {
    (1.0 - gamma).powf(-1.0 / gamma)
}

/// Predicted `ln E_n(R_j)` under super-exponential decay:
/// `j gamma (log n / (gamma-1))^{(gamma-1)/gamma}`.
pub fn superexp_decay_expected_rj_log(gamma: f64, n: usize, j: usize) -> f64 {
    assert!(gamma > 1.0 && n >= 3);
    j as f64 * gamma * ((n as f64).ln() / (gamma - 1.0)).powf((gamma - 1.0) / gamma)
}

/// `theta_j` of a family, for Poisson means. Cheap for every family; the
/// sub-exponential-growth extraction only needs a table of length `j`.
fn theta_j(params: &FamilyParams, j: usize) -> Result<f64, LimitsError> {
    let table = build_weights(params, j.max(2))?;
    Ok(table.log_theta(j).exp())
}

/// Looks up the limit law for `(family, statistic)`.
///
/// Regimes where the behavior of a statistic is an open problem (K under
/// sub-exponential growth or super-exponential decay, and anything about
/// custom tables) return [`LimitsError::Unsupported`] rather than a guess.
pub fn predict(params: &FamilyParams, statistic: Statistic) -> Result<LimitLaw, LimitsError> {
    params.validate()?;
    let unsupported = || LimitsError::Unsupported {
        family: params.kind.as_str(),
        statistic: statistic.to_string(),
    };
    // The constant and asymptotically-constant families share their limits.
    let theta_limit = match params.kind {
        FamilyKind::Uniform => Some(1.0),
        FamilyKind::Ewens | FamilyKind::AsymptoticEwens => params.theta,
        _ => None,
    };
    let law = match (params.kind, statistic) {
        (_, Statistic::Rj(0)) => return Err(unsupported()),

        // Convergent weights: theta_n -> theta
        (FamilyKind::Uniform | FamilyKind::Ewens | FamilyKind::AsymptoticEwens, stat) => {
            let theta = theta_limit.unwrap();
            match stat {
                Statistic::L1 => LimitLaw::new(
                    LawKind::Beta {
                        alpha: 1.0,
                        beta: theta,
                    },
                    "L1/n",
                ),
                Statistic::K => LimitLaw::new(
                    LawKind::MeanConstant { constant: theta },
                    "E_n(K)/log(n)",
                ),
                Statistic::Rj(j) => LimitLaw::new(
                    LawKind::Poisson {
                        mean: theta_j(params, j)? / j as f64,
                    },
                    format!("R_{j}"),
                ),
                Statistic::LargestCycles => {
                    LimitLaw::new(LawKind::Gem { theta }, "cycle lengths / n, discovery order")
                }
            }
        }

        // Algebraic growth
        (FamilyKind::Algebraic, stat) => {
            let gamma = params.gamma.unwrap();
            match stat {
                Statistic::L1 => LimitLaw::new(
                    LawKind::Gamma {
                        shape: gamma + 1.0,
                        rate: algebraic_gamma_rate(gamma),
                    },
                    format!("L1/n^(1/{})", gamma + 1.0),
                ),
                Statistic::K => LimitLaw::new(
                    LawKind::MeanConstant {
                        constant: algebraic_expected_k_constant(gamma),
                    },
                    format!("E_n(K)/n^({}/{})", gamma, gamma + 1.0),
                ),
                Statistic::Rj(j) => LimitLaw::new(
                    LawKind::Poisson {
                        mean: theta_j(params, j)? / j as f64,
                    },
                    format!("R_{j}"),
                ),
                Statistic::LargestCycles => return Err(unsupported()),
            }
        }

        // Sub-exponential growth
        (FamilyKind::SubExpGrowth, stat) => {
            let gamma = params.gamma.unwrap();
            match stat {
                Statistic::L1 => LimitLaw::new(
                    LawKind::LogPowerConcentration {
                        point: subexp_growth_concentration_point(gamma),
                    },
                    format!("L1/(log n)^(1/{gamma})"),
                ),
                Statistic::Rj(j) => LimitLaw::new(
                    LawKind::Poisson {
                        mean: theta_j(params, j)? / j as f64,
                    },
                    format!("R_{j}"),
                ),
                _ => return Err(unsupported()),
            }
        }

        // Super-exponential growth: a single giant cycle
        (FamilyKind::SuperExpGrowth, stat) => match stat {
            Statistic::L1 => LimitLaw::new(LawKind::PointMassAtN, "L1"),
            // K -> 1 and R_j -> 0 exactly, encoded as zero-mean Poissons.
            Statistic::K => LimitLaw::new(LawKind::PoissonShifted { mean: 0.0 }, "K"),
            Statistic::Rj(j) => {
                LimitLaw::new(LawKind::Poisson { mean: 0.0 }, format!("R_{j}"))
            }
            Statistic::LargestCycles => return Err(unsupported()),
        },

        // Sub-exponential decay: one giant cycle plus Poisson dust
        (FamilyKind::SubExpDecayPower | FamilyKind::SubExpDecayStretched, stat) => match stat {
            Statistic::L1 => LimitLaw::new(LawKind::Tail, "n - L1"),
            Statistic::K => LimitLaw::new(
                LawKind::PoissonShifted {
                    mean: sum_theta_over_j(params)?,
                },
                "K - 1",
            ),
            Statistic::Rj(j) => LimitLaw::new(
                LawKind::Poisson {
                    mean: theta_j(params, j)? / j as f64,
                },
                format!("R_{j}"),
            ),
            Statistic::LargestCycles => return Err(unsupported()),
        },

        // Super-exponential decay
        (FamilyKind::SuperExpDecay, stat) => {
            let gamma = params.gamma.unwrap();
            match stat {
                Statistic::L1 => LimitLaw::new(
                    LawKind::LogPowerConcentration { point: 1.0 },
                    format!("L1/(log n/({gamma}-1))^(1/{gamma})"),
                ),
                Statistic::Rj(j) => LimitLaw::new(
                    LawKind::MeanConstant { constant: 1.0 },
                    format!(
                        "ln E_n(R_{j}) / ({j}*{gamma}*(log n/({gamma}-1))^(({gamma}-1)/{gamma}))"
                    ),
                ),
                _ => return Err(unsupported()),
            }
        }

        (FamilyKind::Custom, _) => return Err(unsupported()),
    };
    Ok(law)
}

/// CDF of a univariate limit law at `s`.
pub fn eval_cdf(law: &LimitLaw, s: f64) -> Result<f64, LimitsError> {
    match &law.kind {
        LawKind::Gamma { shape, rate } => {
            if s < 0.0 {
                return Err(LimitsError::OutsideSupport { s, law: "gamma" });
            }
            Ok(reg_lower_gamma(*shape, rate * s))
        }
        LawKind::Beta { alpha, beta } => {
            if !(0.0..=1.0).contains(&s) {
                return Err(LimitsError::OutsideSupport { s, law: "beta" });
            }
            if *alpha == 1.0 {
                Ok(1.0 - (1.0 - s).powf(*beta))
            } else {
                Err(LimitsError::NotUnivariate("beta with alpha != 1"))
            }
        }
        LawKind::Poisson { mean } => poisson_cdf_checked(*mean, s),
        LawKind::PoissonShifted { mean } => poisson_cdf_checked(*mean, s - 1.0),
        LawKind::PointMassAtN => Ok(if s >= 1.0 { 1.0 } else { 0.0 }),
        LawKind::LogPowerConcentration { point } => Ok(if s >= *point { 1.0 } else { 0.0 }),
        LawKind::Gem { .. } => Err(LimitsError::NotUnivariate("gem")),
        LawKind::Tail => Err(LimitsError::NotUnivariate("tail")),
        LawKind::MeanConstant { .. } => Err(LimitsError::NotUnivariate("mean_constant")),
    }
}

fn poisson_cdf_checked(mean: f64, s: f64) -> Result<f64, LimitsError> {
    if s < 0.0 {
        return Err(LimitsError::OutsideSupport { s, law: "poisson" });
    }
    Ok(poisson_cdf(mean, s.floor() as usize))
}

/// `P(Poisson(mean) = k)`.
pub fn poisson_pmf(mean: f64, k: usize) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_gamma(k as f64 + 1.0)).exp()
}

/// `P(Poisson(mean) <= k)` by partial sums.
pub fn poisson_cdf(mean: f64, k: usize) -> f64 {
    let mut s = CompensatedSum::new();
    for i in 0..=k {
        s.add(poisson_pmf(mean, i));
    }
    s.value().min(1.0)
}

/// First `k` GEM(theta) stick lengths:
/// `(X_1, (1-X_1) X_2, (1-X_1)(1-X_2) X_3, ...)` with i.i.d. fractions
/// `X_i ~ Beta(1, theta)` drawn by inverting the tail `P(X > s) = (1-s)^theta`.
///
/// Partial sums are strictly below 1; sorting the full sequence in
/// nonincreasing order realizes a Poisson-Dirichlet prefix.
pub fn gem_sample(theta: f64, k: usize, rng: &mut CounterRng) -> Vec<f64> {
    assert!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    let mut remaining = 1.0_f64;
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        // Survival fraction 1 - X of a Beta(1, theta) draw, clamped into
        // (0, 1) so extreme tail draws cannot collapse a stick (or the
        // remainder) to an exact float 0 or 1.
        let frac = (1.0 - rng.next_f64_open())
            .powf(1.0 / theta)
            .clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
        out.push(remaining * (1.0 - frac));
        remaining = (remaining * frac).max(f64::MIN_POSITIVE);
    }
    out
}

/// Inverse-CDF draw of `Beta(1, theta)`: `X = 1 - (1-U)^{1/theta}`.
pub fn beta_1_theta_draw(theta: f64, rng: &mut CounterRng) -> f64 {
    1.0 - (1.0 - rng.next_f64_open()).powf(1.0 / theta)
}

/// How many consecutive negligible terms end the slowly-varying series.
const LAMBDA_QUIET_RUN: usize = 20;
const LAMBDA_TERM_TOL: f64 = 1e-14;

/// The slowly varying correction `Lambda(x)` of an asymptotically constant
/// family, defined through
///
/// ```text
/// Lambda(1/(1-s)) = exp( sum_{j>=1} (theta_j - theta)/j s^j ),   s = 1 - 1/x.
/// ```
///
/// For exactly constant weights every summand vanishes and `Lambda = 1`.
/// It enters the norm asymptotics `h_n ~ n^{theta-1} Lambda(n) / Gamma(theta)`.
///
/// The series is truncated once the summand magnitude stays below 1e-14
/// for 20 consecutive terms; if the table ends first the requested `x` is
/// out of reach and an error is returned.
pub fn lambda_eval(weights: &WeightTable, theta: f64, x: f64) -> Result<f64, LimitsError> {
    assert!(x >= 1.0, "Lambda is defined for x >= 1");
    let s = 1.0 - 1.0 / x;
    if s == 0.0 {
        return Ok(1.0);
    }
    let mut sum = CompensatedSum::new();
    let mut quiet = 0usize;
    let mut s_pow = 1.0;
    for j in 1..=weights.n_max() {
        s_pow *= s;
        let term = (weights.log_theta(j).exp() - theta) / j as f64 * s_pow;
        sum.add(term);
        if term.abs() < LAMBDA_TERM_TOL {
            quiet += 1;
            if quiet >= LAMBDA_QUIET_RUN {
                return Ok(sum.value().exp());
            }
        } else {
            quiet = 0;
        }
    }
    Err(LimitsError::NotConverged {
        what: "Lambda series",
    })
}

/// `sum_{j>=1} theta_j / j` for a decaying family, with an analytic tail
/// correction beyond the summation horizon.
///
/// This is both the Poisson mean of `K - 1` in the decay regime and
/// `ln sum_{n>=0} h_n`, since the generating function identity
/// `sum h_n z^n = exp(sum theta_n z^n / n)` holds at `z = 1` for summable
/// positive terms.
pub fn sum_theta_over_j(params: &FamilyParams) -> Result<f64, LimitsError> {
    params.validate()?;
    match params.kind {
        FamilyKind::SubExpDecayPower => {
            let gamma = params.gamma.unwrap();
            // sum_{j<=J} j^-(gamma+1) plus the Euler-Maclaurin tail
            // integral(J) - f(J)/2 - f'(J)/12, error O(J^-(gamma+4)).
            let horizon = 100_000usize;
            let mut sum = CompensatedSum::new();
            for j in 1..=horizon {
                sum.add((j as f64).powf(-gamma - 1.0));
            }
            let jf = horizon as f64;
            let tail = jf.powf(-gamma) / gamma - 0.5 * jf.powf(-gamma - 1.0)
                + (gamma + 1.0) / 12.0 * jf.powf(-gamma - 2.0);
            Ok(sum.value() + tail)
        }
        FamilyKind::SubExpDecayStretched | FamilyKind::SuperExpDecay => {
            let gamma = params.gamma.unwrap();
            let mut sum = CompensatedSum::new();
            for j in 1..=1_000_000usize {
                let term = (-(j as f64).powf(gamma)).exp() / j as f64;
                sum.add(term);
                if term < 1e-18 * sum.value() {
                    return Ok(sum.value());
                }
            }
            Err(LimitsError::NotConverged {
                what: "sum theta_j/j",
            })
        }
        FamilyKind::Custom => {
            // Trust the table plus a geometric bound on the unseen tail.
            let table = build_weights(params, params.custom_log_weights.as_ref().unwrap().len())?;
            let mut sum = CompensatedSum::new();
            let mut last = 0.0;
            for j in 1..=table.n_max() {
                last = table.log_theta(j).exp() / j as f64;
                sum.add(last);
            }
            if last > 1e-12 * sum.value() {
                return Err(LimitsError::NotConverged {
                    what: "sum theta_j/j",
                });
            }
            Ok(sum.value())
        }
        _ => Err(LimitsError::NotSummable(params.kind.as_str())),
    }
}

/// Limit pmf of `m = n - L1` in the decay regime: `h_m / sum_j h_j` for
/// `m = 0..=m_max`. The denominator uses the exact generating-function
/// identity `sum_j h_j = exp(sum_j theta_j / j)`.
pub fn tail_length_probs(norms: &NormTable, m_max: usize) -> Result<Vec<f64>, LimitsError> {
    assert!(m_max <= norms.n_max());
    let log_denom = sum_theta_over_j(norms.weights().params())?;
    Ok((0..=m_max)
        .map(|m| (norms.log_h(m) - log_denom).exp())
        .collect())
}
