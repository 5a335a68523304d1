//! Saddle-point machinery for coefficient asymptotics.
//!
//! For a weight sequence with generating series `I_mu(z) = sum n^mu theta_n z^n`
//! (so `I_mu = z I'_{mu-1}`), the normalization coefficients satisfy
//!
//! ```text
//! h_n = exp(I_{-1}(r_n)) / (r_n^n sqrt(2 pi I_1(r_n))) (1 + o(1)),
//! ```
//!
//! where the saddle radius `r_n` solves `I_0(r_n) = n`. The same method
//! applied to the sub-exponential-growth parameter generating function
//! `G(z) = A (1-z)^-c exp(a (1-z)^-b)` (with `alpha(z) = z (log G)'`) gives
//!
//! ```text
//! theta_{n+1} = G(rho_n) / (rho_n^{n+1/2} sqrt(2 pi alpha'(rho_n))),
//! alpha(rho_n) = n.
//! ```
//!
//! Ratios `h_{n-j} / h_n` obey two-sided bounds that only involve `I_1` and
//! the saddle radii; see [`ratio_bounds`].

use thiserror::Error;

use crate::logsum::{CompensatedSum, LogSumAcc};
use crate::special::ln_gamma;
use crate::weights::{sub_exp_params, FamilyKind, SubExpParams, WeightTable};

#[derive(Debug, Error, PartialEq)]
pub enum SaddleError {
    #[error("r = {r} outside (0, {radius})")]
    ROutOfRange { r: f64, radius: f64 },
    #[error("series truncated at N = {n_max} has not converged at r = {r}")]
    TailNotConverged { r: f64, n_max: usize },
    #[error("no sign change on the bracket for n = {0}")]
    NoBracket(usize),
    #[error("saddle iteration cap reached for n = {0}")]
    IterationCap(usize),
    #[error("I_{mu} is not available for this generating-function form")]
    UnsupportedMu { mu: i32 },
    #[error("family {0:?} has no convergent power series; no saddle point exists")]
    UnsupportedFamily(FamilyKind),
    #[error("saddle solution lacks I_(-1); solve with a form that provides it")]
    MissingIm1,
}

/// A generating function the saddle method can evaluate.
#[derive(Debug, Clone)]
pub enum GenFnSpec {
    /// `I_0(z) = Gamma(gamma+1) (1-z)^-(gamma+1) - Gamma(gamma+1)`, the
    /// algebraic-growth family (`theta_n = Gamma(gamma+n+1)/n!`). `I_0`,
    /// `I_1`, `I_2` in closed form; `I_{-1}` summed from its own series.
    /// Radius 1.
    AlgebraicClosedForm { gamma: f64 },
    /// The parameter generating function `G(z) = A (1-z)^-c exp(a (1-z)^-b)`
    /// of the sub-exponential-growth family, with `I_0 = z G` and
    /// `alpha(z) = z [c/(1-z) + ab (1-z)^-(b+1)]`. Radius 1.
    SubExpGrowthClosedForm { gamma: f64, derived: SubExpParams },
    /// Direct evaluation of the truncated series `sum_{n<=N} n^mu theta_n r^n`
    /// from a weight table, guarded against truncation bias.
    SeriesTruncated { weights: WeightTable, radius: f64 },
}

impl GenFnSpec {
    pub fn algebraic(gamma: f64) -> Self {
        assert!(gamma > 0.0, "algebraic family needs gamma > 0");
        GenFnSpec::AlgebraicClosedForm { gamma }
    }

    pub fn sub_exp_growth(gamma: f64) -> Self {
        GenFnSpec::SubExpGrowthClosedForm {
            gamma,
            derived: sub_exp_params(gamma),
        }
    }

    /// Series form for a weight table, with the convergence radius implied
    /// by its family (1 for every built-in family except super-exponential
    /// decay, whose series is entire). Super-exponential growth has radius
    /// zero and is rejected.
    pub fn series(weights: WeightTable) -> Result<Self, SaddleError> {
        let radius = match weights.kind() {
            FamilyKind::SuperExpGrowth => {
                return Err(SaddleError::UnsupportedFamily(FamilyKind::SuperExpGrowth))
            }
            FamilyKind::SuperExpDecay => f64::INFINITY,
            _ => 1.0,
        };
        Ok(GenFnSpec::SeriesTruncated { weights, radius })
    }

    pub fn radius(&self) -> f64 {
        match self {
            GenFnSpec::AlgebraicClosedForm { .. } | GenFnSpec::SubExpGrowthClosedForm { .. } => 1.0,
            GenFnSpec::SeriesTruncated { radius, .. } => *radius,
        }
    }
}

/// A solved saddle point: the radius, the `I_mu` values there, and the
/// residual of the saddle equation (relative to `n`).
///
/// For the h-side forms the equation is `I_0(r_n) = n`; for the
/// sub-exponential parameter form it is `alpha(rho_n) = n`, and `i_m1`
/// is absent.
#[derive(Debug, Clone)]
pub struct SaddleSolution {
    pub n: usize,
    pub r: f64,
    pub i_m1: Option<f64>,
    pub i_0: f64,
    pub i_1: f64,
    pub residual: f64,
}

/// Relative tolerance of the terminated series tail: the last available
/// term must be below `TAIL_GUARD` times the partial sum.
const TAIL_GUARD: f64 = 1e-14;

/// Evaluates `I_mu(r)` for `mu` in `{-1, 0, 1, 2}`.
///
/// Closed forms are used where available. For truncated series the call
/// fails if the last stored term is not negligible — a silently biased
/// tail would corrupt saddle positions near the radius.
pub fn eval_imu(spec: &GenFnSpec, mu: i32, r: f64) -> Result<f64, SaddleError> {
    assert!((-1..=2).contains(&mu), "mu must be in -1..=2");
    let radius = spec.radius();
    if r.is_nan() || r <= 0.0 || r >= radius {
        return Err(SaddleError::ROutOfRange { r, radius });
    }
    match spec {
        GenFnSpec::AlgebraicClosedForm { gamma } => algebraic_imu(*gamma, mu, r),
        GenFnSpec::SubExpGrowthClosedForm { derived, .. } => subexp_imu(derived, mu, r),
        GenFnSpec::SeriesTruncated { weights, .. } => series_imu(weights, mu, r),
    }
}

/// Term cap for the adaptively summed I_(-1) series.
const IM1_SERIES_CAP: usize = 100_000_000;

fn algebraic_imu(gamma: f64, mu: i32, r: f64) -> Result<f64, SaddleError> {
    let g1 = ln_gamma(gamma + 1.0).exp();
    let one_minus = 1.0 - r;
    match mu {
        0 => Ok(g1 * one_minus.powf(-gamma - 1.0) - g1),
        1 => Ok(g1 * (gamma + 1.0) * r * one_minus.powf(-gamma - 2.0)),
        2 => {
            // I_2 = z I_1' = Gamma(gamma+2) z (1 + (gamma+1) z) (1-z)^-(gamma+3)
            Ok(g1 * (gamma + 1.0) * r * (1.0 + (gamma + 1.0) * r) * one_minus.powf(-gamma - 3.0))
        }
        -1 => {
            // The antiderivative of I_0(z)/z vanishing at 0, summed as its
            // own series: sum_n theta_n r^n / n with theta_n = Gamma(gamma+n+1)/n!.
            // theta_{n+1}/theta_n = (gamma+n+1)/(n+1), so terms update in O(1);
            // they peak near n ~ gamma/(1-r) and then decay geometrically.
            let mut sum = CompensatedSum::new();
            let mut term = ln_gamma(gamma + 2.0).exp() * r; // theta_1 r
            let mut nf = 1.0;
            sum.add(term);
            for _ in 0..IM1_SERIES_CAP {
                term *= (gamma + nf + 1.0) / (nf + 1.0) * r;
                nf += 1.0;
                let contrib = term / nf;
                sum.add(contrib);
                if contrib < sum.value() * 1e-17 {
                    return Ok(sum.value());
                }
            }
            Err(SaddleError::TailNotConverged {
                r,
                n_max: IM1_SERIES_CAP,
            })
        }
        _ => unreachable!(),
    }
}

fn subexp_imu(p: &SubExpParams, mu: i32, r: f64) -> Result<f64, SaddleError> {
    let SubExpParams { a, b, c, big_a } = *p;
    let one_minus = 1.0 - r;
    // ln G(r); computed in log form to postpone the exponential blow-up
    let ln_g = big_a.ln() - c * one_minus.ln() + a * one_minus.powf(-b);
    let alpha = subexp_alpha(p, r);
    match mu {
        0 => Ok(r * ln_g.exp()),
        1 => Ok(r * ln_g.exp() * (alpha + 1.0)),
        2 => {
            let da = subexp_alpha_prime(p, r);
            Ok(r * ln_g.exp() * ((alpha + 1.0).powi(2) + r * da))
        }
        -1 => Err(SaddleError::UnsupportedMu { mu }),
        _ => unreachable!(),
    }
}

/// `alpha(z) = z (log G)'(z) = z [c/(1-z) + ab (1-z)^-(b+1)]`.
fn subexp_alpha(p: &SubExpParams, r: f64) -> f64 {
    let one_minus = 1.0 - r;
    r * (p.c / one_minus + p.a * p.b * one_minus.powf(-p.b - 1.0))
}

fn subexp_alpha_prime(p: &SubExpParams, r: f64) -> f64 {
    let one_minus = 1.0 - r;
    p.c / one_minus + p.a * p.b * one_minus.powf(-p.b - 1.0)
        + r * (p.c * one_minus.powi(-2)
            + p.a * p.b * (p.b + 1.0) * one_minus.powf(-p.b - 2.0))
}

fn series_imu(weights: &WeightTable, mu: i32, r: f64) -> Result<f64, SaddleError> {
    let n_max = weights.n_max();
    let ln_r = r.ln();
    let mut acc = LogSumAcc::new();
    let mut last = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let lt = weights.log_theta(n);
        if lt == f64::NEG_INFINITY {
            continue;
        }
        last = mu as f64 * (n as f64).ln() + lt + n as f64 * ln_r;
        acc.add(last);
    }
    let total = acc.value();
    if last > total + TAIL_GUARD.ln() {
        return Err(SaddleError::TailNotConverged { r, n_max });
    }
    Ok(total.exp())
}

/// The saddle equation value and derivative at `r`: `I_0` with derivative
/// `I_1 / r` for the h-side forms, `alpha` with derivative `alpha'` for the
/// sub-exponential parameter form.
fn saddle_fn(spec: &GenFnSpec, r: f64) -> Result<(f64, f64), SaddleError> {
    match spec {
        GenFnSpec::SubExpGrowthClosedForm { derived, .. } => {
            Ok((subexp_alpha(derived, r), subexp_alpha_prime(derived, r)))
        }
        _ => {
            let i0 = eval_imu(spec, 0, r)?;
            let i1 = eval_imu(spec, 1, r)?;
            Ok((i0, i1 / r))
        }
    }
}

const BISECTION_WIDTH: f64 = 1e-6;
const NEWTON_CAP: usize = 200;

/// Solves the saddle equation for `n`: bracketing bisection to a narrow
/// interval, then safeguarded Newton until the residual is at most
/// `1e-9 n` and the step has collapsed. The equation value is strictly
/// increasing in `r`, so a sign-change bracket always pins the root.
pub fn solve_saddle(spec: &GenFnSpec, n: usize) -> Result<SaddleSolution, SaddleError> {
    assert!(n >= 1);
    let target = n as f64;
    let radius = spec.radius();
    let mut lo = 1e-12;
    let mut hi = if radius.is_finite() {
        radius - radius * f64::EPSILON.sqrt()
    } else {
        // Entire series: expand geometrically until the equation exceeds n.
        let mut hi = 2.0;
        let mut iter = 0;
        while saddle_fn(spec, hi)?.0 < target {
            hi *= 2.0;
            iter += 1;
            if iter > 2_000 {
                return Err(SaddleError::NoBracket(n));
            }
        }
        hi
    };

    // A truncated series may not satisfy the tail guard near the radius.
    // Binary-search the largest evaluable upper end; if the root is not
    // below it, the table is too short for this n.
    let mut g_hi = match saddle_fn(spec, hi) {
        Ok((v, _)) => v,
        Err(SaddleError::TailNotConverged { .. }) => {
            let mut bad = hi;
            let mut good = lo;
            let mut g_good = f64::NEG_INFINITY;
            for _ in 0..200 {
                let mid = 0.5 * (good + bad);
                match saddle_fn(spec, mid) {
                    Ok((v, _)) => {
                        good = mid;
                        g_good = v;
                    }
                    Err(SaddleError::TailNotConverged { .. }) => bad = mid,
                    Err(e) => return Err(e),
                }
                if bad - good < 1e-12 * bad.max(1.0) {
                    break;
                }
            }
            hi = good;
            g_good
        }
        Err(e) => return Err(e),
    };
    let g_lo = saddle_fn(spec, lo)?.0;
    if g_lo > target || g_hi < target {
        return Err(SaddleError::NoBracket(n));
    }

    // Bisection until the bracket is narrow.
    while hi - lo > BISECTION_WIDTH * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let (g, _) = saddle_fn(spec, mid)?;
        if g < target {
            lo = mid;
        } else {
            hi = mid;
            g_hi = g;
        }
    }
    let _ = g_hi;

    // Safeguarded Newton: any step leaving the bracket falls back to
    // bisection; the bracket keeps shrinking either way.
    let mut r = 0.5 * (lo + hi);
    for _ in 0..NEWTON_CAP {
        let (g, dg) = saddle_fn(spec, r)?;
        if g < target {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
        let step = (g - target) / dg;
        let mut next = r - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        // Converged: residual met and the iterate has stopped moving.
        if (g - target).abs() <= 1e-9 * target
            && (next - r).abs() <= 1e-15 * r.abs().max(1e-300)
        {
            break;
        }
        r = next;
    }
    let residual = (saddle_fn(spec, r)?.0 - target).abs();
    if residual > 1e-9 * target {
        return Err(SaddleError::IterationCap(n));
    }

    let (i_0, i_1, i_m1) = match spec {
        GenFnSpec::SubExpGrowthClosedForm { .. } => {
            (eval_imu(spec, 0, r)?, eval_imu(spec, 1, r)?, None)
        }
        _ => (
            eval_imu(spec, 0, r)?,
            eval_imu(spec, 1, r)?,
            Some(eval_imu(spec, -1, r)?),
        ),
    };
    Ok(SaddleSolution {
        n,
        r,
        i_m1,
        i_0,
        i_1,
        residual,
    })
}

/// Saddle-point approximation of `ln h_n`:
/// `I_{-1}(r_n) - n ln r_n - (1/2) ln(2 pi I_1(r_n))`.
pub fn asymptotic_hn(sol: &SaddleSolution) -> Result<f64, SaddleError> {
    let i_m1 = sol.i_m1.ok_or(SaddleError::MissingIm1)?;
    Ok(i_m1 - sol.n as f64 * sol.r.ln() - 0.5 * (2.0 * std::f64::consts::PI * sol.i_1).ln())
}

/// Saddle-point approximation of `ln theta_{n+1}` for the
/// sub-exponential-growth family:
/// `ln G(rho_n) - (n + 1/2) ln rho_n - (1/2) ln(2 pi alpha'(rho_n))`
/// with `alpha(rho_n) = n`.
pub fn asymptotic_theta(spec: &GenFnSpec, n: usize) -> Result<f64, SaddleError> {
    let derived = match spec {
        GenFnSpec::SubExpGrowthClosedForm { derived, .. } => derived,
        _ => return Err(SaddleError::UnsupportedMu { mu: 0 }),
    };
    let sol = solve_saddle(spec, n)?;
    let rho = sol.r;
    let one_minus = 1.0 - rho;
    let ln_g = derived.big_a.ln() - derived.c * one_minus.ln() + derived.a * one_minus.powf(-derived.b);
    let da = subexp_alpha_prime(derived, rho);
    Ok(ln_g - (n as f64 + 0.5) * rho.ln() - 0.5 * (2.0 * std::f64::consts::PI * da).ln())
}

/// Two-sided bound on `ln(h_{n-j} / h_n)` up to `(1 + o(1))`:
///
/// ```text
/// sqrt(I_1(r_n)/I_1(r_{n-j})) r_{n-j}^j  <=  h_{n-j}/h_n  <=  sqrt(I_1(r_n)/I_1(r_{n-j})) r_n^j
/// ```
///
/// Returns `(ln lower, ln upper)`. `j = 0` gives `(0, 0)`.
pub fn ratio_bounds(spec: &GenFnSpec, n: usize, j: usize) -> Result<(f64, f64), SaddleError> {
    assert!(j < n, "need j < n");
    if j == 0 {
        return Ok((0.0, 0.0));
    }
    let sol_n = solve_saddle(spec, n)?;
    let sol_nj = solve_saddle(spec, n - j)?;
    let half_ratio = 0.5 * (sol_n.i_1.ln() - sol_nj.i_1.ln());
    let lower = half_ratio + j as f64 * sol_nj.r.ln();
    let upper = half_ratio + j as f64 * sol_n.r.ln();
    Ok((lower, upper))
}
