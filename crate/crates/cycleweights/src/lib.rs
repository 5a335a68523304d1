//! Exact and asymptotic analysis of random permutations with cycle weights.
//!
//! A permutation of `n` elements with `R_j` cycles of length `j` gets
//! probability proportional to `prod_j theta_j^{R_j}`, where `theta_1,
//! theta_2, ...` is a nonnegative weight sequence. This crate provides:
//!
//! - [`weights`]: the standard weight families (constant, asymptotically
//!   constant, algebraic, stretched-exponential growth/decay, custom
//!   tables), including exact Taylor-coefficient extraction for the
//!   sub-exponential-growth family.
//! - [`exact`]: the normalization constants `h_n` via the convolution
//!   recursion, exact distributions of the typical cycle length `L1`,
//!   the cycle counts `R_j`, the total cycle number `K`, and factorial
//!   moments. Everything is accumulated in log space.
//! - [`saddle`]: numeric saddle-point machinery — the series
//!   `I_mu(r) = sum n^mu theta_n r^n`, saddle equation solving, and the
//!   asymptotic approximations of `h_n` and `theta_n` with ratio bounds.
//! - [`limits`]: the limiting laws of the cycle statistics per weight
//!   regime (Gamma, Beta, Poisson, GEM/Poisson-Dirichlet, concentration
//!   points) as evaluable predictions.
//! - [`montecarlo`]: exact sequential sampling of cycle types and
//!   reproducible batch statistics driven by counter-based streams.
//! - [`gof`]: Kolmogorov-Smirnov and total-variation distances used to
//!   compare exact, sampled, and limiting distributions.

pub mod exact;
pub mod gof;
pub mod limits;
pub mod logsum;
pub mod montecarlo;
pub mod rng;
pub mod saddle;
pub mod special;
pub mod weights;

pub use exact::{compute_norms, CycleType, ExactError, NormTable, Pmf};
pub use limits::{LawKind, LimitLaw, LimitsError, Statistic};
pub use montecarlo::{run_batch, sample_cycle_type, BatchStats, SampleRecord};
pub use rng::CounterRng;
pub use saddle::{GenFnSpec, SaddleError, SaddleSolution};
pub use weights::{build_weights, FamilyKind, FamilyParams, WeightError, WeightTable};

/// Default cap on table sizes; the `h_n` recursion is O(N^2).
pub const DEFAULT_MAX_N: usize = 20_000;
