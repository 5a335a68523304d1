//! Streaming log-sum-exp accumulation.
//!
//! The normalization constants span `exp(±1e6)` and beyond across weight
//! regimes, so every sum of positive terms is carried out on logarithms.
//! `-inf` encodes an exact zero and is skipped.

/// Streaming accumulator for `ln(sum_i exp(t_i))`.
///
/// Keeps a running maximum `m` and the partial sum rescaled by `exp(-m)`,
/// so each added term costs one `exp`. Terms equal to `-inf` are ignored.
#[derive(Debug, Clone, Copy)]
pub struct LogSumAcc {
    max: f64,
    sum: f64,
}

impl LogSumAcc {
    #[inline]
    pub fn new() -> Self {
        LogSumAcc {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, t: f64) {
        if t == f64::NEG_INFINITY {
            return;
        }
        if t <= self.max {
            self.sum += (t - self.max).exp();
        } else {
            // New running maximum; rescale the partial sum.
            self.sum = self.sum * (self.max - t).exp() + 1.0;
            self.max = t;
        }
    }

    /// `ln(sum exp(t_i))`, or `-inf` if nothing finite was added.
    #[inline]
    pub fn value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

impl Default for LogSumAcc {
    fn default() -> Self {
        Self::new()
    }
}

/// `ln(sum exp(t_i))` over a slice.
pub fn logsumexp(terms: &[f64]) -> f64 {
    let mut acc = LogSumAcc::new();
    for &t in terms {
        acc.add(t);
    }
    acc.value()
}

/// Kahan-compensated sum of signed linear-space terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}
