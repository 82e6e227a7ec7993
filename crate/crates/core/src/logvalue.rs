//! Positive quantities carried as natural logarithms.

use crate::fmath;

/// A nonnegative real stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);

    pub fn from_ln(ln: f64) -> Self {
        LogValue(ln)
    }

    pub fn from_value(v: f64) -> Self {
        LogValue(fmath::ln(v))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        fmath::exp(self.0)
    }

    /// Relative difference `|a - b| / |b|` computed from the logs.
    pub fn rel_diff(self, reference: LogValue) -> f64 {
        fmath::abs(libm::expm1(self.0 - reference.0))
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl core::ops::Mul for LogValue {
    type Output = LogValue;

    fn mul(self, other: LogValue) -> LogValue {
        LogValue(self.0 + other.0)
    }
}

impl core::ops::Add for LogValue {
    type Output = LogValue;

    fn add(self, other: LogValue) -> LogValue {
        let mut acc = LogSumExp::new();
        acc.push(self.0);
        acc.push(other.0);
        acc.finish()
    }
}

/// Streaming log-sum-exp with Neumaier-compensated accumulation.
///
/// Terms are summed relative to the running maximum; when the maximum moves
/// the partial sum is rescaled.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn push(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            let scale = if self.max == f64::NEG_INFINITY {
                0.0
            } else {
                fmath::exp(self.max - ln_term)
            };
            self.sum *= scale;
            self.comp *= scale;
            self.max = ln_term;
        }
        let x = fmath::exp(ln_term - self.max);
        let t = self.sum + x;
        if fmath::abs(self.sum) >= fmath::abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn finish(&self) -> LogValue {
        if self.max == f64::NEG_INFINITY {
            return LogValue::ZERO;
        }
        LogValue(self.max + fmath::ln(self.sum) + fmath::ln_1p(self.comp / self.sum))
    }
}

impl core::iter::FromIterator<f64> for LogSumExp {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = LogSumExp::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}
