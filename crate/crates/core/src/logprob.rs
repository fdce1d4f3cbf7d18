//! Natural-log-domain probabilities.
//!
//! Binomial coefficients overflow `f64` near `n ≈ 1030`, and the optimal
//! sources studied here need `n` in the millions, so every probability is
//! carried as its logarithm. `-∞` is the exact-zero sentinel.

use std::fmt;
use std::ops::Mul;

use statrs::function::factorial::ln_factorial;

#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    /// Wraps a log value. Values slightly above zero (rounding) are allowed;
    /// NaN is not.
    pub fn from_ln(value: f64) -> Self {
        debug_assert!(!value.is_nan(), "NaN log-probability");
        LogProb(value)
    }

    pub fn from_prob(p: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
        if p == 0.0 {
            Self::ZERO
        } else {
            LogProb(p.ln())
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    /// `ln(exp(self) + exp(other))`, symmetric in its arguments.
    pub fn ln_add(self, other: LogProb) -> LogProb {
        let (hi, lo) = if self.0 >= other.0 {
            (self.0, other.0)
        } else {
            (other.0, self.0)
        };
        if hi == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogProb(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogProb {
    type Output = LogProb;

    fn mul(self, rhs: LogProb) -> LogProb {
        if self.is_zero() || rhs.is_zero() {
            Self::ZERO
        } else {
            LogProb(self.0 + rhs.0)
        }
    }
}

impl fmt::Debug for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogProb(ln = {}, p = {})", self.0, self.prob())
    }
}

/// Below this, `ln C(n, m)` is summed term by term; above, it goes through
/// log-factorials (exact table for small arguments, log-gamma otherwise).
const DIRECT_SUM_LIMIT: u64 = 64;

/// `ln C(n, k)`. Bit-identical for `k` and `n - k`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_choose({n}, {k})");
    let m = k.min(n - k);
    if m == 0 {
        return 0.0;
    }
    if m <= DIRECT_SUM_LIMIT {
        let base = n - m;
        (1..=m).map(|j| ((base + j) as f64 / j as f64).ln()).sum()
    } else {
        ln_factorial(n) - (ln_factorial(m) + ln_factorial(n - m))
    }
}

/// `exponent · ln_base` with `0 · ln 0 = 0`.
pub(crate) fn ln_pow(ln_base: f64, exponent: u64) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        exponent as f64 * ln_base
    }
}
