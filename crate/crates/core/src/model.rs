//! Domain types and the closed-form outcome probabilities.
//!
//! With every pair in `a|00⟩ + b|11⟩`, the heralding party sees outcome `k`
//! (k ones among its `n` qubits) with probability
//! `C(n, k) · A^(n-k) · (1 - A)^k`, where `A = |a|²`. Outcomes `k` and `n - k`
//! herald Dicke states related by a global bit flip, so they are merged into
//! the canonical class `min(k, n - k)`; outcomes `0` and `n` leave a product
//! state and count as failures.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::logprob::{ln_choose, ln_pow, LogProb};

const NORM_TOL: f64 = 1e-12;

/// The tunable pair source `a|00⟩ + b|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceState {
    amp0: Complex64,
    amp1: Complex64,
}

impl SourceState {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return domain(format!("source is not normalized: |a|² + |b|² = {norm}"));
        }
        Ok(Self { amp0, amp1 })
    }

    /// Real, non-negative amplitudes `(√A, √(1 - A))`.
    pub fn from_weight(weight: f64) -> Result<Self> {
        Self::with_phases(weight, 0.0, 0.0)
    }

    pub fn with_phases(weight: f64, phase0: f64, phase1: f64) -> Result<Self> {
        check_weight(weight)?;
        let amp0 = Complex64::from_polar(weight.sqrt(), phase0);
        let amp1 = Complex64::from_polar((1.0 - weight).sqrt(), phase1);
        Self::new(amp0, amp1)
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    /// `A = |a|²`.
    pub fn weight(&self) -> f64 {
        self.amp0.norm_sqr().clamp(0.0, 1.0)
    }

    /// The mirror source with `|a| ⇄ |b|`.
    pub fn mirrored(&self) -> Self {
        Self {
            amp0: self.amp1,
            amp1: self.amp0,
        }
    }
}

/// Target Dicke class `(n, k)` in canonical form, `1 ≤ k ≤ ⌊n/2⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DickeSpec {
    n: usize,
    k: usize,
}

impl DickeSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("need at least 2 qubits, got n = {n}"));
        }
        if k == 0 || k > n / 2 {
            return domain(format!(
                "excitation count k = {k} outside canonical range 1..={} for n = {n}",
                n / 2
            ));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `k = n/2`: the class is its own bit-flip partner.
    pub fn is_self_conjugate(&self) -> bool {
        2 * self.k == self.n
    }
}

/// Outcome probabilities for one run, raw and LOCC-folded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    n: usize,
    raw: Vec<f64>,
    /// `folded[i]` is the class `k = i + 1`.
    folded: Vec<f64>,
    failure: f64,
}

impl OutcomeDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Indexed by the raw outcome `k ∈ 0..=n`.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    /// Probability of heralding the canonical class `k`, or `None` outside
    /// `1..=⌊n/2⌋`.
    pub fn folded(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.folded.get(i).copied())
    }

    /// `(k, P)` for every canonical class.
    pub fn folded_classes(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.folded.iter().enumerate().map(|(i, &p)| (i + 1, p))
    }

    /// Outcomes `0` and `n` combined.
    pub fn failure(&self) -> f64 {
        self.failure
    }

    pub fn success(&self) -> f64 {
        self.folded.iter().sum()
    }
}

pub(crate) fn check_weight(weight: f64) -> Result<()> {
    if (0.0..=1.0).contains(&weight) {
        Ok(())
    } else {
        domain(format!("source weight A = {weight} outside [0, 1]"))
    }
}

/// `(ln A, ln(1 - A))`, arranged so that swapping `A ↔ 1 - A` swaps the pair
/// exactly whenever `1 - A` is representable.
fn ln_weights(weight: f64) -> (f64, f64) {
    if weight < 0.5 {
        (weight.ln(), (-weight).ln_1p())
    } else if weight > 0.5 {
        let other = 1.0 - weight;
        ((-other).ln_1p(), other.ln())
    } else {
        (-std::f64::consts::LN_2, -std::f64::consts::LN_2)
    }
}

fn raw_log_unchecked(n: usize, k: usize, ln_a: f64, ln_b: f64) -> LogProb {
    let (n, k) = (n as u64, k as u64);
    let powers = ln_pow(ln_a, n - k) + ln_pow(ln_b, k);
    if powers == f64::NEG_INFINITY {
        return LogProb::ZERO;
    }
    LogProb::from_ln(ln_choose(n, k) + powers)
}

/// `ln P(outcome k)`; see [`raw_outcome_prob`].
pub fn raw_outcome_log(n: usize, k: usize, weight: f64) -> Result<LogProb> {
    check_weight(weight)?;
    if k > n {
        return domain(format!("outcome k = {k} exceeds n = {n}"));
    }
    let (ln_a, ln_b) = ln_weights(weight);
    Ok(raw_log_unchecked(n, k, ln_a, ln_b))
}

/// Probability that the heralding party detects `k` ones among `n` qubits:
/// `C(n, k) · A^(n-k) · (1 - A)^k`.
pub fn raw_outcome_prob(n: usize, k: usize, weight: f64) -> Result<f64> {
    raw_outcome_log(n, k, weight).map(LogProb::prob)
}

/// `ln P_n^(k)`; see [`folded_prob`].
pub fn folded_log(spec: DickeSpec, weight: f64) -> Result<LogProb> {
    check_weight(weight)?;
    let (ln_a, ln_b) = ln_weights(weight);
    let (n, k) = (spec.n, spec.k);
    let direct = raw_log_unchecked(n, k, ln_a, ln_b);
    if spec.is_self_conjugate() {
        Ok(direct)
    } else {
        Ok(direct.ln_add(raw_log_unchecked(n, n - k, ln_a, ln_b)))
    }
}

/// Probability of heralding the canonical Dicke class `spec`, after the
/// bit-flip correction of the `n - k` outcome.
pub fn folded_prob(spec: DickeSpec, weight: f64) -> Result<f64> {
    folded_log(spec, weight).map(LogProb::prob)
}

/// Probability that the run leaves a product state (outcomes `0` and `n`).
pub fn failure_prob(n: usize, weight: f64) -> Result<f64> {
    if n == 0 {
        return domain("n must be positive");
    }
    let all_zero = raw_outcome_log(n, 0, weight)?;
    let all_one = raw_outcome_log(n, n, weight)?;
    Ok(all_zero.ln_add(all_one).prob())
}

pub fn distribution(n: usize, weight: f64) -> Result<OutcomeDistribution> {
    if n < 2 {
        return domain(format!("need at least 2 qubits, got n = {n}"));
    }
    check_weight(weight)?;
    let (ln_a, ln_b) = ln_weights(weight);
    let raw: Vec<f64> = (0..=n)
        .map(|k| raw_log_unchecked(n, k, ln_a, ln_b).prob())
        .collect();
    let folded = (1..=n / 2)
        .map(|k| {
            if 2 * k == n {
                raw[k]
            } else {
                raw[k] + raw[n - k]
            }
        })
        .collect();
    let failure = raw[0] + raw[n];
    Ok(OutcomeDistribution {
        n,
        raw,
        folded,
        failure,
    })
}
