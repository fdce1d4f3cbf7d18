//! Optimal source weight for a target Dicke class.
//!
//! `P_n^(k)(A)` is symmetric about `A = 1/2`, where its curvature is
//! proportional to `(n - 2k)² - n`. Below the threshold
//! `η_c = 2k + 1/2 + √(2k + 1/4)` the maximally entangled source is optimal;
//! above it the maximum splits into a mirror pair `(Ã, 1 - Ã)` with
//! `Ã → k/n`, and the optimal probability tends to `k^k e^{-k} / k!`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::error::{domain, Error, Result};
use crate::model::{folded_log, folded_prob, DickeSpec, SourceState};
use crate::search::{bisect_descending, central_differences, golden_section_max};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    /// `n = η_c` exactly: the maximum at `A = 1/2` is flat to second order.
    Critical,
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalThreshold {
    pub k: usize,
    pub eta_c: f64,
    pub n_c: usize,
    /// Whether `η_c` is an integer (`8k + 1` a perfect square).
    pub integral: bool,
}

impl CriticalThreshold {
    /// Classifies `n` with exact integer arithmetic: with `m = n - 2k`,
    /// `n > η_c ⇔ m(m - 1) > 2k`.
    pub fn regime(&self, n: usize) -> Regime {
        let m = n.saturating_sub(2 * self.k) as u128;
        let lhs = m * m.saturating_sub(1);
        let rhs = 2 * self.k as u128;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => Regime::Supercritical,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Less => Regime::Subcritical,
        }
    }
}

fn isqrt(v: u128) -> u128 {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

pub fn critical_threshold(k: usize) -> Result<CriticalThreshold> {
    if k < 1 {
        return domain("critical threshold needs k ≥ 1");
    }
    let disc = 8 * k as u128 + 1;
    let root = isqrt(disc);
    let integral = root * root == disc;
    let eta_c = if integral {
        ((4 * k as u128 + 1 + root) / 2) as f64
    } else {
        2.0 * k as f64 + 0.5 + (2.0 * k as f64 + 0.25).sqrt()
    };
    // Smallest m ≥ 1 with m(m - 1) ≥ 2k, i.e. n_c = ⌈η_c⌉.
    let two_k = 2 * k as u128;
    let mut m = root.div_ceil(2);
    while m * (m - 1) < two_k {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 2) >= two_k {
        m -= 1;
    }
    Ok(CriticalThreshold {
        k,
        eta_c,
        n_c: 2 * k + m as usize,
        integral,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Branch {
    /// Optimal `A = |a|²`.
    pub weight: f64,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationPoint {
    pub n: usize,
    pub k: usize,
    pub regime: Regime,
    /// Lower branch (`A ≤ 1/2`) first; supercritical points carry its mirror.
    pub branches: Vec<Branch>,
}

impl BifurcationPoint {
    pub fn lower(&self) -> Branch {
        self.branches[0]
    }

    pub fn p_opt(&self) -> f64 {
        self.branches[0].prob
    }
}

/// `ln P(1/2 + x) - ln P(1/2)`, evaluated through `ln(1 ± 2x)` so that the
/// constant `-n ln 2` never enters the differences.
fn ln_ratio_to_balanced(spec: DickeSpec, x: f64) -> f64 {
    let (n, k) = (spec.n() as f64, spec.k() as f64);
    let u = 2.0 * x;
    let (up, down) = (u.ln_1p(), (-u).ln_1p());
    if spec.is_self_conjugate() {
        return k * (up + down);
    }
    let g_plus = (n - k) * up + k * down;
    let g_minus = k * up + (n - k) * down;
    let (hi, lo) = if g_plus >= g_minus {
        (g_plus, g_minus)
    } else {
        (g_minus, g_plus)
    };
    hi + (lo - hi).exp().ln_1p() - std::f64::consts::LN_2
}

/// Finite-difference curvature of `ln P_n^(k)` at `A = 1/2`. Its sign matches
/// `(n - 2k)² - n`.
pub fn balanced_curvature(spec: DickeSpec) -> f64 {
    let m = (spec.n() - 2 * spec.k()) as f64;
    let h = 1e-4 / (1.0 + m);
    central_differences(|x| ln_ratio_to_balanced(spec, x), 0.0, h).1
}

fn cross_check_regime(spec: DickeSpec, regime: Regime) -> Result<()> {
    let curvature = balanced_curvature(spec);
    let agrees = match regime {
        Regime::Subcritical => curvature < 0.0,
        Regime::Supercritical => curvature > 0.0,
        // Non-critical curvatures are at least 4 in magnitude.
        Regime::Critical => curvature.abs() < 1.0,
    };
    if agrees {
        Ok(())
    } else {
        Err(Error::RegimeMismatch {
            n: spec.n(),
            k: spec.k(),
            regime: regime.to_string(),
            curvature,
        })
    }
}

/// Positive exactly where `dP/dA > 0` on `(0, 1/2)`.
///
/// `dP/dA = [t₁((n-k) - nA) + t₂(k - nA)] / (A(1-A))` with
/// `t₁ = A^(n-k)(1-A)^k`, `t₂ = A^k(1-A)^(n-k)`; dividing by `t₂` leaves
/// `r((n-k) - nA) + (k - nA)` with `r = (A/(1-A))^(n-2k)`.
fn slope_sign(spec: DickeSpec, a: f64) -> f64 {
    let (n, k) = (spec.n() as f64, spec.k() as f64);
    let ln_r = (n - 2.0 * k) * (a.ln() - (-a).ln_1p());
    ln_r.exp() * ((n - k) - n * a) + (k - n * a)
}

const EDGE: f64 = 1e-15;

fn lower_maximum(spec: DickeSpec) -> f64 {
    let objective = |a: f64| {
        folded_log(spec, a)
            .map(|p| p.ln())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let golden = golden_section_max(objective, EDGE, 0.5 - EDGE, 400);

    // Widen the golden bracket until the slope changes sign across it, then
    // bisect on the slope to full precision.
    let slope = |a: f64| slope_sign(spec, a);
    let centre = golden.best;
    let mut width = (golden.hi - golden.lo).max(centre * 1e-12);
    for _ in 0..200 {
        let lo = (centre - width).max(EDGE);
        let hi = (centre + width).min(0.5 - EDGE);
        if slope(lo) > 0.0 && slope(hi) < 0.0 {
            return bisect_descending(slope, lo, hi);
        }
        if lo == EDGE && hi == 0.5 - EDGE {
            break;
        }
        width *= 4.0;
    }
    centre
}

pub fn optimize_source(spec: DickeSpec) -> Result<BifurcationPoint> {
    let threshold = critical_threshold(spec.k())?;
    let regime = threshold.regime(spec.n());
    cross_check_regime(spec, regime)?;
    let branches = match regime {
        Regime::Subcritical | Regime::Critical => vec![Branch {
            weight: 0.5,
            prob: folded_prob(spec, 0.5)?,
        }],
        Regime::Supercritical => {
            let lower = lower_maximum(spec);
            let upper = 1.0 - lower;
            vec![
                Branch {
                    weight: lower,
                    prob: folded_prob(spec, lower)?,
                },
                Branch {
                    weight: upper,
                    prob: folded_prob(spec, upper)?,
                },
            ]
        }
    };
    Ok(BifurcationPoint {
        n: spec.n(),
        k: spec.k(),
        regime,
        branches,
    })
}

/// One [`BifurcationPoint`] per `n` in `n_min..=n_max`, ordered by `n`.
pub fn bifurcation_diagram(k: usize, n_min: usize, n_max: usize) -> Result<Vec<BifurcationPoint>> {
    if k < 1 {
        return domain("bifurcation diagram needs k ≥ 1");
    }
    if n_min < 2 * k {
        return domain(format!("n_min = {n_min} is below 2k = {}", 2 * k));
    }
    if n_min > n_max {
        return domain(format!("empty range {n_min}..={n_max}"));
    }
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| optimize_source(DickeSpec::new(n, k)?))
        .collect()
}

/// Large-`n` optimum `k^k e^{-k} / k!`.
pub fn asymptotic_prob(k: usize) -> Result<f64> {
    if k < 1 {
        return domain("asymptotic probability needs k ≥ 1");
    }
    let kf = k as f64;
    Ok((kf * kf.ln() - kf - ln_factorial(k as u64)).exp())
}

/// First-order large-`n` optimum `P̃_∞ (1 + k / 2n)`.
pub fn asymptotic_expansion(spec: DickeSpec) -> f64 {
    let k = spec.k() as f64;
    let limit = asymptotic_prob(spec.k()).expect("canonical spec has k ≥ 1");
    limit * (1.0 + k / (2.0 * spec.n() as f64))
}

/// Lower-branch asymptotic optimal source, `A = k/n`.
pub fn asymptotic_source(spec: DickeSpec) -> Result<SourceState> {
    if spec.n() <= spec.k() {
        return domain(format!(
            "asymptotic source needs n > k, got n = {}",
            spec.n()
        ));
    }
    SourceState::from_weight(spec.k() as f64 / spec.n() as f64)
}
