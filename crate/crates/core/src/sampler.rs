//! Seeded Monte Carlo runs of the heralding protocol.
//!
//! Each run consumes `n` pairs and draws one Fock outcome from the closed-form
//! distribution by inverse CDF. The uniform for run `i` is the `i`-th `u64` of
//! a ChaCha8 stream keyed by the seed, so any range of runs can be generated
//! independently and the merged result does not depend on how the work was
//! split.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Result};
use crate::model::{check_weight, distribution};

const CHUNK_RUNS: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldedOutcome {
    Dicke(usize),
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RunRecord {
    pub run_index: u64,
    pub raw_outcome_k: usize,
    pub folded: FoldedOutcome,
    pub bitflip_applied: bool,
}

/// Canonical class of a raw outcome and whether the B-group flips every qubit
/// to reach it. Failures are discarded without correction.
pub fn classify(n: usize, raw_k: usize) -> (FoldedOutcome, bool) {
    if raw_k == 0 || raw_k >= n {
        return (FoldedOutcome::Failure, false);
    }
    let flip = raw_k > n - raw_k;
    (FoldedOutcome::Dicke(raw_k.min(n - raw_k)), flip)
}

fn inverse_cdf(cdf: &[f64], last_possible: usize, u: f64) -> usize {
    cdf.iter()
        .position(|&c| u < c)
        .unwrap_or(last_possible)
        .min(last_possible)
}

pub fn sample_runs(n: usize, weight: f64, runs: u64, seed: u64) -> Result<Vec<RunRecord>> {
    if runs == 0 {
        return domain("need at least one run");
    }
    check_weight(weight)?;
    let dist = distribution(n, weight)?;
    let cdf: Vec<f64> = dist
        .raw()
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let last_possible = dist.raw().iter().rposition(|&p| p > 0.0).unwrap_or(0);

    let chunks = runs.div_ceil(CHUNK_RUNS);
    let parts: Vec<Vec<RunRecord>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK_RUNS;
            let end = (start + CHUNK_RUNS).min(runs);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(2 * u128::from(start));
            (start..end)
                .map(|run_index| {
                    let u: f64 = rng.random();
                    let raw_outcome_k = inverse_cdf(&cdf, last_possible, u);
                    let (folded, bitflip_applied) = classify(n, raw_outcome_k);
                    RunRecord {
                        run_index,
                        raw_outcome_k,
                        folded,
                        bitflip_applied,
                    }
                })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YieldReport {
    pub n: usize,
    pub runs: u64,
    pub pairs_consumed: u64,
    /// Counts per raw outcome `0..=n`.
    pub raw_counts: Vec<u64>,
    /// Heralded Dicke states per canonical class `1..=⌊n/2⌋`.
    pub dicke_produced: BTreeMap<usize, u64>,
    pub failures: u64,
    pub bitflips: u64,
    pub empirical_probs: BTreeMap<usize, f64>,
    pub failure_freq: f64,
    /// `f64::INFINITY` when no run succeeded.
    pub pairs_per_dicke: f64,
}

impl YieldReport {
    pub fn dicke_total(&self) -> u64 {
        self.dicke_produced.values().sum()
    }
}

pub fn yield_report(records: &[RunRecord], n: usize) -> Result<YieldReport> {
    if records.is_empty() {
        return domain("yield report needs at least one run");
    }
    if n < 2 {
        return domain(format!("need at least 2 qubits, got n = {n}"));
    }
    let mut raw_counts = vec![0u64; n + 1];
    let mut dicke_produced: BTreeMap<usize, u64> = (1..=n / 2).map(|k| (k, 0)).collect();
    let (mut failures, mut bitflips) = (0u64, 0u64);
    for r in records {
        if r.raw_outcome_k > n {
            return domain(format!(
                "record {} has outcome {} > n = {n}",
                r.run_index, r.raw_outcome_k
            ));
        }
        raw_counts[r.raw_outcome_k] += 1;
        bitflips += u64::from(r.bitflip_applied);
        match r.folded {
            FoldedOutcome::Dicke(k) => match dicke_produced.get_mut(&k) {
                Some(c) => *c += 1,
                None => {
                    return domain(format!(
                        "record {} has non-canonical class {k}",
                        r.run_index
                    ))
                }
            },
            FoldedOutcome::Failure => failures += 1,
        }
    }
    let runs = records.len() as u64;
    let pairs_consumed = runs * n as u64;
    let total: u64 = dicke_produced.values().sum();
    let empirical_probs = dicke_produced
        .iter()
        .map(|(&k, &c)| (k, c as f64 / runs as f64))
        .collect();
    let pairs_per_dicke = if total == 0 {
        f64::INFINITY
    } else {
        pairs_consumed as f64 / total as f64
    };
    Ok(YieldReport {
        n,
        runs,
        pairs_consumed,
        raw_counts,
        dicke_produced,
        failures,
        bitflips,
        empirical_probs,
        failure_freq: failures as f64 / runs as f64,
        pairs_per_dicke,
    })
}

/// `(count - runs·p) / √(runs·p(1 - p))`; zero-variance cells give `0` when
/// the count is exact and `±∞` otherwise.
pub fn z_score(count: u64, runs: u64, p: f64) -> f64 {
    let expected = runs as f64 * p;
    let diff = count as f64 - expected;
    let variance = runs as f64 * p * (1.0 - p);
    if variance > 0.0 {
        diff / variance.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square of observed counts against outcome probabilities.
/// Zero-probability cells are left out (an observation there is an
/// automatic rejection).
pub fn chi_square(counts: &[u64], probs: &[f64]) -> Result<GoodnessOfFit> {
    if counts.len() != probs.len() {
        return domain("counts and probabilities differ in length");
    }
    let runs: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&c, &p) in counts.iter().zip(probs) {
        if p > 0.0 {
            let e = runs as f64 * p;
            statistic += (c as f64 - e).powi(2) / e;
            cells += 1;
        } else if c > 0 {
            return Ok(GoodnessOfFit {
                statistic: f64::INFINITY,
                dof: cells,
                p_value: 0.0,
            });
        }
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    Ok(GoodnessOfFit {
        statistic,
        dof,
        p_value,
    })
}
