//! Exact statevector simulation of the heralding protocol for small `n`.
//!
//! Because the heralding party's register is a copy of the B-group register,
//! the global state is stored as `2^n` amplitudes indexed by the B-group
//! bitstring. Site 0 is the most significant bit. Nothing here uses the
//! closed-form binomials or powers of [`crate::model`]: amplitudes come from an
//! explicit tensor product, weights from bit counting, and Dicke references
//! from enumeration.

use num_complex::Complex64;

use crate::density::QubitDensity;
use crate::error::{domain, Error, Result};
use crate::model::SourceState;

/// Largest register the oracle will allocate (2^20 amplitudes).
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatedState {
    n: usize,
    amps: Vec<Complex64>,
}

impl CorrelatedState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The B-group state left behind by Fock outcome `outcome_k`, renormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalState {
    n: usize,
    outcome_k: usize,
    probability: f64,
    amps: Vec<Complex64>,
}

impl ConditionalState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcome_k(&self) -> usize {
        self.outcome_k
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Applies `σ_x` to every qubit: amplitude `j` moves to `!j`.
    pub fn flip_all(&self) -> ConditionalState {
        let mask = (1usize << self.n) - 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (j, &amp) in self.amps.iter().enumerate() {
            amps[j ^ mask] = amp;
        }
        ConditionalState {
            n: self.n,
            outcome_k: self.n - self.outcome_k,
            probability: self.probability,
            amps,
        }
    }
}

/// One Fock outcome. `state` is `None` when the outcome has zero probability.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBranch {
    pub outcome_k: usize,
    pub probability: f64,
    pub state: Option<ConditionalState>,
}

fn check_register(n: usize) -> Result<()> {
    if n < 2 {
        return domain(format!("need at least 2 qubits, got n = {n}"));
    }
    if n > MAX_QUBITS {
        return Err(Error::Capacity { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// `|φ⟩^{⊗n}` built factor by factor.
pub fn build_state(source: &SourceState, n: usize) -> Result<CorrelatedState> {
    check_register(n)?;
    let (a, b) = (source.amp0(), source.amp1());
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..n {
        amps = amps.iter().flat_map(|&x| [x * a, x * b]).collect();
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    Ok(CorrelatedState { n, amps })
}

/// Photon-number measurement on the coalesced register: the outcome is the
/// Hamming weight of the correlated index.
pub fn measure_fock(state: &CorrelatedState) -> Vec<FockBranch> {
    let n = state.n;
    let mut mass = vec![0.0f64; n + 1];
    for (j, amp) in state.amps.iter().enumerate() {
        mass[j.count_ones() as usize] += amp.norm_sqr();
    }
    mass.iter()
        .enumerate()
        .map(|(k, &p)| {
            let conditional = (p > 0.0).then(|| {
                let scale = p.sqrt().recip();
                let amps = state
                    .amps
                    .iter()
                    .enumerate()
                    .map(|(j, &amp)| {
                        if j.count_ones() as usize == k {
                            amp * scale
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                ConditionalState {
                    n,
                    outcome_k: k,
                    probability: p,
                    amps,
                }
            });
            FockBranch {
                outcome_k: k,
                probability: p,
                state: conditional,
            }
        })
        .collect()
}

pub fn outcome_probabilities(state: &CorrelatedState) -> Vec<f64> {
    measure_fock(state)
        .into_iter()
        .map(|b| b.probability)
        .collect()
}

/// `|D_n^(k)⟩` by enumerating the weight-`k` bitstrings.
pub fn dicke_state(n: usize, k: usize) -> Result<Vec<Complex64>> {
    check_register(n)?;
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    let dim = 1usize << n;
    let count = (0..dim).filter(|j| j.count_ones() as usize == k).count();
    let amp = Complex64::new((count as f64).sqrt().recip(), 0.0);
    Ok((0..dim)
        .map(|j| {
            if j.count_ones() as usize == k {
                amp
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<Vec<Complex64>> {
    check_register(n)?;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = amps[0];
    Ok(amps)
}

/// `|⟨u|v⟩|²`.
pub fn fidelity(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

pub fn dicke_fidelity(cond: &ConditionalState) -> Result<f64> {
    let (n, k) = (cond.n, cond.outcome_k);
    if k == 0 || k >= n {
        return domain(format!("outcome k = {k} of n = {n} leaves a product state"));
    }
    let reference = dicke_state(n, k)?;
    Ok(fidelity(&reference, &cond.amps))
}

/// Bit-flips the `n - k` branch onto the canonical class `min(k, n - k)`;
/// canonical branches are returned unchanged.
pub fn locc_fold(cond: &ConditionalState) -> ConditionalState {
    if cond.outcome_k > cond.n - cond.outcome_k {
        cond.flip_all()
    } else {
        cond.clone()
    }
}

pub fn reduced_single_qubit(cond: &ConditionalState, site: usize) -> Result<QubitDensity> {
    reduced_qubit(&cond.amps, cond.n, site)
}

/// Partial trace of a pure `n`-qubit state over every qubit but `site`.
pub fn reduced_qubit(amps: &[Complex64], n: usize, site: usize) -> Result<QubitDensity> {
    if amps.len() != 1usize << n {
        return domain(format!("{} amplitudes do not form {n} qubits", amps.len()));
    }
    if site >= n {
        return domain(format!("site {site} outside register of {n} qubits"));
    }
    let bit = 1usize << (n - 1 - site);
    let zero = Complex64::new(0.0, 0.0);
    let (mut r00, mut r11, mut r01) = (0.0f64, 0.0f64, zero);
    for j in (0..amps.len()).filter(|j| j & bit == 0) {
        let (lo, hi) = (amps[j], amps[j | bit]);
        r00 += lo.norm_sqr();
        r11 += hi.norm_sqr();
        r01 += lo * hi.conj();
    }
    Ok(QubitDensity::new([
        [Complex64::new(r00, 0.0), r01],
        [r01.conj(), Complex64::new(r11, 0.0)],
    ]))
}
