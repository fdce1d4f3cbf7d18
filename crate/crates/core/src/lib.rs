//! Heralded Dicke-state generation from tunable bipartite entangled pairs.
//!
//! `n` identical sources each emit `a|00⟩ + b|11⟩`. One qubit of every pair is
//! collected by a single party, made indistinguishable and measured in the
//! photon-number basis; the outcome `k` heralds an ideal `n`-qubit Dicke state
//! with `k` excitations on the remaining qubits.
//!
//! - [`model`]: closed-form outcome probabilities (log domain, any `n`).
//! - [`oracle`]: brute-force statevector simulation for small `n`.
//! - [`optimizer`]: optimal source weight, critical thresholds, asymptotics.
//! - [`entanglement`]: single-qubit-vs-rest entanglement and the LOCC bound.
//! - [`sampler`]: seeded Monte Carlo runs and yield accounting.

pub mod density;
pub mod entanglement;
pub mod error;
pub mod logprob;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod sampler;
pub mod search;

pub use error::{Error, Result};
pub use logprob::LogProb;
pub use model::{DickeSpec, OutcomeDistribution, SourceState};
