//! Entanglement between one qubit and the rest of the system.
//!
//! Every global state here is pure, so a single-qubit cut is fully described
//! by the qubit's reduced density matrix: its base-2 entropy (ebits) or
//! `4 det ρ` (the 2-tangle). For a Dicke state `|D_n^(k)⟩` that matrix is
//! `diag(1 - k/n, k/n)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::density::QubitDensity;
use crate::error::{domain, Error, Result};
use crate::model::{DickeSpec, SourceState};
use crate::optimizer::{asymptotic_expansion, optimize_source, BifurcationPoint, Regime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BipartiteMeasure {
    VonNeumannEntropy,
    TwoTangle,
}

impl BipartiteMeasure {
    pub const ALL: [BipartiteMeasure; 2] = [Self::VonNeumannEntropy, Self::TwoTangle];

    pub fn of_density(self, rho: &QubitDensity) -> f64 {
        match self {
            Self::VonNeumannEntropy => rho.entropy(),
            Self::TwoTangle => rho.tangle(),
        }
    }

    /// Value for a qubit whose reduced matrix is `diag(1 - p, p)`.
    pub fn of_population(self, p: f64) -> f64 {
        match self {
            Self::VonNeumannEntropy => binary_entropy(p),
            Self::TwoTangle => 4.0 * p * (1.0 - p),
        }
    }
}

impl fmt::Display for BipartiteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::VonNeumannEntropy => "entropy",
            Self::TwoTangle => "tangle",
        })
    }
}

impl FromStr for BipartiteMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(Self::VonNeumannEntropy),
            "tangle" => Ok(Self::TwoTangle),
            other => domain(format!(
                "unknown measure {other:?} (expected entropy or tangle)"
            )),
        }
    }
}

/// `H₂(p)` in bits, with `H₂(0) = H₂(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.ln() + (1.0 - p) * (-p).ln_1p()) / std::f64::consts::LN_2
}

pub fn source_entanglement(source: &SourceState, kind: BipartiteMeasure) -> f64 {
    kind.of_population(source.weight())
}

pub fn dicke_single_qubit_density(spec: DickeSpec) -> QubitDensity {
    let p = spec.k() as f64 / spec.n() as f64;
    QubitDensity::diagonal(1.0 - p, p)
}

pub fn dicke_single_qubit_entanglement(spec: DickeSpec, kind: BipartiteMeasure) -> f64 {
    kind.of_population(spec.k() as f64 / spec.n() as f64)
}

/// One GHZ qubit against the rest: always one ebit.
pub fn ghz_single_qubit_entanglement(n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("GHZ state needs n ≥ 2, got {n}"));
    }
    Ok(QubitDensity::diagonal(0.5, 0.5).entropy())
}

/// Both sides of `E(source) > P_opt · E(one Dicke qubit | rest)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoccReport {
    pub n: usize,
    pub k: usize,
    pub measure: BipartiteMeasure,
    pub source_weight: f64,
    pub p_opt: f64,
    pub lhs: f64,
    pub dicke_e: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the inequality at an optimizer result, whatever its regime.
pub fn locc_report(point: &BifurcationPoint, kind: BipartiteMeasure) -> Result<LoccReport> {
    let spec = DickeSpec::new(point.n, point.k)?;
    let best = point.lower();
    let lhs = kind.of_population(best.weight);
    let dicke_e = dicke_single_qubit_entanglement(spec, kind);
    let rhs = best.prob * dicke_e;
    Ok(LoccReport {
        n: point.n,
        k: point.k,
        measure: kind,
        source_weight: best.weight,
        p_opt: best.prob,
        lhs,
        dicke_e,
        rhs,
        holds: lhs > rhs,
    })
}

fn require_supercritical(point: &BifurcationPoint) -> Result<()> {
    if point.regime == Regime::Supercritical {
        Ok(())
    } else {
        domain(format!(
            "n = {} is not above the critical threshold for k = {} ({})",
            point.n, point.k, point.regime
        ))
    }
}

/// The LOCC inequality at the optimal (non-maximally entangled) source.
pub fn check_locc_bound(spec: DickeSpec, kind: BipartiteMeasure) -> Result<LoccReport> {
    let point = optimize_source(spec)?;
    require_supercritical(&point)?;
    locc_report(&point, kind)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangleBound {
    /// `4k / (P̃_n · n)` with `P̃_n` from the first-order expansion.
    pub bound: f64,
    /// `4 (k/n)(1 - k/n)`.
    pub actual: f64,
}

impl TangleBound {
    pub fn holds(&self) -> bool {
        self.actual < self.bound
    }
}

/// `4k / (P̃_n · n)` and the actual Dicke-qubit tangle, without a regime check.
pub fn tangle_bound_values(spec: DickeSpec) -> TangleBound {
    let (n, k) = (spec.n() as f64, spec.k() as f64);
    TangleBound {
        bound: 4.0 * k / (asymptotic_expansion(spec) * n),
        actual: dicke_single_qubit_entanglement(spec, BipartiteMeasure::TwoTangle),
    }
}

pub fn tangle_decay_bound(spec: DickeSpec) -> Result<TangleBound> {
    let threshold = crate::optimizer::critical_threshold(spec.k())?;
    if threshold.regime(spec.n()) != Regime::Supercritical {
        return domain(format!(
            "tangle bound needs n > η_c = {} for k = {}, got n = {}",
            threshold.eta_c,
            spec.k(),
            spec.n()
        ));
    }
    Ok(tangle_bound_values(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_complex::Complex64;

    fn spec(n: usize, k: usize) -> DickeSpec {
        DickeSpec::new(n, k).unwrap()
    }

    #[test]
    fn source_measures() {
        let epr = SourceState::from_weight(0.5).unwrap();
        assert_eq!(
            source_entanglement(&epr, BipartiteMeasure::VonNeumannEntropy),
            1.0
        );
        let product = SourceState::from_weight(0.0).unwrap();
        assert_eq!(
            source_entanglement(&product, BipartiteMeasure::TwoTangle),
            0.0
        );
        let s = SourceState::from_weight(0.3).unwrap();
        let tangle = source_entanglement(&s, BipartiteMeasure::TwoTangle);
        assert!((tangle - 0.84).abs() < 1e-15);
        // Partial trace of the two-qubit pure state a|00⟩ + b|11⟩.
        let amps = [
            s.amp0(),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            s.amp1(),
        ];
        let rho = oracle::reduced_qubit(&amps, 2, 0).unwrap();
        assert!((4.0 * rho.det() - tangle).abs() < 1e-15);
    }

    #[test]
    fn dicke_qubit_measures() {
        assert_eq!(
            dicke_single_qubit_entanglement(spec(2, 1), BipartiteMeasure::VonNeumannEntropy),
            1.0
        );
        let w = dicke_single_qubit_entanglement(spec(3, 1), BipartiteMeasure::TwoTangle);
        assert!((w - 8.0 / 9.0).abs() < 1e-15);
        assert!((4.0 * QubitDensity::diagonal(2.0 / 3.0, 1.0 / 3.0).det() - w).abs() < 1e-15);
        for kind in BipartiteMeasure::ALL {
            assert!(dicke_single_qubit_entanglement(spec(10_000_000, 2), kind) < 1e-5);
        }
    }

    #[test]
    fn ghz_is_one_ebit() {
        assert_eq!(ghz_single_qubit_entanglement(2).unwrap(), 1.0);
        assert_eq!(ghz_single_qubit_entanglement(10).unwrap(), 1.0);
        assert!(ghz_single_qubit_entanglement(1).is_err());
        let ghz = oracle::ghz_state(3).unwrap();
        let rho = oracle::reduced_qubit(&ghz, 3, 1).unwrap();
        assert!((rho.entropy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn locc_bound_examples() {
        let r = check_locc_bound(spec(20, 1), BipartiteMeasure::TwoTangle).unwrap();
        assert!(r.holds);
        assert!(((r.lhs / r.rhs) * r.p_opt - 1.0).abs() < 1e-6);
        assert!(
            check_locc_bound(spec(5, 1), BipartiteMeasure::TwoTangle)
                .unwrap()
                .holds
        );
        assert!(check_locc_bound(spec(3, 1), BipartiteMeasure::TwoTangle).is_err());
        assert!(check_locc_bound(spec(4, 1), BipartiteMeasure::VonNeumannEntropy).is_err());
    }

    #[test]
    fn locc_ratio_tends_to_e() {
        let r = check_locc_bound(spec(1_000_000, 1), BipartiteMeasure::TwoTangle).unwrap();
        assert!((r.lhs / r.rhs - std::f64::consts::E).abs() < 1e-4);
    }

    #[test]
    fn tangle_bound_examples() {
        let t = tangle_decay_bound(spec(100, 1)).unwrap();
        assert!((t.actual - 0.0396).abs() < 1e-15);
        assert!((t.bound - 0.108_19).abs() < 1e-4, "{}", t.bound);
        assert!(t.holds());
        assert!(tangle_decay_bound(spec(30, 3)).unwrap().holds());
        assert!(tangle_decay_bound(spec(4, 1)).is_err());
        let big = tangle_decay_bound(spec(10_000_000, 2)).unwrap();
        assert!((big.actual * 1e7 - 8.0).abs() < 1e-4);
    }

    #[test]
    fn measure_names_round_trip() {
        for kind in BipartiteMeasure::ALL {
            assert_eq!(kind.to_string().parse::<BipartiteMeasure>().unwrap(), kind);
        }
        assert!("concurrence".parse::<BipartiteMeasure>().is_err());
    }

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_eq!(binary_entropy(0.5), 1.0);
        assert!((binary_entropy(0.11) - binary_entropy(0.89)).abs() < 1e-15);
    }
}
