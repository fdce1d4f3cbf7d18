//! One function per subcommand, each turning validated flags into an envelope.

use dicke_lift::entanglement::{locc_report, tangle_bound_values, BipartiteMeasure};
use dicke_lift::optimizer::{asymptotic_expansion, bifurcation_diagram, optimize_source, Regime};
use dicke_lift::sampler::{chi_square, sample_runs, yield_report, z_score};
use dicke_lift::{model, DickeSpec};
use serde_json::{json, Map, Value};

use crate::envelope::{Cell, OutputEnvelope};
use crate::CliError;

type CmdResult = Result<OutputEnvelope, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SourceKind {
    Epr,
    Optimal,
}

impl SourceKind {
    fn name(self) -> &'static str {
        match self {
            SourceKind::Epr => "epr",
            SourceKind::Optimal => "optimal",
        }
    }
}

fn prob_row(spec: DickeSpec, weight: f64) -> Result<Vec<Cell>, CliError> {
    let (n, k) = (spec.n(), spec.k());
    Ok(vec![
        n.into(),
        k.into(),
        weight.into(),
        model::folded_prob(spec, weight)?.into(),
        model::raw_outcome_prob(n, k, weight)?.into(),
        model::raw_outcome_prob(n, n - k, weight)?.into(),
    ])
}

const PROB_COLUMNS: [&str; 6] = ["n", "k", "A", "P_folded", "P_raw_k", "P_raw_nk"];

pub fn prob(n: usize, k: usize, weight: f64) -> CmdResult {
    let spec = DickeSpec::new(n, k)?;
    let mut env = OutputEnvelope::new("prob", &PROB_COLUMNS)
        .param("n", n)
        .param("k", k)
        .param("A", weight);
    env.push(prob_row(spec, weight)?);
    Ok(env)
}

pub fn prob_sweep(n: usize, k: usize, start: f64, end: f64, steps: f64) -> CmdResult {
    let spec = DickeSpec::new(n, k)?;
    if !(steps >= 1.0 && steps.fract() == 0.0 && steps <= 1e8) {
        return Err(CliError::Usage(format!(
            "sweep steps must be a positive integer, got {steps}"
        )));
    }
    for a in [start, end] {
        if !(0.0..=1.0).contains(&a) {
            return Err(CliError::Usage(format!(
                "sweep bounds must lie in [0, 1], got {a}"
            )));
        }
    }
    let steps = steps as u64;
    let mut env = OutputEnvelope::new("prob", &PROB_COLUMNS)
        .param("n", n)
        .param("k", k)
        .param("A_start", start)
        .param("A_end", end)
        .param("steps", steps);
    for i in 0..=steps {
        let a = if i == steps {
            end
        } else {
            start + (end - start) * (i as f64 / steps as f64)
        };
        env.push(prob_row(spec, a)?);
    }
    Ok(env)
}

pub fn bifurcation(k: usize, n_min: usize, n_max: usize) -> CmdResult {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    if n_min < 2 * k || n_max < n_min {
        return Err(CliError::Usage(format!(
            "need 2k ≤ n_min ≤ n_max, got k = {k}, n = {n_min}..{n_max}"
        )));
    }
    let points = bifurcation_diagram(k, n_min, n_max)?;
    let mut env = OutputEnvelope::new(
        "bifurcation",
        &["k", "n", "regime", "branch", "A_opt", "P_opt"],
    )
    .param("k", k)
    .param("n_min", n_min)
    .param("n_max", n_max);
    for p in &points {
        let labels: &[&str] = if p.branches.len() == 1 {
            &["balanced"]
        } else {
            &["lower", "upper"]
        };
        for (b, label) in p.branches.iter().zip(labels) {
            env.push(vec![
                p.k.into(),
                p.n.into(),
                p.regime.to_string().into(),
                (*label).into(),
                b.weight.into(),
                b.prob.into(),
            ]);
        }
    }
    Ok(env)
}

pub fn decay(k: usize, n_min: Option<usize>, n_max: usize, source: SourceKind) -> CmdResult {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let n_min = n_min.unwrap_or(2 * k + 1);
    if n_min < 2 * k || n_max < n_min {
        return Err(CliError::Usage(format!(
            "need 2k ≤ n_min ≤ n_max, got k = {k}, n = {n_min}..{n_max}"
        )));
    }
    let mut env = OutputEnvelope::new("decay", &["n", "P", "P_asymp"])
        .param("k", k)
        .param("n_min", n_min)
        .param("n_max", n_max)
        .param("source", source.name());
    let probs: Vec<f64> = match source {
        SourceKind::Epr => (n_min..=n_max)
            .map(|n| model::folded_prob(DickeSpec::new(n, k)?, 0.5))
            .collect::<Result<_, _>>()?,
        SourceKind::Optimal => bifurcation_diagram(k, n_min, n_max)?
            .iter()
            .map(|p| p.p_opt())
            .collect(),
    };
    for (n, p) in (n_min..=n_max).zip(probs) {
        let asymp = asymptotic_expansion(DickeSpec::new(n, k)?);
        env.push(vec![n.into(), p.into(), asymp.into()]);
    }
    Ok(env)
}

fn float_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn simulate(n: usize, weight: f64, runs: u64, seed: u64) -> CmdResult {
    let records = sample_runs(n, weight, runs, seed)?;
    let report = yield_report(&records, n)?;
    let dist = model::distribution(n, weight)?;
    let fit = chi_square(&report.raw_counts, dist.raw())?;

    let mut env = OutputEnvelope::new(
        "simulate",
        &["outcome_k", "class", "count", "frequency", "expected", "z"],
    )
    .param("n", n)
    .param("A", weight)
    .param("runs", runs)
    .param("seed", seed.to_string());
    for (k, (&count, &p)) in report.raw_counts.iter().zip(dist.raw()).enumerate() {
        let class = if k == 0 || k == n {
            "failure".to_string()
        } else {
            k.min(n - k).to_string()
        };
        env.push(vec![
            k.into(),
            class.into(),
            count.into(),
            (count as f64 / runs as f64).into(),
            p.into(),
            z_score(count, runs, p).into(),
        ]);
    }

    let mut classes = Vec::new();
    for (&k, &count) in &report.dicke_produced {
        let expected = dist.folded(k).unwrap_or(0.0);
        classes.push(json!({
            "k": k,
            "count": count,
            "frequency": report.empirical_probs[&k],
            "expected": expected,
            "z": float_or_null(z_score(count, runs, expected)),
        }));
    }
    let mut summary = Map::new();
    summary.insert("runs".into(), json!(report.runs));
    summary.insert("pairs_consumed".into(), json!(report.pairs_consumed));
    summary.insert("dicke_total".into(), json!(report.dicke_total()));
    summary.insert("failures".into(), json!(report.failures));
    summary.insert("failure_freq".into(), json!(report.failure_freq));
    summary.insert("failure_expected".into(), json!(dist.failure()));
    summary.insert(
        "failure_z".into(),
        float_or_null(z_score(report.failures, runs, dist.failure())),
    );
    summary.insert("bitflips".into(), json!(report.bitflips));
    summary.insert(
        "pairs_per_dicke".into(),
        float_or_null(report.pairs_per_dicke),
    );
    summary.insert("classes".into(), Value::Array(classes));
    summary.insert(
        "chi_square".into(),
        json!({
            "statistic": float_or_null(fit.statistic),
            "dof": fit.dof,
            "p_value": fit.p_value,
        }),
    );
    env.summary = Some(summary);
    Ok(env)
}

pub fn entanglement(n: usize, k: usize, measure: BipartiteMeasure) -> CmdResult {
    let spec = DickeSpec::new(n, k)?;
    let point = optimize_source(spec)?;
    let report = locc_report(&point, measure)?;
    let tangle = tangle_bound_values(spec);
    let mut env = OutputEnvelope::new(
        "entanglement",
        &[
            "n",
            "k",
            "measure",
            "source_E_at_Aopt",
            "dicke_E",
            "locc_rhs",
            "bound_holds",
            "tangle_bound",
        ],
    )
    .param("n", n)
    .param("k", k)
    .param("measure", measure.to_string())
    .param("regime", point.regime.to_string())
    .param("A_opt", report.source_weight);
    // The tangle bound is only meaningful above the critical threshold.
    let bound: Cell = if point.regime == Regime::Supercritical {
        tangle.bound.into()
    } else {
        f64::NAN.into()
    };
    env.push(vec![
        n.into(),
        k.into(),
        measure.to_string().into(),
        report.lhs.into(),
        report.dicke_e.into(),
        report.rhs.into(),
        report.holds.into(),
        bound,
    ]);
    Ok(env)
}
