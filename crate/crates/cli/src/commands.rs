use anyhow::{Context, Result};
use relspin::bell::{self, OptimizerOptions, TwoParticleState};
use relspin::nalgebra::Vector3;
use relspin::reconstruct::{self, ExpectationTable, Lemma2Report, COMPONENT_LABELS, STATE_LABELS};
use relspin::spinops::{self, SpinTriple};
use serde_json::{json, Value};

use crate::config::{Format, ScanConfig};
use crate::output::{format_sig, Cell, Table};

/// Rendered output plus any numerical-invariant violations found while producing it.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub violations: Vec<String>,
}

/// A unit vector perpendicular to `n`, chosen deterministically.
fn perpendicular(n: &Vector3<f64>) -> Vector3<f64> {
    let basis = [Vector3::x(), Vector3::y(), Vector3::z()];
    let least = (0..3).min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs())).unwrap_or(0);
    n.cross(&basis[least]).normalize()
}

/// `defect(|p|)` of `restricted_spin(kind, m, |p|·n)`.
///
/// Columns: `p_mag,defect`.
pub fn commutator_scan(cfg: &ScanConfig) -> Result<Outcome> {
    let mut table = Table::new(vec!["p_mag", "defect"]);
    let mut violations = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    for p_mag in cfg.momenta() {
        let triple = spinops::restricted_spin(cfg.kind, cfg.mass, &(cfg.dir * p_mag))?;
        let defect = spinops::commutator_defect(&triple);
        if cfg.kind == relspin::OperatorKind::NormalizedPL && defect + 1e-15 < previous {
            violations.push(format!("defect decreased at |p| = {p_mag}: {defect:e} < {previous:e}"));
        }
        previous = defect;
        table.push(vec![Cell::Num(p_mag), Cell::Num(defect)]);
    }
    Ok(Outcome {
        text: table.render(cfg.format)?,
        violations,
    })
}

/// Positive eigenvalue of `axis(θ)·S` with `axis(θ) = cos θ n + sin θ u`.
///
/// Columns: `p_mag,theta,s_plus`.
pub fn eigen_scan(cfg: &ScanConfig) -> Result<Outcome> {
    let mut table = Table::new(vec!["p_mag", "theta", "s_plus"]);
    let mut violations = Vec::new();
    let u = perpendicular(&cfg.dir);
    for p_mag in cfg.momenta() {
        let p = cfg.dir * p_mag;
        for theta in cfg.theta.points(false) {
            let axis = cfg.dir * theta.cos() + u * theta.sin();
            let (_, s_plus) = spinops::spin_eigenvalues(cfg.kind, cfg.mass, &p, &axis)?;
            let expected = match cfg.kind {
                relspin::OperatorKind::Wigner => 0.5,
                relspin::OperatorKind::NormalizedPL => spinops::eigenvalue_closed_form(cfg.mass, &p, &axis)?,
            };
            if (s_plus - expected).abs() > cfg.tol {
                violations.push(format!(
                    "eigenvalue {s_plus} disagrees with closed form {expected} at |p| = {p_mag}, θ = {theta}"
                ));
            }
            table.push(vec![Cell::Num(p_mag), Cell::Num(theta), Cell::Num(s_plus)]);
        }
    }
    Ok(Outcome {
        text: table.render(cfg.format)?,
        violations,
    })
}

/// Maximal CHSH value for the singlet with `p_A = p_B = |p|·n`.
///
/// Columns: `p_mag,kind,chsh_opt,chsh_oracle,converged`.
pub fn bell_scan(cfg: &ScanConfig) -> Result<Outcome> {
    let mut table = Table::new(vec!["p_mag", "kind", "chsh_opt", "chsh_oracle", "converged"]);
    let mut violations = Vec::new();
    let opts = OptimizerOptions {
        restarts: cfg.restarts,
        seed: cfg.seed,
        tol: cfg.tol,
        max_evals: cfg.max_evals,
    };
    for p_mag in cfg.momenta() {
        let p = cfg.dir * p_mag;
        let state = TwoParticleState::singlet(cfg.mass, p, p)?;
        let r = bell::max_chsh_optimized(&state, cfg.kind, &opts)?;
        if !r.converged {
            violations.push(format!(
                "optimizer {} vs oracle {} at |p| = {p_mag} (gap {:e} > {:e})",
                r.value,
                r.oracle_value,
                (r.value - r.oracle_value).abs(),
                cfg.tol
            ));
        }
        table.push(vec![
            Cell::Num(p_mag),
            Cell::Text(cfg.kind.to_string()),
            Cell::Num(r.value),
            Cell::Num(r.oracle_value),
            Cell::Bool(r.converged),
        ]);
    }
    Ok(Outcome {
        text: table.render(cfg.format)?,
        violations,
    })
}

/// Seeded joint outcome counts for the singlet at momentum `--p`.
///
/// Columns: `outcome_a,outcome_b,count,probability`.
pub fn sample(cfg: &ScanConfig) -> Result<Outcome> {
    let state = TwoParticleState::singlet(cfg.mass, cfg.momentum, cfg.momentum)?;
    let counts = bell::sample_outcomes(&state, &cfg.axis, &cfg.axis_b, cfg.kind, cfg.shots, cfg.seed)?;
    let mut table = Table::new(vec!["outcome_a", "outcome_b", "count", "probability"]);
    let labels = [("+", "+"), ("+", "-"), ("-", "+"), ("-", "-")];
    for (i, (a, b)) in labels.iter().enumerate() {
        table.push(vec![
            Cell::Text((*a).into()),
            Cell::Text((*b).into()),
            Cell::Int(counts.counts[i]),
            Cell::Num(counts.probabilities[i]),
        ]);
    }
    Ok(Outcome {
        text: table.render(cfg.format)?,
        violations: Vec::new(),
    })
}

fn load_table(path: &std::path::Path) -> Result<ExpectationTable> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = value.get("table").cloned().unwrap_or(value);
    serde_json::from_value(inner).with_context(|| format!("{} is not an expectation table", path.display()))
}

fn triple_json(t: &SpinTriple) -> Value {
    let mut obj = serde_json::Map::new();
    for (k, name) in COMPONENT_LABELS.iter().enumerate() {
        let m = t.component(k);
        let rows: Vec<Value> = (0..2)
            .map(|r| json!([[m[(r, 0)].re, m[(r, 0)].im], [m[(r, 1)].re, m[(r, 1)].im]]))
            .collect();
        obj.insert((*name).to_owned(), Value::Array(rows));
    }
    Value::Object(obj)
}

fn report_json(r: &Lemma2Report) -> Value {
    json!({
        "pass": r.pass,
        "epsilon_pass": r.epsilon_pass,
        "commutator_pass": r.commutator_pass,
        "verdicts_agree": r.verdicts_agree(),
        "trace_residual": r.trace_residual,
        "epsilon_residual": r.epsilon_residual,
        "epsilon_worst": [r.epsilon_worst.0, r.epsilon_worst.1, r.epsilon_worst.2],
        "algebra_residual": r.algebra_residual,
        "tolerance": r.tolerance,
    })
}

/// The 18-entry expectation table, its reconstruction and the algebra verdict.
///
/// JSON: `{kind, mass, momentum, table, operators, lemma2}`; table entries are
/// written at full precision so the file reconstructs exactly. CSV columns:
/// `component,state,value`, followed by the verdict rows.
pub fn table(cfg: &ScanConfig) -> Result<Outcome> {
    let (t, source) = match &cfg.from {
        Some(path) => (load_table(path)?, json!({ "file": path.display().to_string() })),
        None => (
            reconstruct::expectation_table(cfg.kind, cfg.mass, &cfg.momentum)?,
            json!({
                "kind": cfg.kind.to_string(),
                "mass": cfg.mass,
                "momentum": [cfg.momentum.x, cfg.momentum.y, cfg.momentum.z],
            }),
        ),
    };
    let report = reconstruct::lemma2_check(&t, cfg.tol);
    let mut violations = Vec::new();
    if !report.verdicts_agree() {
        violations.push(format!(
            "table identity and commutator verdicts disagree (ε residual {:e}, defect {:e})",
            report.epsilon_residual, report.algebra_residual
        ));
    }
    let text = match cfg.format {
        Format::Json => {
            let doc = json!({
                "source": source,
                "table": serde_json::to_value(t)?,
                "operators": triple_json(&report.triple),
                "lemma2": report_json(&report),
            });
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("component,state,value\n");
            for (k, c) in COMPONENT_LABELS.iter().enumerate() {
                for (l, s) in STATE_LABELS.iter().enumerate() {
                    out.push_str(&format!("{c},{s},{}\n", format_sig(t.get(k, l))));
                }
            }
            out.push_str(&format!("verdict,,{}\n", if report.pass { "pass" } else { "fail" }));
            out.push_str(&format!("defect,,{}\n", format_sig(report.algebra_residual)));
            out
        }
    };
    Ok(Outcome { text, violations })
}
