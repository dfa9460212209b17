use anyhow::{anyhow, bail, Context, Result};
use locc_core::discrimination::{search_protocol, verify_protocol, verify_theorem, LabelSet, SweepMode};
use locc_core::halpha::{build_h_alpha, label_action, verify_conjugation, TransformId};
use locc_core::indistinguishability::{certify, verify_symmetry_identity, Certificate, OrbitEnsemble};
use locc_core::pauli::{build_pauli, build_x, build_z, commutation_phase, PauliLabel, PrimeDimension};
use locc_core::states::schmidt_swap_check;
use locc_core::{Complex64, Matrix, Protocol};
use serde_json::{json, Value};

use crate::report::{to_json, RunReport};
use crate::seed::parse_seed;
use crate::{Command, Mode, Which, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_NO_PROTOCOL};

pub fn run(command: &Command) -> Result<(RunReport, u8)> {
    match *command {
        Command::Paulis { d, ref labels, alpha } => paulis(d, labels.as_deref(), alpha),
        Command::Distinguish { d, ref labels, tol } => distinguish(d, labels, tol),
        Command::Certify { d, ref seed, ref labels, tol } => certify_cmd(d, seed, labels.as_deref(), tol),
        Command::Verify { d, which, l, mode, count, seed, tol } => verify(d, which, l, mode, count, seed, tol),
        Command::Examples { tol } => crate::examples::run(tol),
    }
}

fn prime(d: usize) -> Result<PrimeDimension> {
    Ok(PrimeDimension::new(d)?)
}

/// Parses `"m,n;m,n;..."`.
pub fn parse_labels(text: &str, dim: PrimeDimension) -> Result<Vec<PauliLabel>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (m, n) = pair.split_once(',').ok_or_else(|| anyhow!("label {pair:?} is not of the form m,n"))?;
            let m: usize = m.trim().parse().with_context(|| format!("bad m in {pair:?}"))?;
            let n: usize = n.trim().parse().with_context(|| format!("bad n in {pair:?}"))?;
            Ok(dim.check(PauliLabel::new(m, n))?)
        })
        .collect()
}

fn label_list(labels: &[PauliLabel]) -> Value {
    to_json(&labels)
}

fn paulis(d: usize, labels: Option<&str>, alpha: Option<usize>) -> Result<(RunReport, u8)> {
    let dim = prime(d)?;
    let labels = match labels {
        Some(text) => parse_labels(text, dim)?,
        None => dim.labels().collect(),
    };
    let operators: Vec<Value> = labels
        .iter()
        .map(|&l| json!({"label": to_json(&l), "matrix": to_json(&build_pauli::<f64>(dim, l))}))
        .collect();
    let mut result = json!({
        "omega": to_json(&dim.omega::<f64>()),
        "x": to_json(&build_x::<f64>(dim)),
        "z": to_json(&build_z::<f64>(dim)),
        "operators": operators,
    });
    if let Some(alpha) = alpha {
        let h = build_h_alpha::<f64>(dim, alpha)?;
        let action: Vec<Value> = labels
            .iter()
            .map(|&l| Ok(json!({"label": to_json(&l), "image": to_json(&label_action(dim, alpha, l)?)})))
            .collect::<Result<_>>()?;
        result["h_alpha"] = json!({"alpha": alpha, "s": h.s, "matrix": to_json(&h.matrix), "label_action": action});
    }
    let params = json!({"d": d, "labels": label_list(&labels), "alpha": alpha});
    Ok((RunReport::new("paulis", params, result, 0.0), 0))
}

fn protocol_payload(protocol: &Protocol, report: &Value) -> Value {
    json!({
        "found": true,
        "transform": protocol.transform.to_string(),
        "transformed_labels": label_list(&protocol.transformed_labels),
        "alice_unitary": to_json(&protocol.alice_unitary),
        "bob_unitary": to_json(&protocol.bob_unitary),
        "decision": to_json(&protocol.decision),
        "verification": report,
    })
}

fn distinguish(d: usize, labels: &str, tol: f64) -> Result<(RunReport, u8)> {
    let dim = prime(d)?;
    let set = LabelSet::new(dim, parse_labels(labels, dim)?)?;
    let params = json!({"d": d, "labels": label_list(set.labels())});
    match search_protocol::<f64>(&set) {
        Some(protocol) => {
            let report = verify_protocol(&set, &protocol, tol)?;
            let code = if report.passed { 0 } else { EXIT_FAILED };
            let result = protocol_payload(&protocol, &to_json(&report));
            Ok((RunReport::new("distinguish", params, result, tol), code))
        }
        None => {
            let tried: Vec<String> = TransformId::family(dim).iter().map(ToString::to_string).collect();
            let result = json!({"found": false, "tried": tried});
            Ok((RunReport::new("distinguish", params, result, tol), EXIT_NO_PROTOCOL))
        }
    }
}

fn certify_cmd(d: usize, seed: &str, labels: Option<&str>, tol: f64) -> Result<(RunReport, u8)> {
    let dim = prime(d)?;
    let parsed = parse_seed(seed, dim, tol)?;
    let ensemble = match labels {
        Some(text) => OrbitEnsemble::partial(dim, parsed.shape, parsed.density, parse_labels(text, dim)?, tol)?,
        None => OrbitEnsemble::full(dim, parsed.shape, parsed.density, tol)?,
    };
    let certificate = certify(&ensemble, tol)?;
    let code = match certificate {
        Certificate::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        _ => 0,
    };
    let params = json!({"d": d, "seed": seed, "shape": to_json(&parsed.shape)});
    let result = json!({"certificate": to_json(&certificate)});
    Ok((RunReport::new("certify", params, result, tol), code))
}

/// Largest residuals of the operator-algebra identities: unitarity,
/// Hilbert–Schmidt orthogonality, and the commutation phase law.
fn operator_algebra_residuals(dim: PrimeDimension) -> (f64, f64, f64) {
    let d = dim.get();
    let ops: Vec<Matrix> = dim.labels().map(|l| build_pauli(dim, l)).collect();
    let labels: Vec<PauliLabel> = dim.labels().collect();
    let identity = Matrix::identity(d);
    let (mut unitary, mut orthogonal, mut commutation) = (0.0f64, 0.0f64, 0.0f64);
    for (i, a) in ops.iter().enumerate() {
        unitary = unitary.max((&a.adjoint() * a).max_abs_diff(&identity));
        for (j, b) in ops.iter().enumerate() {
            let expected = if i == j { d as f64 } else { 0.0 };
            orthogonal = orthogonal.max((a.hs_inner(b) - Complex64::new(expected, 0.0)).norm());
            let phase = commutation_phase::<f64>(dim, labels[i], labels[j]);
            commutation = commutation.max((a * b).max_abs_diff(&(b * a).scale(phase)));
        }
    }
    (unitary, orthogonal, commutation)
}

pub fn identity_residuals(dim: PrimeDimension, tol: f64) -> Result<Value> {
    let d = dim.get();
    let alphas = if d == 2 { 1 } else { d };
    let mut conj_max = 0.0f64;
    let mut per_alpha = Vec::with_capacity(alphas);
    for alpha in 0..alphas {
        let r = verify_conjugation::<f64>(dim, alpha, tol)?;
        conj_max = conj_max.max(r.max_residual);
        per_alpha.push(json!({"alpha": alpha, "max_residual": r.max_residual, "max_phase_deviation": r.max_phase_deviation}));
    }
    let (unitary, orthogonal, commutation) = operator_algebra_residuals(dim);
    let schmidt = schmidt_swap_check::<f64>(dim)?;
    let symmetry = verify_symmetry_identity::<f64>(dim)?;
    let residuals = [conj_max, unitary, orthogonal, commutation, schmidt, symmetry];
    Ok(json!({
        "conjugation": {"max_residual": conj_max, "per_alpha": per_alpha},
        "pauli_unitarity": unitary,
        "hilbert_schmidt_orthogonality": orthogonal,
        "commutation_law": commutation,
        "schmidt_swap": schmidt,
        "symmetry_identity": symmetry,
        "passed": residuals.iter().all(|&r| r <= tol),
    }))
}

#[allow(clippy::too_many_arguments)]
fn verify(d: usize, which: Which, l: Option<usize>, mode: Mode, count: usize, seed: u64, tol: f64) -> Result<(RunReport, u8)> {
    let dim = prime(d)?;
    match which {
        Which::Identities => {
            let result = identity_residuals(dim, tol)?;
            let code = if result["passed"] == Value::Bool(true) { 0 } else { EXIT_FAILED };
            Ok((RunReport::new("verify", json!({"d": d, "which": "identities"}), result, tol), code))
        }
        Which::Theorem => {
            let Some(l) = l else { bail!("--which theorem requires --l") };
            let sweep = match mode {
                Mode::Exhaustive => SweepMode::Exhaustive,
                Mode::Sampled => SweepMode::Sampled { count, seed },
            };
            let summary = verify_theorem(dim, l, sweep)?;
            let code = if summary.passed { 0 } else { EXIT_FAILED };
            let mut params = json!({"d": d, "which": "theorem", "l": l, "mode": to_json(&sweep)});
            let mut report = RunReport::new("verify", Value::Null, to_json(&summary), tol);
            if let SweepMode::Sampled { seed, count } = sweep {
                params["count"] = json!(count);
                report.seed = Some(seed);
            }
            report.parameters = params;
            Ok((report, code))
        }
    }
}
