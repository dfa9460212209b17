//! Reference scenarios reproduced end to end.

use anyhow::Result;
use locc_core::discrimination::{search_protocol, verify_protocol, LabelSet};
use locc_core::indistinguishability::{certify, example2_ensemble, example2_kets, Certificate, OrbitEnsemble};
use locc_core::states::{schmidt_ket, BipartiteShape};
use locc_core::{phi_plus, werner_state, Complex64, Error, Matrix, PauliLabel, PrimeDimension, Protocol};
use serde_json::{json, Value};

use crate::report::RunReport;
use crate::EXIT_FAILED;

struct Row {
    scenario: String,
    expected: String,
    observed: String,
}

impl Row {
    fn new(scenario: impl Into<String>, expected: impl Into<String>, observed: String) -> Self {
        Self { scenario: scenario.into(), expected: expected.into(), observed }
    }

    fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

fn labels(pairs: &[(usize, usize)]) -> Vec<PauliLabel> {
    pairs.iter().map(|&(m, n)| PauliLabel::new(m, n)).collect()
}

/// `"<transform>; verified"` or `"no protocol"`.
fn protocol_outcome(dim: PrimeDimension, pairs: &[(usize, usize)], tol: f64) -> Result<(String, Option<Protocol>)> {
    let set = LabelSet::new(dim, labels(pairs))?;
    Ok(match search_protocol::<f64>(&set) {
        Some(protocol) => {
            let report = verify_protocol(&set, &protocol, tol)?;
            let status = if report.passed { "verified" } else { "FAILED" };
            (format!("{}; {status}", protocol.transform), Some(protocol))
        }
        None => ("no protocol".to_string(), None),
    })
}

fn describe(certificate: &Certificate<f64>) -> String {
    match certificate {
        Certificate::CertifiedLoccIndistinguishable { .. } => "certified indistinguishable".into(),
        Certificate::Inconclusive { rank: Some(rank), .. } => format!("inconclusive (rank {rank})"),
        Certificate::Inconclusive { .. } => "inconclusive".into(),
        Certificate::DistinguishableWithProtocol { protocol, .. } => format!("distinguishable via {}", protocol.transform),
    }
}

fn certify_seed(dim: PrimeDimension, density: Matrix, tol: f64) -> Result<String> {
    let ensemble = OrbitEnsemble::full(dim, BipartiteShape::square(dim.get()), density, tol)?;
    Ok(describe(&certify(&ensemble, tol)?))
}

fn rows(tol: f64) -> Result<Vec<Row>> {
    let qubit = PrimeDimension::new(2)?;
    let qutrit = PrimeDimension::new(3)?;
    let bell = phi_plus::<f64>(qubit).density();
    let mut rows = Vec::new();

    let (observed, protocol) = protocol_outcome(qutrit, &[(0, 1), (0, 2), (1, 0)], tol)?;
    let powers = protocol.map(|p| p.transformed_labels.iter().map(|l| l.m.to_string()).collect::<Vec<_>>().join(","));
    rows.push(Row::new("d=3 {Z,Z^2,X}", "H_0; verified", observed));
    rows.push(Row::new("d=3 {Z,Z^2,X} transformed X-powers", "1,2,0", powers.unwrap_or_default()));

    let (observed, _) = protocol_outcome(qutrit, &[(1, 0), (0, 1), (1, 1)], tol)?;
    rows.push(Row::new("d=3 {X,Z,XZ}", "H_2; verified", observed));

    let (observed, _) = protocol_outcome(qubit, &[(0, 0), (1, 0)], tol)?;
    rows.push(Row::new("two Bell states", "identity; verified", observed));

    let three = [(0, 0), (0, 1), (1, 0)];
    let (mut observed, _) = protocol_outcome(qubit, &three, tol)?;
    let ensemble = OrbitEnsemble::partial(qubit, BipartiteShape::square(2), bell.clone(), labels(&three), tol)?;
    match certify(&ensemble, tol) {
        Err(Error::NotFullOrbit { .. }) => observed.push_str("; not a full orbit"),
        Err(e) => observed.push_str(&format!("; error: {e}")),
        Ok(certificate) => observed.push_str(&format!("; {}", describe(&certificate))),
    }
    rows.push(Row::new("three Bell states", "no protocol; not a full orbit", observed));

    let (observed, _) = protocol_outcome(qubit, &[(0, 0), (0, 1), (1, 0), (1, 1)], tol)?;
    let observed = format!("{observed}; {}", certify_seed(qubit, bell, tol)?);
    rows.push(Row::new("four Bell states", "no protocol; certified indistinguishable", observed));

    let seed = schmidt_ket(&[Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)])?.density();
    rows.push(Row::new("qubit orbit of 0.6|00>+0.8|11>", "certified indistinguishable", certify_seed(qubit, seed, tol)?));

    let kets = example2_kets::<f64>();
    let mut overlap = 0.0f64;
    for (i, a) in kets.iter().enumerate() {
        for b in &kets[i + 1..] {
            overlap = overlap.max(a.inner(b).norm());
        }
    }
    let orthogonal = if overlap <= 1e-12 { "orthogonal" } else { "not orthogonal" };
    let observed = format!("{orthogonal}; {}", describe(&certify(&example2_ensemble(tol)?, tol)?));
    rows.push(Row::new("2x4 orbit of (|00>+|01>+|12>+|13>)/2", "orthogonal; certified indistinguishable", observed));

    for (p, expected) in [(0.25, "inconclusive (rank 1)"), (0.4, "certified indistinguishable"), (0.7, "certified indistinguishable"), (1.0, "certified indistinguishable")] {
        rows.push(Row::new(format!("Werner p={p}"), expected, certify_seed(qubit, werner_state(p)?, tol)?));
    }
    Ok(rows)
}

pub fn run(tol: f64) -> Result<(RunReport, u8)> {
    let rows = rows(tol)?;
    let width = rows.iter().map(|r| r.scenario.len()).max().unwrap_or(0);
    for row in &rows {
        let mark = if row.passed() { "PASS" } else { "FAIL" };
        eprintln!("{mark}  {:<width$}  {}", row.scenario, row.observed);
    }
    let all = rows.iter().all(Row::passed);
    let payload: Vec<Value> = rows
        .iter()
        .map(|r| json!({"scenario": r.scenario, "expected": r.expected, "observed": r.observed, "pass": r.passed()}))
        .collect();
    let result = json!({"rows": payload, "passed": all});
    Ok((RunReport::new("examples", json!({}), result, tol), if all { 0 } else { EXIT_FAILED }))
}
