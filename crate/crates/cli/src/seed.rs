//! Seed-state specifications for `certify`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use locc_core::states::{schmidt_ket, BipartiteShape};
use locc_core::{phi_plus, werner_state, Complex64, Matrix, PrimeDimension};
use serde_json::Value;

/// A parsed seed: its shape and density matrix.
pub struct Seed {
    pub shape: BipartiteShape,
    pub density: Matrix,
}

/// Parses `phi-plus`, `pure:c0,c1,...`, `werner:p` or `file:PATH`.
pub fn parse_seed(spec: &str, dim: PrimeDimension, tol: f64) -> Result<Seed> {
    let d = dim.get();
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let seed = match kind {
        "phi-plus" => Seed { shape: BipartiteShape::square(d), density: phi_plus::<f64>(dim).density() },
        "pure" => {
            let coeffs = arg
                .split(',')
                .map(|s| s.trim().parse::<f64>().map(|x| Complex64::new(x, 0.0)))
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bad coefficients in seed {spec:?}"))?;
            if coeffs.len() != d {
                bail!("pure seed needs {d} Schmidt coefficients, got {}", coeffs.len());
            }
            Seed { shape: BipartiteShape::square(d), density: schmidt_ket(&coeffs)?.density() }
        }
        "werner" => {
            if d != 2 {
                bail!("Werner seeds are two-qubit states; use --d 2");
            }
            let p: f64 = arg.trim().parse().with_context(|| format!("bad Werner parameter in {spec:?}"))?;
            Seed { shape: BipartiteShape::square(2), density: werner_state(p)? }
        }
        "file" => load_density(Path::new(arg))?,
        _ => bail!("unknown seed {spec:?}; expected phi-plus, pure:..., werner:p or file:PATH"),
    };
    if seed.shape.d_a != d {
        bail!("seed first factor has dimension {} but --d is {d}", seed.shape.d_a);
    }
    seed.density.check_density(tol)?;
    Ok(seed)
}

fn complex_entry(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().ok_or_else(|| anyhow!("bad number"))?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| anyhow!("bad real part"))?;
            let im = pair[1].as_f64().ok_or_else(|| anyhow!("bad imaginary part"))?;
            Ok(Complex64::new(re, im))
        }
        _ => bail!("matrix entries must be numbers or [re, im] pairs"),
    }
}

/// Reads `{"dA": .., "dB": .., "matrix": [[[re, im], ...], ...]}`.
pub fn load_density(path: &Path) -> Result<Seed> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dim_of = |key: &str| -> Result<usize> {
        v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| anyhow!("missing integer field {key:?}"))
    };
    let shape = BipartiteShape::new(dim_of("dA")?, dim_of("dB")?)?;
    let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| anyhow!("missing array field \"matrix\""))?;
    let rows = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| anyhow!("matrix rows must be arrays"))?.iter().map(complex_entry).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let density = Matrix::from_rows(rows)?;
    if density.rows() != shape.total() || density.cols() != shape.total() {
        bail!("matrix is {}x{} but dA*dB = {}", density.rows(), density.cols(), shape.total());
    }
    Ok(Seed { shape, density })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit() -> PrimeDimension {
        PrimeDimension::new(2).unwrap()
    }

    #[test]
    fn named_seeds() {
        let s = parse_seed("pure:3,4", qubit(), 1e-10).unwrap();
        assert!((s.density[(0, 0)].re - 0.36).abs() < 1e-12);
        assert!((s.density[(3, 0)].re - 0.48).abs() < 1e-12);
        assert!(parse_seed("werner:0.7", qubit(), 1e-10).is_ok());
        assert!(parse_seed("phi-plus", PrimeDimension::new(5).unwrap(), 1e-10).is_ok());
    }

    #[test]
    fn rejects_bad_specs() {
        for spec in ["pure:1", "pure:a,b", "werner:2", "bogus", "file:/nonexistent/seed.json"] {
            assert!(parse_seed(spec, qubit(), 1e-10).is_err(), "{spec}");
        }
        assert!(parse_seed("werner:0.5", PrimeDimension::new(3).unwrap(), 1e-10).is_err());
    }

    #[test]
    fn entries_accept_real_or_pair() {
        assert_eq!(complex_entry(&serde_json::json!(0.5)).unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(complex_entry(&serde_json::json!([0.5, -1])).unwrap(), Complex64::new(0.5, -1.0));
        assert!(complex_entry(&serde_json::json!([1, 2, 3])).is_err());
    }
}
