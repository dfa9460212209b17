//! Deterministic JSON reports: sorted keys, floats rounded to 15 significant digits.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug)]
pub struct RunReport {
    pub command: &'static str,
    pub parameters: Value,
    pub result: Value,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub elapsed_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &'static str, parameters: Value, result: Value, tolerance: f64) -> Self {
        Self { command, parameters, result, tolerance, seed: None, elapsed_ms: None }
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), Value::from(self.command));
        map.insert("parameters".into(), self.parameters.clone());
        map.insert("result".into(), self.result.clone());
        map.insert("tolerance".into(), Value::from(self.tolerance));
        if let Some(seed) = self.seed {
            map.insert("seed".into(), Value::from(seed));
        }
        if let Some(ms) = self.elapsed_ms {
            map.insert("elapsed_ms".into(), Value::from(ms as u64));
        }
        canonicalize(Value::Object(map))
    }

    pub fn render(&self, pretty: bool) -> String {
        let v = self.to_value();
        if pretty {
            serde_json::to_string_pretty(&v).expect("report serializes")
        } else {
            serde_json::to_string(&v).expect("report serializes")
        }
    }
}

/// Serializes any value and canonicalizes its floats.
pub fn to_json<T: Serialize>(value: &T) -> Value {
    canonicalize(serde_json::to_value(value).expect("payload serializes"))
}

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        // serde_json's default map is ordered by key
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}
