//! Report assembly: `{manifest, results, meta}` with every float cut to 12
//! significant digits.

use crate::manifest::Manifest;
use crate::ops::Outcome;
use growthlab::metric_space::format_number;
use serde_json::{json, Map, Number, Value};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

/// Name of the seeded generator behind every sampled quantity.
pub const RNG: &str = "ChaCha8";

pub fn build(m: &Manifest, outcome: &Outcome, elapsed: Duration) -> Value {
    let manifest: Map<String, Value> = m.entries().iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut report = json!({
        "manifest": manifest,
        "results": outcome.results,
        "meta": {
            "tool": "growthlab",
            "version": env!("CARGO_PKG_VERSION"),
            "op": m.op(),
            "seed": m.uint("seed").unwrap_or(0),
            "rng": RNG,
            "scale": outcome.scale,
            "partial": outcome.partial,
            "wall_clock_seconds": elapsed.as_secs_f64(),
            "timestamp_unix": timestamp,
        },
    });
    round_floats(&mut report);
    report
}

/// Rounds every non-integer number in place.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format_number(x).parse().expect("formatted float");
            if let Some(r) = Number::from_f64(r) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        let mut v = json!({ "x": [std::f64::consts::PI, 2.0, 1e-20 / 3.0], "n": 7 });
        round_floats(&mut v);
        assert_eq!(v["x"][0].as_f64().unwrap().to_string(), "3.14159265359");
        assert_eq!(v["x"][1], json!(2.0));
        assert_eq!(v["x"][2].as_f64().unwrap(), 3.33333333333e-21);
        assert_eq!(v["n"], json!(7));
    }
}
