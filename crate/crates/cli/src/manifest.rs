//! Flat `key = value` experiment manifests.
//!
//! One entry per line; lines starting with `#` are comments. Every manifest
//! names an `op` such as `growth.fit`, and the remaining keys are checked
//! against that op's schema before anything runs.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestError {
    /// 1-based; 0 when the offending key came from the command line.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "manifest error: {}", self.message)
        } else {
            write!(f, "manifest error at {}:{}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ManifestError {}

/// Keys every op accepts.
const COMMON: &[&str] = &["op", "seed", "cap", "out", "format"];

pub struct Schema {
    pub op: &'static str,
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
}

const fn schema(op: &'static str, required: &'static [&'static str], optional: &'static [&'static str]) -> Schema {
    Schema { op, required, optional }
}

const SUBSET: &[&str] = &["range", "reach"];

pub const SCHEMAS: &[Schema] = &[
    schema("group.ball", &["group", "radius"], &[]),
    schema("group.distance", &["group", "to"], &["from", "max"]),
    schema("growth.fit", &["group", "radius"], &["window", "width"]),
    schema("growth.poincare", &["group", "radius", "s"], &["eps"]),
    schema(
        "growth.comp",
        &["group", "q", "radius"],
        &["peripherals", "a", "depth", "width"],
    ),
    schema("growth.conjugacy", &["group", "h", "radius"], &["group_radius"]),
    schema(
        "contract.scan",
        &["group", "axis", "radius"],
        &["range", "reach", "e_grid", "d_grid"],
    ),
    schema(
        "contract.bgi",
        &["group", "axis", "radius", "c"],
        &["range", "reach", "bound"],
    ),
    schema("contract.constrict", &["group", "axis", "radius", "c"], SUBSET),
    schema("contract.morse", &["group", "axis", "radius", "d"], SUBSET),
    schema(
        "axioms.audit",
        &["group", "axis", "radius", "family_radius"],
        &["xi", "reach"],
    ),
    schema(
        "axioms.quasitree",
        &["group", "axis", "radius", "family_radius", "c", "k"],
        &["reach"],
    ),
    schema(
        "axioms.bottleneck",
        &["group", "axis", "radius", "family_radius", "c", "k"],
        &["reach", "pairs", "delta_max"],
    ),
    schema(
        "axioms.normalclosure",
        &["group", "h", "g", "n", "radius"],
        &["reach", "d_grid"],
    ),
    schema("horoball.distance", &["a", "to"], &["base", "from", "depth"]),
    schema("horoball.spheres", &["a", "radius"], &["base", "width", "depth"]),
    schema("horoball.fit", &["a", "max_base"], &["base", "samples", "depth"]),
    schema(
        "horoball.gap",
        &["group", "peripherals", "radius"],
        &["a", "depth", "width", "margin", "window"],
    ),
    schema("quotient.pieces", &["group"], &["relators", "quotient"]),
    schema("quotient.dehn", &["group", "word"], &["relators", "quotient"]),
    schema("quotient.ball", &["group", "radius"], &["relators", "quotient"]),
    schema("quotient.section", &["group", "radius"], &["relators", "quotient"]),
    schema("quotient.net", &["group", "radius", "k"], &["relators", "quotient"]),
    schema(
        "quotient.phi",
        &["group", "h", "n", "k_max"],
        &["relators", "quotient", "radius", "k", "slice"],
    ),
    schema(
        "quotient.tightness",
        &["group", "radius"],
        &["relators", "quotient", "window"],
    ),
    schema("snowflake.distance", &["group", "to"], &["from", "max"]),
    schema("snowflake.geodesic", &["r", "x"], &["y"]),
];

/// Keys holding a finite number.
const NUMERIC: &[&str] = &[
    "radius",
    "max",
    "width",
    "s",
    "eps",
    "q",
    "a",
    "group_radius",
    "reach",
    "c",
    "d",
    "bound",
    "family_radius",
    "xi",
    "k",
    "delta_max",
    "max_base",
    "margin",
];
/// Keys holding a nonnegative integer.
const UNSIGNED: &[&str] = &["seed", "cap", "pairs", "depth", "samples", "k_max", "slice"];
/// Keys holding any integer.
const SIGNED: &[&str] = &["n", "r", "x", "y"];
/// Keys holding `lo,hi`.
const PAIRS: &[&str] = &["window", "range"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
    lines: BTreeMap<String, usize>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let mut m = Manifest::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim_start();
            let indent = raw.len() - trimmed.len();
            let err = |column: usize, message: String| ManifestError { line, column, message };
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some(eq) = trimmed.find('=') else {
                return Err(err(indent + 1, "expected `key = value`".into()));
            };
            let key = trimmed[..eq].trim();
            let value = trimmed[eq + 1..].trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(indent + 1, format!("bad key `{key}`")));
            }
            if value.is_empty() {
                return Err(err(indent + eq + 2, format!("`{key}` has no value")));
            }
            if m.entries.contains_key(key) {
                return Err(err(indent + 1, format!("`{key}` given twice")));
            }
            m.entries.insert(key.to_string(), value.to_string());
            m.lines.insert(key.to_string(), line);
        }
        if m.entries.is_empty() {
            return Err(ManifestError {
                line: 1,
                column: 1,
                message: "empty manifest".into(),
            });
        }
        Ok(m)
    }

    /// Sets a key from the command line, overriding the manifest.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
        self.lines.remove(key);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn op(&self) -> &str {
        self.get("op").unwrap_or("")
    }

    fn error(&self, key: &str, message: String) -> ManifestError {
        let line = self.lines.get(key).copied().unwrap_or(0);
        ManifestError {
            line,
            column: if line == 0 { 0 } else { 1 },
            message,
        }
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        let op = self.get("op").ok_or_else(|| self.error("op", "missing `op`".into()))?;
        let schema = SCHEMAS
            .iter()
            .find(|s| s.op == op)
            .ok_or_else(|| self.error("op", format!("unknown op `{op}`")))?;
        for key in schema.required {
            if self.get(key).is_none() {
                return Err(self.error("op", format!("{op} needs `{key}`")));
            }
        }
        for (key, v) in &self.entries {
            let k = key.as_str();
            if !COMMON.contains(&k) && !schema.required.contains(&k) && !schema.optional.contains(&k) {
                return Err(self.error(k, format!("{op} does not take `{k}`")));
            }
            let bad = if NUMERIC.contains(&k) {
                !v.parse::<f64>().is_ok_and(f64::is_finite)
            } else if UNSIGNED.contains(&k) {
                v.parse::<u64>().is_err()
            } else if SIGNED.contains(&k) {
                v.parse::<i64>().is_err()
            } else if PAIRS.contains(&k) {
                parse_pair(v).is_none()
            } else {
                false
            };
            if bad {
                return Err(self.error(k, format!("`{k}` has a malformed value `{v}`")));
            }
        }
        if let Some(f) = self.get("format") {
            if f != "json" && f != "csv" {
                return Err(self.error("format", format!("format must be json or csv, got `{f}`")));
            }
        }
        for key in ["group", "base"] {
            match self.get(key) {
                Some("line") if key == "base" => {}
                Some(g) => {
                    growthlab::groups::parse_group(g).map_err(|e| self.error(key, e.to_string()))?;
                }
                None => {}
            }
        }
        Ok(())
    }

    pub fn num(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn uint(&self, key: &str) -> Option<u64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn pair(&self, key: &str) -> Option<(f64, f64)> {
        self.get(key).and_then(parse_pair)
    }
}

fn parse_pair(v: &str) -> Option<(f64, f64)> {
    let (a, b) = v.split_once(',')?;
    let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a.is_finite() && b.is_finite() && a <= b).then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_positions() {
        let e = Manifest::parse("op = group.ball\n  radius 4\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = Manifest::parse("# nothing\n\n").unwrap_err();
        assert_eq!(e.message, "empty manifest");
        let e = Manifest::parse("op = a\nop = b\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn validation_points_at_the_key() {
        let m = Manifest::parse("op = group.ball\ngroup = free:2\nradius = four\n").unwrap();
        assert_eq!(m.validate().unwrap_err().line, 3);
        let m = Manifest::parse("op = group.ball\ngroup = nope:2\nradius = 4\n").unwrap();
        assert_eq!(m.validate().unwrap_err().line, 2);
        let m = Manifest::parse("op = group.ball\ngroup = free:2\n").unwrap();
        assert!(m.validate().unwrap_err().message.contains("radius"));
        let m = Manifest::parse("op = group.ball\ngroup = free:2\nradius = 3\nxi = 1\n").unwrap();
        assert_eq!(m.validate().unwrap_err().line, 4);
    }

    #[test]
    fn every_schema_key_has_a_kind_or_is_free_text() {
        for s in SCHEMAS {
            assert!(s.op.contains('.'));
            for k in s.required.iter().chain(s.optional) {
                assert!(!COMMON.contains(k), "{k} repeated in {}", s.op);
            }
        }
    }
}
