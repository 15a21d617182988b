use super::{FreeGroup, FreeProduct, GroupModel, Product, Raag, Snowflake};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Parses a group spec: `free:<k>`, `raag:<edges>`, `bb:<r>`,
/// `product(<spec>,<spec>):l1`, `freeprod(<spec>,<spec>)`.
pub fn parse_group(text: &str) -> Result<Arc<dyn GroupModel>> {
    let t = text.trim();
    let unknown = || Error::UnknownGroup(t.to_string());
    if let Some(k) = t.strip_prefix("free:") {
        let k: usize = k.trim().parse().map_err(|_| unknown())?;
        if k == 0 {
            return Err(unknown());
        }
        return Ok(Arc::new(FreeGroup::new(k)));
    }
    if let Some(e) = t.strip_prefix("raag:") {
        return Ok(Arc::new(Raag::parse(e)?));
    }
    if let Some(r) = t.strip_prefix("bb:") {
        let r: i64 = r.trim().parse().map_err(|_| unknown())?;
        return Ok(Arc::new(Snowflake::new(r)?));
    }
    if let Some(rest) = t.strip_prefix("product(") {
        let (inner, tail) = split_close(rest).ok_or_else(unknown)?;
        if tail.trim() != ":l1" {
            return Err(Error::UnknownGroup(format!(
                "{t}: only the l1 product metric is supported"
            )));
        }
        let (x, y) = split_pair(inner).ok_or_else(unknown)?;
        return Ok(Arc::new(Product::new(parse_group(x)?, parse_group(y)?)));
    }
    if let Some(rest) = t.strip_prefix("freeprod(") {
        let (inner, tail) = split_close(rest).ok_or_else(unknown)?;
        if !tail.trim().is_empty() {
            return Err(unknown());
        }
        let (x, y) = split_pair(inner).ok_or_else(unknown)?;
        return Ok(Arc::new(FreeProduct::new(parse_group(x)?, parse_group(y)?)));
    }
    Err(unknown())
}

/// The factor specs of `product(<spec>,<spec>):l1`.
pub fn product_factors(text: &str) -> Option<(String, String)> {
    let rest = text.trim().strip_prefix("product(")?;
    let (inner, tail) = split_close(rest)?;
    if tail.trim() != ":l1" {
        return None;
    }
    let (x, y) = split_pair(inner)?;
    Some((x.trim().to_string(), y.trim().to_string()))
}

/// Splits `inner) tail` at the parenthesis closing an already-open one.
fn split_close(s: &str) -> Option<(&str, &str)> {
    let mut depth = 1;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some((&s[..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits at the top-level comma that separates two group specs. RAAG edge
/// lists contain commas too, so we try each top-level comma and keep the
/// first split where both halves parse.
fn split_pair(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                let (x, y) = (&s[..i], &s[i + 1..]);
                if parse_group(x).is_ok() && parse_group(y).is_ok() {
                    return Some((x, y));
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "free:2",
            "free:3",
            "raag:a-b",
            "raag:a-b,b-c",
            "bb:3",
            "product(free:2,free:2):l1",
            "freeprod(raag:a-b,free:1)",
            "product(raag:a-b,b-c,free:1):l1",
        ] {
            assert_eq!(parse_group(s).unwrap().spec(), s);
        }
    }

    #[test]
    fn rejects() {
        for s in ["", "free:0", "free:x", "bb:1", "product(free:2,free:2)", "torus:2"] {
            assert!(parse_group(s).is_err(), "{s}");
        }
    }
}
