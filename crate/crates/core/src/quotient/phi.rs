use crate::error::{Error, Result};
use crate::groups::{Element, GroupModel};
use rustc_hash::FxHashMap;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PhiCollision {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub element: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub n: i64,
    pub k_max: usize,
    pub tuples: usize,
    pub injective: bool,
    pub collision: Option<PhiCollision>,
}

/// Evaluates (a₁, …, a_k) ↦ a₁hⁿa₂hⁿ⋯a_khⁿ on every tuple over `a_star`
/// with 1 ≤ k ≤ `k_max` and looks for two tuples with the same image.
pub fn phi_injectivity(
    model: &dyn GroupModel,
    a_star: &[Element],
    h: &Element,
    n: i64,
    k_max: usize,
    cap: usize,
) -> Result<PhiReport> {
    if a_star.is_empty() || k_max == 0 {
        return Err(Error::Invalid("need a nonempty net slice and k_max ≥ 1".into()));
    }
    let total: usize = (1..=k_max as u32)
        .try_fold(0usize, |acc, k| {
            a_star.len().checked_pow(k).and_then(|p| acc.checked_add(p))
        })
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::Insufficient(format!("{total} tuples exceed the cap {cap}")));
    }
    let mut hn = model.identity();
    let step = if n >= 0 { h.clone() } else { model.inverse(h) };
    for _ in 0..n.unsigned_abs() {
        hn = model.multiply(&hn, &step);
    }
    let blocks: Vec<Element> = a_star.iter().map(|a| model.multiply(a, &hn)).collect();
    let mut seen: FxHashMap<Element, Vec<usize>> = FxHashMap::default();
    let mut layer: Vec<(Vec<usize>, Element)> = vec![(Vec::new(), model.identity())];
    let mut tuples = 0;
    for _ in 0..k_max {
        let mut next = Vec::with_capacity(layer.len() * blocks.len());
        for (t, g) in &layer {
            for (i, b) in blocks.iter().enumerate() {
                let mut tuple = t.clone();
                tuple.push(i);
                let x = model.multiply(g, b);
                tuples += 1;
                if let Some(prev) = seen.get(&x) {
                    return Ok(PhiReport {
                        n,
                        k_max,
                        tuples,
                        injective: false,
                        collision: Some(PhiCollision {
                            first: prev.clone(),
                            second: tuple,
                            element: model.format(&x),
                        }),
                    });
                }
                seen.insert(x.clone(), tuple.clone());
                next.push((tuple, x));
            }
        }
        layer = next;
    }
    Ok(PhiReport {
        n,
        k_max,
        tuples,
        injective: true,
        collision: None,
    })
}
