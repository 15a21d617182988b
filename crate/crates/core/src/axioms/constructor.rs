use crate::error::{Error, Result};
use crate::groups::{invert_word, word_power, Letter};
use crate::projection::{closest_point_projection, contraction_scan, ContractionProfile, RealizedSubset, WordMetric};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ContractingElement {
    /// f = g hⁿ g⁻¹ h⁻ⁿ.
    pub f: String,
    #[serde(skip)]
    pub word: Vec<Letter>,
    /// d(g·hⁱ, ⟨h⟩) for i = −N..=N, the evidence that g ∉ E(h).
    pub drift: Vec<(i64, f64)>,
    /// Contraction of the path spelled by powers of f.
    pub profile: ContractionProfile,
}

/// Builds f = g hⁿ g⁻¹ h⁻ⁿ, which lies in every normal subgroup containing
/// hⁿ, and scans the contraction of its axis in the host ball of `radius`.
/// Rejects g when g·⟨h⟩ stays coarsely on ⟨h⟩, i.e. g appears to lie in
/// the elementary closure E(h).
pub fn find_contracting_in_subgroup(
    metric: &WordMetric,
    h: &[Letter],
    g: &[Letter],
    n: i64,
    radius: f64,
    d_grid: &[f64],
) -> Result<ContractingElement> {
    let model = metric.model();
    let id = model.identity();
    if model.evaluate(h) == id || n == 0 {
        return Err(Error::Invalid("h must be nontrivial and n nonzero".into()));
    }
    let hlen = model.word_weight(h).max(1.0);
    let steps = ((radius / hlen).ceil() as i64).max(3);
    let axis = RealizedSubset::axis(model, h, -3 * steps..=3 * steps)?;
    let ge = model.evaluate(g);
    let mut drift = Vec::new();
    for i in -steps..=steps {
        let p = model.multiply(&ge, &model.evaluate(&word_power(h, i)));
        if let Ok(q) = closest_point_projection(metric, &axis, &p) {
            drift.push((i, q.distance));
        }
    }
    let threshold = 2.0 * model.generators().iter().map(|x| x.weight).fold(0.0, f64::max);
    let base = drift.iter().find(|d| d.0 == 0).map(|d| d.1);
    let spread = drift.iter().map(|d| d.1).fold(0.0, f64::max) - base.unwrap_or(0.0);
    if base.is_none() || drift.len() < 3 {
        return Err(Error::Insufficient(
            "translated axis not within the metric's reach".into(),
        ));
    }
    if spread <= threshold {
        return Err(Error::Rejected(format!(
            "g·⟨h⟩ stays within {spread} of ⟨h⟩ for |i| ≤ {steps}: g appears to lie in E(h)"
        )));
    }

    let mut word = g.to_vec();
    word.extend(word_power(h, n));
    word.extend(invert_word(g));
    word.extend(word_power(h, -n));
    if model.evaluate(&word) == id {
        return Err(Error::Rejected("f is the identity".into()));
    }
    let flen = model.word_weight(&word);
    let reps = (2.0 * radius / flen).ceil() as i64 + 1;
    let line = RealizedSubset::line(model, &word, -reps..=reps)?;
    let profile = contraction_scan(metric, &line, radius, &[1.0], d_grid)?;
    Ok(ContractingElement {
        f: model.format_word(&word),
        word,
        drift,
        profile,
    })
}
