use super::fit::{estimate_exponent, ExponentEstimate};
use crate::error::Result;
use crate::groups::{Element, GroupModel};
use crate::metric_space::{group_ball, sphere_counts, BallOptions, SphereCounts};
use crate::par;
use rustc_hash::FxHashSet;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub radius: f64,
    /// Conjugators g range over the ball of this radius.
    pub conjugator_radius: f64,
    /// Distinct conjugates g·h·g⁻¹ with norm ≤ radius, bucketed by norm.
    pub counts: SphereCounts,
    pub class_estimate: Option<ExponentEstimate>,
    pub group_radius: f64,
    pub group_estimate: Option<ExponentEstimate>,
    /// δ̂_[h] / δ̂_G.
    pub ratio: Option<f64>,
    /// Set when h is trivial or the class does not grow.
    pub degenerate: bool,
    pub note: String,
}

/// Counts the conjugacy class of `h` by norm. Conjugators are taken from the
/// ball of radius ⌊radius/2⌋ + |h|, which reaches every conjugate of norm
/// ≤ radius in a free group; elsewhere that radius is a heuristic.
pub fn conjugacy_growth(
    model: &dyn GroupModel,
    h: &Element,
    radius: f64,
    group_radius: Option<f64>,
) -> Result<ConjugacyReport> {
    let h_norm = match model.exact_norm(h) {
        Some(n) => n,
        None => group_ball(model, radius, BallOptions::counting())
            .dist_of(h)
            .unwrap_or(radius),
    };
    let conjugator_radius = (radius / 2.0).floor() + h_norm.ceil();
    let conjugators = group_ball(model, conjugator_radius, BallOptions::counting());
    let lookup = if conjugators.points().all(|g| model.exact_norm(g).is_some()) {
        None
    } else {
        Some(group_ball(model, radius, BallOptions::counting()))
    };
    let pts: Vec<&Element> = conjugators.points().collect();
    let conj: Vec<Option<(Element, f64)>> = par::map(&pts, |g| {
        let x = model.multiply(&model.multiply(g, h), &model.inverse(g));
        let n = match &lookup {
            None => model.exact_norm(&x),
            Some(b) => b.dist_of(&x),
        }?;
        (n <= radius + 1e-9).then_some((x, n))
    });
    let mut seen = FxHashSet::default();
    let mut norms = Vec::new();
    for (x, n) in conj.into_iter().flatten() {
        if seen.insert(x) {
            norms.push(n);
        }
    }
    let counts = SphereCounts::from_distances(norms, 1.0, radius, radius, model.integral_weights());
    let class_estimate = estimate_exponent(&counts, None).ok();
    let group_radius = group_radius.unwrap_or(radius.min(12.0));
    let gball = group_ball(model, group_radius, BallOptions::counting());
    let group_estimate = estimate_exponent(&sphere_counts(&gball, 1.0), None).ok();
    let trivial = *h == model.identity();
    let degenerate = trivial || seen.len() <= 1;
    let ratio = match (&class_estimate, &group_estimate) {
        (Some(c), Some(g)) if !degenerate && g.delta.abs() > 1e-9 => Some(c.delta / g.delta),
        _ => None,
    };
    let note = if trivial {
        "h is the identity; its class is {1}".to_string()
    } else if degenerate {
        "conjugacy class does not grow at this scale; ratio undefined".to_string()
    } else {
        format!("finite-scale surrogate at radius {radius}: the asymptotic ratio is not observable")
    };
    Ok(ConjugacyReport {
        radius,
        conjugator_radius,
        counts,
        class_estimate,
        group_radius,
        group_estimate,
        ratio,
        degenerate,
        note,
    })
}
