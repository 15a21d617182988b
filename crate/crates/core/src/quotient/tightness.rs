use super::{classify, Quotient};
use crate::error::Result;
use crate::growth::{estimate_exponent, ExponentEstimate};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    pub quotient: String,
    pub radius: f64,
    pub group: ExponentEstimate,
    pub quotient_fit: ExponentEstimate,
    /// δ̂_G − δ̂_Q.
    pub gap: f64,
    pub combined_residual: f64,
    pub verdict: String,
}

/// Fits both exponents on the same window of one enumeration. The verdict
/// describes this scale only.
pub fn growth_tightness_report(
    q: &Quotient,
    radius: f64,
    window: Option<(f64, f64)>,
    state_cap: usize,
) -> Result<TightnessReport> {
    let c = classify(q, radius, state_cap)?;
    let width = if c.ball.integral { 1.0 } else { 0.25 };
    let group = estimate_exponent(&c.base_counts(width), window)?;
    let quotient_fit = estimate_exponent(&c.quotient_counts(width), Some(group.window))?;
    let gap = group.delta - quotient_fit.delta;
    let combined_residual = group.residual.hypot(quotient_fit.residual);
    let verdict = if gap > combined_residual {
        format!(
            "finite-scale gap {gap:.4} on radii {}-{}",
            group.window.0, group.window.1
        )
    } else {
        format!("no gap beyond residual on radii {}-{}", group.window.0, group.window.1)
    };
    Ok(TightnessReport {
        quotient: q.label(),
        radius,
        group,
        quotient_fit,
        gap,
        combined_residual,
        verdict,
    })
}
