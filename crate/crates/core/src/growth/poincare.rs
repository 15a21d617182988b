use super::fit::fit_line;
use crate::metric_space::SphereCounts;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceVerdict {
    DivergesLike,
    ConvergesLike,
    Undetermined,
}

/// Partial Poincaré sums Θ(s) = Σ e^{−s|a|} at one exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareEvaluation {
    pub s: f64,
    pub max_radius: f64,
    /// (radius, Θ partial sum up to that radius), nondecreasing.
    pub partial_sums: Vec<(f64, f64)>,
    pub theta: f64,
    /// Θ′(s) = Σₙ #B(n)·e^{−sn} at the same truncation.
    pub theta_prime: f64,
    /// Fitted log-ratio of successive terms per unit radius over the tail.
    pub tail_log_ratio: Option<f64>,
    pub verdict: DivergenceVerdict,
    /// Always "finite-scale verdict": the tail test cannot see the limit.
    pub verdict_label: String,
}

impl PoincareEvaluation {
    /// Θ recomputed from Θ′ via Θ = Θ′(1 − e^{−sw}) + #B(N)·e^{−s(N+1)w}, the
    /// finite-truncation form of Θ = Θ′(1 − e^{−s}).
    pub fn theta_from_prime(&self, counts: &SphereCounts) -> f64 {
        let n = self.partial_sums.len();
        if n == 0 {
            return 0.0;
        }
        let w = counts.width;
        let b_n = counts.cumulative()[n - 1] as f64;
        self.theta_prime * (1.0 - (-self.s * w).exp()) + b_n * (-self.s * n as f64 * w).exp()
    }
}

/// Evaluates Θ over trusted buckets with radius ≤ `max_radius`. Bucket k is
/// weighted at radius k·w. The tail classification compares the fitted
/// decay of the terms with `tol`.
pub fn poincare_partial(counts: &SphereCounts, s: f64, max_radius: f64) -> PoincareEvaluation {
    poincare_partial_with(counts, s, max_radius, 0.05)
}

pub fn poincare_partial_with(counts: &SphereCounts, s: f64, max_radius: f64, tol: f64) -> PoincareEvaluation {
    assert!(s >= 0.0, "s must be nonnegative");
    let w = counts.width;
    let n = counts.trusted_len().min(((max_radius / w) + 1e-9).floor() as usize + 1);
    let mut sum = 0.0;
    let mut partial_sums = Vec::with_capacity(n);
    let mut theta_prime = 0.0;
    let cumulative = counts.cumulative();
    for k in 0..n {
        let x = k as f64 * w;
        sum += counts.counts[k] as f64 * (-s * x).exp();
        theta_prime += cumulative[k] as f64 * (-s * x).exp();
        partial_sums.push((x, sum));
    }
    let tail: Vec<(f64, f64)> = (n / 2..n)
        .filter(|&k| counts.counts[k] > 0)
        .map(|k| {
            let x = k as f64 * w;
            (x, (counts.counts[k] as f64).ln() - s * x)
        })
        .collect();
    let tail_log_ratio = if tail.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = tail.into_iter().unzip();
        fit_line(&xs, &ys).map(|f| f.0)
    } else {
        None
    };
    let verdict = match tail_log_ratio {
        Some(r) if r > -tol => DivergenceVerdict::DivergesLike,
        Some(_) => DivergenceVerdict::ConvergesLike,
        None => DivergenceVerdict::Undetermined,
    };
    PoincareEvaluation {
        s,
        max_radius,
        partial_sums,
        theta: sum,
        theta_prime,
        tail_log_ratio,
        verdict,
        verdict_label: "finite-scale verdict".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionCertificate {
    pub certified: bool,
    /// First radius at which the partial sum exceeded the threshold.
    pub radius: Option<f64>,
    pub threshold: f64,
    pub partial_sum: f64,
}

/// Finite certificate for Θ_A(δ_A) > exp(|h|·δ_A): true once a partial sum
/// exceeds the threshold. False means "not yet certified", never "fails".
pub fn growth_criterion_check(a_counts: &SphereCounts, h_norm: f64, delta_a: f64) -> CriterionCertificate {
    let threshold = (h_norm * delta_a).exp();
    let mut sum = 0.0;
    for k in 0..a_counts.trusted_len() {
        let x = k as f64 * a_counts.width;
        sum += a_counts.counts[k] as f64 * (-delta_a * x).exp();
        if sum > threshold {
            return CriterionCertificate {
                certified: true,
                radius: Some(a_counts.radius_of(k)),
                threshold,
                partial_sum: sum,
            };
        }
    }
    CriterionCertificate {
        certified: false,
        radius: None,
        threshold,
        partial_sum: sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2(n: usize) -> SphereCounts {
        let c = (0..=n)
            .map(|k| if k == 0 { 1 } else { 4 * 3u64.pow(k as u32 - 1) })
            .collect();
        SphereCounts::from_counts(c, 1.0, true)
    }

    #[test]
    fn free_group_at_critical_exponent() {
        let s = 3f64.ln();
        let p = poincare_partial(&free2(12), s, 12.0);
        for k in 1..=12 {
            let term = p.partial_sums[k].1 - p.partial_sums[k - 1].1;
            assert!((term - 4.0 / 3.0).abs() < 1e-9);
        }
        assert_eq!(p.verdict, DivergenceVerdict::DivergesLike);
        let q = poincare_partial(&free2(12), s + 0.5, 12.0);
        assert_eq!(q.verdict, DivergenceVerdict::ConvergesLike);
    }

    #[test]
    fn theta_prime_identity() {
        let c = free2(10);
        for s in [0.3, 1.0, 3f64.ln(), 2.5] {
            let p = poincare_partial(&c, s, 10.0);
            let t = p.theta_from_prime(&c);
            assert!((t - p.theta).abs() <= 1e-9 * p.theta);
        }
    }

    #[test]
    fn empty_counts() {
        let c = SphereCounts::from_counts(vec![], 1.0, true);
        let p = poincare_partial(&c, 1.0, 10.0);
        assert_eq!(p.theta, 0.0);
        assert_eq!(p.verdict, DivergenceVerdict::Undetermined);
    }

    #[test]
    fn criterion_examples() {
        let c = free2(12);
        let cert = growth_criterion_check(&c, 2.0, 3f64.ln());
        assert!(cert.certified);
        assert!(cert.radius.unwrap() <= 12.0);
        let single = SphereCounts::from_counts(vec![1, 0, 0, 0], 1.0, true);
        assert!(!growth_criterion_check(&single, 0.0, 1.0).certified);
        let two = SphereCounts::from_counts(vec![1, 1], 1.0, true);
        assert!(growth_criterion_check(&two, 0.0, 0.0).certified);
    }
}
