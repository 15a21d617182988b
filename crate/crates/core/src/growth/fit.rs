use crate::error::{Error, Result};
use crate::metric_space::SphereCounts;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    CumulativeFit,
    IncrementFit,
}

/// Fitted growth exponent.
///
/// The primary estimate fits log B(r) = δ·r + κ·ln r + c on cumulative
/// counts: the ln r term absorbs polynomial prefactors, which otherwise
/// bias a plain log-linear slope by 0.1 or more at radii ≈ 10.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub delta: f64,
    pub method: FitMethod,
    /// Inclusive radius window.
    pub window: (f64, f64),
    /// RMS residual of the primary fit in log space.
    pub residual: f64,
    pub prefactor_power: f64,
    pub points: usize,
    /// Plain least-squares slope of log cumulative counts.
    pub plain_cumulative: f64,
    /// Same prefactor-corrected fit on log sphere counts (nonzero buckets).
    pub increment: Option<f64>,
    /// |delta − increment|, when the increment fit exists.
    pub discrepancy: Option<f64>,
}

/// Least squares y ≈ Σ βⱼ·fⱼ(x). Returns coefficients and RMS residual.
pub fn least_squares(rows: &[Vec<f64>], ys: &[f64]) -> Option<(Vec<f64>, f64)> {
    let p = rows.first()?.len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &y) in rows.iter().zip(ys) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * y;
        }
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=p {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let beta: Vec<f64> = (0..p).map(|i| a[i][p] / a[i][i]).collect();
    let sse: f64 = rows
        .iter()
        .zip(ys)
        .map(|(row, &y)| {
            let pred: f64 = row.iter().zip(&beta).map(|(x, b)| x * b).sum();
            (y - pred).powi(2)
        })
        .sum();
    Some((beta, (sse / ys.len() as f64).sqrt()))
}

/// Slope, intercept and RMS residual of a straight-line fit.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
    let (b, res) = least_squares(&rows, ys)?;
    Some((b[0], b[1], res))
}

fn prefactor_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, x.ln(), 1.0]).collect();
    let (b, res) = least_squares(&rows, ys)?;
    Some((b[0], b[1], res))
}

/// Estimates δ from trusted buckets inside `window` (inclusive radii). The
/// default window is the top half of the trusted horizon.
pub fn estimate_exponent(counts: &SphereCounts, window: Option<(f64, f64)>) -> Result<ExponentEstimate> {
    let trusted = counts.trusted_len();
    if trusted == 0 {
        return Err(Error::Insufficient("no trusted buckets".into()));
    }
    let horizon = counts.radius_of(trusted - 1);
    let (lo, hi) = window.unwrap_or((horizon / 2.0, horizon));
    let lo = lo.max(1.0);
    let cumulative = counts.cumulative();
    let idx: Vec<usize> = (0..trusted)
        .filter(|&k| {
            let r = counts.radius_of(k);
            r >= lo - 1e-9 && r <= hi + 1e-9
        })
        .collect();
    if idx.len() < 3 {
        return Err(Error::Insufficient(format!(
            "{} trusted buckets in window [{lo}, {hi}], need 3",
            idx.len()
        )));
    }
    let xs: Vec<f64> = idx.iter().map(|&k| counts.radius_of(k)).collect();
    let ys: Vec<f64> = idx.iter().map(|&k| (cumulative[k] as f64).ln()).collect();
    let (delta, kappa, residual) =
        prefactor_fit(&xs, &ys).ok_or_else(|| Error::Insufficient("degenerate fit window".into()))?;
    let (plain, _, _) = fit_line(&xs, &ys).expect("two or more distinct radii");
    let (ixs, iys): (Vec<f64>, Vec<f64>) = idx
        .iter()
        .filter(|&&k| counts.counts[k] > 0)
        .map(|&k| (counts.radius_of(k), (counts.counts[k] as f64).ln()))
        .unzip();
    let increment = if ixs.len() >= 3 {
        prefactor_fit(&ixs, &iys).map(|f| f.0)
    } else {
        None
    };
    Ok(ExponentEstimate {
        delta,
        method: FitMethod::CumulativeFit,
        window: (lo, hi),
        residual,
        prefactor_power: kappa,
        points: xs.len(),
        plain_cumulative: plain,
        increment,
        discrepancy: increment.map(|i| (delta - i).abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts_from_cumulative(cum: &[f64]) -> SphereCounts {
        let mut c = vec![cum[0] as u64];
        c.extend(cum.windows(2).map(|w| (w[1] - w[0]) as u64));
        SphereCounts::from_counts(c, 1.0, true)
    }

    #[test]
    fn synthetic_geometric_counts() {
        for lambda in [2.0f64, 3.0, 10.0] {
            let cum: Vec<f64> = (0..14).map(|n| 5.0 * lambda.powi(n)).collect();
            let e = estimate_exponent(&counts_from_cumulative(&cum), Some((6.0, 13.0))).unwrap();
            assert!((e.delta - lambda.ln()).abs() < 1e-6, "{lambda}: {}", e.delta);
            assert!((e.increment.unwrap() - lambda.ln()).abs() < 1e-6);
            assert!(e.prefactor_power.abs() < 1e-6);
        }
    }

    #[test]
    fn free_group_closed_form() {
        let cum: Vec<f64> = (0..=12).map(|n| 2.0 * 3f64.powi(n) - 1.0).collect();
        let e = estimate_exponent(&counts_from_cumulative(&cum), Some((6.0, 12.0))).unwrap();
        assert!((e.delta - 3f64.ln()).abs() < 0.02);
        assert_eq!(e.points, 7);
    }

    #[test]
    fn integers_have_zero_exponent() {
        let cum: Vec<f64> = (0..=12).map(|n| 2.0 * n as f64 + 1.0).collect();
        let e = estimate_exponent(&counts_from_cumulative(&cum), None).unwrap();
        assert!(e.delta.abs() < 0.01, "{}", e.delta);
    }

    #[test]
    fn insufficient() {
        let s = SphereCounts::from_counts(vec![1, 2], 1.0, true);
        assert!(matches!(estimate_exponent(&s, None), Err(Error::Insufficient(_))));
    }
}
