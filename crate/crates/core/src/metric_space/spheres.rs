use super::{eps_geo, ExploredBall};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::hash::Hash;

/// Bucketed orbit counts. Bucket k holds distances in [k·w, (k+1)·w).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereCounts {
    pub width: f64,
    pub counts: Vec<u64>,
    pub trusted: Vec<bool>,
    /// Distances are integers and the width is an integer.
    pub integral: bool,
}

impl SphereCounts {
    /// Fully trusted counts, e.g. from a closed form.
    pub fn from_counts(counts: Vec<u64>, width: f64, integral: bool) -> Self {
        let trusted = vec![true; counts.len()];
        SphereCounts {
            width,
            counts,
            trusted,
            integral,
        }
    }

    /// Buckets distances up to `radius`; buckets extending past
    /// `complete_radius` are untrusted.
    pub fn from_distances(
        distances: impl IntoIterator<Item = f64>,
        width: f64,
        radius: f64,
        complete_radius: f64,
        integral: bool,
    ) -> Self {
        assert!(width > 0.0, "bucket width must be positive");
        let integral = integral && width.fract() == 0.0;
        let n = (radius / width + 1e-9).floor() as usize + 1;
        let mut counts = vec![0u64; n];
        for d in distances {
            let k = (d / width + 1e-9).floor() as usize;
            if k < n {
                counts[k] += 1;
            }
        }
        let mut s = SphereCounts {
            width,
            counts,
            trusted: Vec::new(),
            integral,
        };
        s.trusted = (0..n)
            .map(|k| s.bucket_max(k) <= complete_radius + eps_geo(complete_radius))
            .collect();
        s
    }

    /// Largest distance bucket k can hold (integral) or its upper edge.
    pub fn bucket_max(&self, k: usize) -> f64 {
        if self.integral {
            k as f64 * self.width + self.width - 1.0
        } else {
            (k + 1) as f64 * self.width
        }
    }

    /// Radius attached to bucket k in fits: its largest distance.
    pub fn radius_of(&self, k: usize) -> f64 {
        self.bucket_max(k)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn cumulative(&self) -> Vec<u64> {
        self.counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }

    /// Number of leading trusted buckets.
    pub fn trusted_len(&self) -> usize {
        self.trusted.iter().take_while(|&&t| t).count()
    }

    /// Pads with zero untrusted buckets up to `len`.
    pub fn extended(mut self, len: usize) -> Self {
        while self.counts.len() < len {
            self.counts.push(0);
            self.trusted.push(false);
        }
        self
    }
}

pub fn sphere_counts<P>(ball: &ExploredBall<P>, width: f64) -> SphereCounts
where
    P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
{
    SphereCounts::from_distances(
        ball.distances().iter().copied(),
        width,
        ball.radius,
        ball.complete_radius,
        ball.integral,
    )
}
