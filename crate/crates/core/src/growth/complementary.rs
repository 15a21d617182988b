use crate::groups::{Element, GroupModel};
use crate::metric_space::Key;
use crate::metric_space::{eps_geo, explore_ball, BallOptions, Space, SphereCounts};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// A space with a distinguished orbit G·o.
pub trait OrbitSpace: Space {
    fn base_point(&self) -> Self::Point;

    /// Distance from `p` to the orbit.
    fn orbit_distance(&self, p: &Self::Point) -> f64;

    /// Orbit points within distance `q` of `p`.
    fn orbit_points_near(&self, p: &Self::Point, q: f64) -> Vec<Self::Point>;
}

impl<'a> OrbitSpace for dyn GroupModel + 'a {
    fn base_point(&self) -> Element {
        self.identity()
    }

    fn orbit_distance(&self, _: &Element) -> f64 {
        0.0
    }

    fn orbit_points_near(&self, p: &Element, q: f64) -> Vec<Element> {
        explore_ball(self, p.clone(), q, BallOptions::counting())
            .points()
            .cloned()
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementaryReport {
    pub q: f64,
    pub radius: f64,
    /// Orbit points counted by the shortest qualifying geodesic length, so
    /// the cumulative counts are |Comp_{Q,≤r}|.
    pub counts: SphereCounts,
    /// Distinct orbit points admitting a qualifying geodesic with length in
    /// each bucket.
    pub at_length: Vec<u64>,
    /// Length-0 geodesics only join B_Q(o) to itself.
    pub degenerate: bool,
    /// A state cap was reached; counts are lower bounds.
    pub partial: bool,
}

impl ComplementaryReport {
    pub fn count_at(&self, r: f64) -> u64 {
        let k = (r / self.counts.width + 1e-9).floor() as usize;
        self.at_length.get(k).copied().unwrap_or(0)
    }
}

/// Counts orbit points g·o joined to B_Q(o) by a geodesic whose interior
/// vertices all lie farther than Q from the orbit.
pub fn complementary_count<S>(space: &S, q: f64, radius: f64, width: f64, state_cap: usize) -> ComplementaryReport
where
    S: OrbitSpace + ?Sized,
{
    let o = space.base_point();
    let nb = (radius / width + 1e-9).floor() as usize + 1;
    let starts = explore_ball(space, o, q, BallOptions::counting());
    let mut partial = starts.cap_hit;
    let mut best: FxHashMap<S::Point, usize> = FxHashMap::default();
    let mut per_bucket: Vec<FxHashSet<S::Point>> = vec![FxHashSet::default(); nb];

    for x in starts.points() {
        let full = explore_ball(space, x.clone(), radius, BallOptions::counting().with_cap(state_cap));
        partial |= full.cap_hit;
        let (reached, hit) = restricted_search(space, x, q, radius, state_cap);
        partial |= hit;
        for (y, d) in reached {
            let Some(true_d) = full.dist_of(&y) else { continue };
            if d > true_d + eps_geo(true_d) {
                continue;
            }
            let k = (true_d / width + 1e-9).floor() as usize;
            if k >= nb {
                continue;
            }
            for g in space.orbit_points_near(&y, q) {
                let e = best.entry(g.clone()).or_insert(k);
                *e = (*e).min(k);
                per_bucket[k].insert(g);
            }
        }
    }

    let mut counts = vec![0u64; nb];
    for &k in best.values() {
        counts[k] += 1;
    }
    let counts = SphereCounts::from_counts(counts, width, space.integral_weights());
    ComplementaryReport {
        q,
        radius,
        counts,
        at_length: per_bucket.iter().map(|s| s.len() as u64).collect(),
        degenerate: radius < width,
        partial,
    }
}

/// Dijkstra from `x` that only passes through points farther than `q`
/// from the orbit. Returns every point reached with its restricted distance.
fn restricted_search<S>(space: &S, x: &S::Point, q: f64, radius: f64, cap: usize) -> (Vec<(S::Point, f64)>, bool)
where
    S: OrbitSpace + ?Sized,
{
    let mut dist: FxHashMap<S::Point, f64> = FxHashMap::default();
    let mut done: FxHashSet<S::Point> = FxHashSet::default();
    let mut heap = BinaryHeap::new();
    dist.insert(x.clone(), 0.0);
    heap.push(Reverse((Key(0.0), x.clone())));
    let mut out = Vec::new();
    let mut nbrs = Vec::new();
    let mut hit = false;
    while let Some(Reverse((Key(d), p))) = heap.pop() {
        if !done.insert(p.clone()) {
            continue;
        }
        out.push((p.clone(), d));
        if &p != x && space.orbit_distance(&p) <= q {
            continue;
        }
        nbrs.clear();
        space.neighbors(&p, &mut nbrs);
        for (n, w) in nbrs.drain(..) {
            let nd = d + w;
            if nd > radius + eps_geo(radius) || done.contains(&n) {
                continue;
            }
            if dist.len() >= cap && !dist.contains_key(&n) {
                hit = true;
                continue;
            }
            let e = dist.entry(n.clone()).or_insert(f64::INFINITY);
            if nd < *e {
                *e = nd;
                heap.push(Reverse((Key(nd), n)));
            }
        }
    }
    (out, hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FreeGroup;
    use crate::horoball::{AugmentedSpace, Peripheral};
    use std::sync::Arc;

    #[test]
    fn cocompact_orbit_leaves_no_room() {
        let f2 = FreeGroup::new(2);
        let model: &dyn GroupModel = &f2;
        let rep = complementary_count(model, 1.0, 6.0, 1.0, 1 << 20);
        for k in 2..=6 {
            assert_eq!(rep.at_length[k], 0, "length {k}");
        }
        assert!(!rep.partial);
    }

    #[test]
    fn zero_radius_is_degenerate() {
        let f2 = FreeGroup::new(2);
        let model: &dyn GroupModel = &f2;
        let rep = complementary_count(model, 1.0, 0.0, 1.0, 1 << 20);
        assert!(rep.degenerate);
        assert_eq!(rep.at_length, vec![17]);
    }

    #[test]
    fn horoball_geodesics_escape_the_orbit() {
        let base: Arc<dyn GroupModel> = Arc::new(FreeGroup::new(2));
        let per = Peripheral::new(&*base, &["a"], 1.0, 6).unwrap();
        let aug = AugmentedSpace::new(base, vec![per]);
        let rep = complementary_count(&aug, 1.0, 7.0, 1.0, 1 << 22);
        let cum = rep.counts.cumulative();
        assert!(cum[7] > cum[4], "{cum:?}");
        assert!(rep.at_length[6] > 0);
    }
}
