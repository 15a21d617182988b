use crate::error::{Error, Result};
use crate::growth::fit_line;
use crate::metric_space::{distance, eps_geo, DistanceResult, Key, SearchOptions, Space, SphereCounts};
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Layered graph over a base: vertices (v, n) with 0 ≤ n ≤ depth, vertical
/// edges of weight 1, horizontal edges at depth n of weight e^{−an} times the
/// base weight.
#[derive(Clone, Debug)]
pub struct HoroballSpace<B> {
    pub base: B,
    pub a: f64,
    pub depth: u32,
}

/// Depth at which increasing the truncation no longer changes distances
/// between base points at most `max_base` apart.
pub fn default_depth(a: f64, max_base: f64) -> u32 {
    ((max_base.max(1.0).ln() / a).ceil() as u32) + 2
}

/// min over 0 ≤ m ≤ depth of 2m + d·e^{−am}: descend, cross, ascend.
/// Returns the distance and the optimal m.
pub fn depth_oracle(d_base: f64, a: f64, depth: u32) -> (f64, u32) {
    (0..=depth)
        .map(|m| (2.0 * m as f64 + d_base * (-a * m as f64).exp(), m))
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .expect("nonempty range")
}

impl<B: Space> HoroballSpace<B> {
    pub fn new(base: B, a: f64, depth: u32) -> Self {
        assert!(a > 0.0, "horoball parameter must be positive");
        HoroballSpace { base, a, depth }
    }
}

impl<B: Space> Space for HoroballSpace<B> {
    type Point = (B::Point, u32);

    fn neighbors(&self, p: &Self::Point, out: &mut Vec<(Self::Point, f64)>) {
        let (v, n) = p;
        if *n > 0 {
            out.push(((v.clone(), n - 1), 1.0));
        }
        if *n < self.depth {
            out.push(((v.clone(), n + 1), 1.0));
        }
        let scale = (-self.a * *n as f64).exp();
        let mut base = Vec::new();
        self.base.neighbors(v, &mut base);
        out.extend(base.into_iter().map(|(w, bw)| ((w, *n), bw * scale)));
    }

    fn describe(&self, p: &Self::Point) -> String {
        format!("{}@{}", self.base.describe(&p.0), p.1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoroDistance {
    pub distance: f64,
    /// The optimal path found touches the truncation depth.
    pub truncated: bool,
    pub max_depth_used: u32,
}

/// Exact distance between depth-0 vertices within the depth truncation.
pub fn horoball_distance<B: Space>(space: &HoroballSpace<B>, v: &B::Point, w: &B::Point) -> HoroDistance {
    let r = distance(
        space,
        &(v.clone(), 0),
        &(w.clone(), 0),
        f64::INFINITY,
        SearchOptions::default(),
    );
    match r {
        DistanceResult::Exact { distance, path } => {
            let max_depth_used = path.vertices.iter().map(|p| p.1).max().unwrap_or(0);
            HoroDistance {
                distance,
                truncated: max_depth_used >= space.depth && space.depth > 0,
                max_depth_used,
            }
        }
        other => panic!("unbounded search failed: {other:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogProfile {
    /// Fit d_horo ≈ slope·ln(d_base) + intercept.
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// (d_base, d_horo, truncated) per pair.
    pub samples: Vec<(f64, f64, bool)>,
}

/// Least-squares fit of horoball distance against the log of base distance.
pub fn fit_log_profile<B: Space>(space: &HoroballSpace<B>, pairs: &[(B::Point, B::Point)]) -> Result<LogProfile> {
    if pairs.len() < 10 {
        return Err(Error::Insufficient(format!("{} pairs, need 10", pairs.len())));
    }
    let samples: Vec<(f64, f64, bool)> = crate::par::map(pairs, |(v, w)| {
        let db = distance(&space.base, v, w, f64::INFINITY, SearchOptions::default())
            .value()
            .expect("base distance");
        let h = horoball_distance(space, v, w);
        (db, h.distance, h.truncated)
    });
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if lo <= 0.0 || hi < 10.0 * lo {
        return Err(Error::Insufficient(
            "base distances must be positive and span a decade".into(),
        ));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (slope, intercept, residual) =
        fit_line(&xs, &ys).ok_or_else(|| Error::Insufficient("degenerate sample".into()))?;
    Ok(LogProfile {
        slope,
        intercept,
        residual,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoroSpheres {
    pub counts: SphereCounts,
    /// Some counted point needed the truncation depth.
    pub truncated: bool,
    pub explored: usize,
}

/// Counts depth-0 vertices by horoball distance from (origin, 0).
pub fn horoball_sphere_counts<B: Space>(
    space: &HoroballSpace<B>,
    origin: &B::Point,
    radius: f64,
    width: f64,
) -> HoroSpheres {
    let found = depth_pruned_search(space, (origin.clone(), 0), radius, |p| p.1, space.depth, usize::MAX);
    HoroSpheres {
        counts: SphereCounts::from_distances(found.surface.iter().map(|p| p.1), width, radius, radius, false),
        truncated: found.truncated,
        explored: found.explored,
    }
}

pub(crate) struct PrunedSearch<P> {
    /// Depth-0 points with their distances, in settling order.
    pub surface: Vec<(P, f64)>,
    pub truncated: bool,
    pub explored: usize,
    pub cap_hit: bool,
    /// Every depth-0 point at distance ≤ this is in `surface`.
    pub complete_radius: f64,
}

/// Dijkstra that finds every depth-0 point within `radius`. A state with
/// distance + depth > radius can never climb back to depth 0 in budget, so
/// it is pruned.
pub(crate) fn depth_pruned_search<S: Space + ?Sized>(
    space: &S,
    origin: S::Point,
    radius: f64,
    depth_of: impl Fn(&S::Point) -> u32,
    max_depth: u32,
    state_cap: usize,
) -> PrunedSearch<S::Point> {
    let limit = radius + eps_geo(radius);
    let mut dist: FxHashMap<S::Point, f64> = FxHashMap::default();
    let mut heap = BinaryHeap::new();
    dist.insert(origin.clone(), 0.0);
    heap.push(Reverse((Key(0.0), origin)));
    let mut surface = Vec::new();
    let mut truncated = false;
    let mut cap_hit = false;
    let mut complete_radius = radius;
    let mut out = Vec::new();
    while let Some(Reverse((Key(d), p))) = heap.pop() {
        if dist.get(&p).is_some_and(|&best| d > best) {
            continue;
        }
        let depth = depth_of(&p);
        if depth == 0 {
            surface.push((p.clone(), d));
        } else if depth == max_depth {
            truncated = true;
        }
        out.clear();
        space.neighbors(&p, &mut out);
        for (q, w) in out.drain(..) {
            let nd = d + w;
            if nd + depth_of(&q) as f64 > limit {
                continue;
            }
            let better = dist.get(&q).is_none_or(|&old| nd < old - eps_geo(nd));
            if better {
                if dist.len() >= state_cap && !dist.contains_key(&q) {
                    if !cap_hit {
                        complete_radius = d;
                    }
                    cap_hit = true;
                    continue;
                }
                dist.insert(q.clone(), nd);
                heap.push(Reverse((Key(nd), q)));
            }
        }
    }
    PrunedSearch {
        surface,
        truncated,
        explored: dist.len(),
        cap_hit,
        complete_radius,
    }
}
