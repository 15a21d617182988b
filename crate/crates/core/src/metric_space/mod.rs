//! Lazily explored weighted-graph metric engine.

mod bidir;
mod export;
mod geodesic;
mod graph;
mod nearest;
mod spheres;

pub use bidir::{distance, DistanceResult, SearchOptions};
pub use export::{ball_csv, format_number};
pub use geodesic::{count_geodesics, for_each_geodesic, geodesic_dag, GeodesicEnumeration, GeodesicPath};
pub use graph::{ExplicitGraph, IntegerLine};
pub use nearest::{nearest_in_set, SetDistance};
pub use spheres::{sphere_counts, SphereCounts};

use crate::groups::{Element, GroupModel};
use crate::par;
use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use smallvec::SmallVec;
use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Debug;
use std::hash::Hash;

/// Tolerance for comparing path lengths: 10⁻⁹·(1 + length).
pub fn eps_geo(length: f64) -> f64 {
    1e-9 * (1.0 + length.abs())
}

/// A graph given by a neighbour oracle. Edges must be symmetric with equal
/// weights in both directions.
pub trait Space: Sync {
    type Point: Clone + Eq + Hash + Ord + Send + Sync + Debug;

    fn neighbors(&self, p: &Self::Point, out: &mut Vec<(Self::Point, f64)>);

    /// True when every edge weight is a positive integer.
    fn integral_weights(&self) -> bool {
        false
    }

    fn describe(&self, p: &Self::Point) -> String {
        format!("{p:?}")
    }
}

impl<'a> Space for dyn GroupModel + 'a {
    type Point = Element;

    fn neighbors(&self, p: &Element, out: &mut Vec<(Element, f64)>) {
        GroupModel::neighbors(self, p, out)
    }

    fn integral_weights(&self) -> bool {
        GroupModel::integral_weights(self)
    }

    fn describe(&self, p: &Element) -> String {
        self.format(p)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    /// Maximum number of stored points.
    pub state_cap: usize,
    /// Keep the geodesic predecessor DAG. Growth counting turns this off.
    pub record_preds: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            state_cap: 50_000_000,
            record_preds: true,
        }
    }
}

impl BallOptions {
    pub fn counting() -> Self {
        BallOptions {
            record_preds: false,
            ..Self::default()
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }
}

type Preds = SmallVec<[(u32, f64); 2]>;

/// A frozen ball: points in canonical order (distance, then point order),
/// exact distances and the geodesic predecessor DAG.
#[derive(Debug, Clone)]
pub struct ExploredBall<P: Hash + Eq> {
    pub radius: f64,
    /// Largest r such that every point at distance ≤ r is present.
    pub complete_radius: f64,
    pub cap_hit: bool,
    pub integral: bool,
    points: IndexSet<P, FxBuildHasher>,
    dist: Vec<f64>,
    pred_start: Vec<u32>,
    pred_list: Vec<(u32, f64)>,
}

impl<P: Clone + Eq + Hash + Ord + Send + Sync + Debug> ExploredBall<P> {
    pub fn origin(&self) -> &P {
        &self.points[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &P {
        &self.points[i]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &P> {
        self.points.iter()
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.points.get_index_of(p)
    }

    pub fn contains(&self, p: &P) -> bool {
        self.points.contains(p)
    }

    pub fn dist(&self, i: usize) -> f64 {
        self.dist[i]
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    pub fn dist_of(&self, p: &P) -> Option<f64> {
        self.index_of(p).map(|i| self.dist[i])
    }

    pub fn has_preds(&self) -> bool {
        !self.pred_start.is_empty()
    }

    /// Geodesic predecessors of point `i`: (index, edge weight).
    pub fn preds(&self, i: usize) -> &[(u32, f64)] {
        assert!(self.has_preds(), "ball was explored without predecessors");
        let (a, b) = (self.pred_start[i] as usize, self.pred_start[i + 1] as usize);
        &self.pred_list[a..b]
    }

    /// Indices of the points at distance ≤ r.
    pub fn within(&self, r: f64) -> std::ops::Range<usize> {
        let end = self.dist.partition_point(|&d| d <= r + eps_geo(r));
        0..end
    }
}

/// Explores the ball of the given radius around `origin`.
///
/// Integer-weight spaces use a layered search whose per-layer neighbour
/// expansion runs in parallel and is merged sequentially, so the result is
/// deterministic. Real weights use Dijkstra with ε_geo ties.
pub fn explore_ball<S: Space + ?Sized>(
    space: &S,
    origin: S::Point,
    radius: f64,
    opts: BallOptions,
) -> ExploredBall<S::Point> {
    assert!(radius >= 0.0, "radius must be nonnegative");
    let raw = if space.integral_weights() {
        explore_layered(space, origin, radius, opts)
    } else {
        explore_dijkstra(space, origin, radius, opts)
    };
    raw.freeze(radius, space.integral_weights(), opts.record_preds)
}

struct Raw<P> {
    points: IndexSet<P, FxBuildHasher>,
    dist: Vec<f64>,
    preds: Vec<Preds>,
    keep: Vec<bool>,
    complete_radius: f64,
    cap_hit: bool,
}

fn explore_layered<S: Space + ?Sized>(space: &S, origin: S::Point, radius: f64, opts: BallOptions) -> Raw<S::Point> {
    let r = (radius + 1e-9).floor() as usize;
    let mut points: IndexSet<S::Point, FxBuildHasher> = IndexSet::default();
    points.insert(origin);
    let mut dist: Vec<usize> = vec![0];
    let mut preds: Vec<Preds> = vec![Preds::new()];
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); r + 1];
    buckets[0].push(0);
    let mut complete = r;
    let mut cap_hit = false;
    'layers: for d in 0..r {
        let frontier: Vec<u32> = std::mem::take(&mut buckets[d])
            .into_iter()
            .filter(|&i| dist[i as usize] == d)
            .collect();
        let expansions = par::map(&frontier, |&i| {
            let mut out = Vec::new();
            space.neighbors(&points[i as usize], &mut out);
            out
        });
        for (&i, exps) in frontier.iter().zip(expansions) {
            for (q, w) in exps {
                debug_assert!(w >= 1.0 && w.fract() == 0.0, "non-integral weight {w}");
                let nd = d + w as usize;
                if nd > r {
                    continue;
                }
                match points.get_index_of(&q) {
                    Some(j) => {
                        if dist[j] > nd {
                            dist[j] = nd;
                            preds[j].clear();
                            preds[j].push((i, w));
                            buckets[nd].push(j as u32);
                        } else if dist[j] == nd && opts.record_preds && !preds[j].contains(&(i, w)) {
                            preds[j].push((i, w));
                        }
                    }
                    None => {
                        if points.len() >= opts.state_cap {
                            cap_hit = true;
                            complete = d;
                            break 'layers;
                        }
                        let j = points.len();
                        points.insert(q);
                        dist.push(nd);
                        let mut p = Preds::new();
                        p.push((i, w));
                        preds.push(p);
                        buckets[nd].push(j as u32);
                    }
                }
            }
        }
    }
    let keep = dist.iter().map(|&d| d <= complete).collect();
    Raw {
        points,
        dist: dist.into_iter().map(|d| d as f64).collect(),
        preds,
        keep,
        complete_radius: if cap_hit { complete as f64 } else { radius },
        cap_hit,
    }
}

/// Heap key ordered by `total_cmp`, so equality and order agree.
pub(crate) struct Key(pub(crate) f64);
impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn explore_dijkstra<S: Space + ?Sized>(space: &S, origin: S::Point, radius: f64, opts: BallOptions) -> Raw<S::Point> {
    let limit = radius + eps_geo(radius);
    let mut points: IndexSet<S::Point, FxBuildHasher> = IndexSet::default();
    points.insert(origin);
    let mut dist = vec![0.0];
    let mut done = vec![false];
    let mut preds: Vec<Preds> = vec![Preds::new()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Key(0.0), 0u32)));
    let mut out = Vec::new();
    let mut last = 0.0f64;
    let mut below_last = 0.0f64;
    let mut cap_hit = false;
    'search: while let Some(Reverse((Key(d), i))) = heap.pop() {
        let i = i as usize;
        if done[i] || d > dist[i] {
            continue;
        }
        done[i] = true;
        if d > last + eps_geo(last) {
            below_last = last;
            last = d;
        }
        out.clear();
        space.neighbors(&points[i], &mut out);
        for (q, w) in out.drain(..) {
            debug_assert!(w > 0.0);
            let nd = d + w;
            if nd > limit {
                continue;
            }
            match points.get_index_of(&q) {
                Some(j) => {
                    if done[j] {
                        continue;
                    }
                    let tol = eps_geo(nd);
                    if nd < dist[j] - tol {
                        dist[j] = nd;
                        preds[j].clear();
                        preds[j].push((i as u32, w));
                        heap.push(Reverse((Key(nd), j as u32)));
                    } else if nd <= dist[j] + tol {
                        if opts.record_preds {
                            preds[j].push((i as u32, w));
                        }
                        if nd < dist[j] {
                            dist[j] = nd;
                            heap.push(Reverse((Key(nd), j as u32)));
                        }
                    }
                }
                None => {
                    if points.len() >= opts.state_cap {
                        cap_hit = true;
                        break 'search;
                    }
                    let j = points.len();
                    points.insert(q);
                    dist.push(nd);
                    done.push(false);
                    let mut p = Preds::new();
                    p.push((i as u32, w));
                    preds.push(p);
                    heap.push(Reverse((Key(nd), j as u32)));
                }
            }
        }
    }
    let complete_radius = if cap_hit { below_last } else { radius };
    let keep = dist
        .iter()
        .zip(&done)
        .map(|(&d, &f)| f && (!cap_hit || d <= complete_radius + eps_geo(complete_radius)))
        .collect();
    Raw {
        points,
        dist,
        preds,
        keep,
        complete_radius,
        cap_hit,
    }
}

impl<P: Clone + Eq + Hash + Ord + Send + Sync + Debug> Raw<P> {
    /// Drops truncated points and renumbers canonically.
    fn freeze(self, radius: f64, integral: bool, record_preds: bool) -> ExploredBall<P> {
        let Raw {
            points,
            dist,
            preds,
            keep,
            complete_radius,
            cap_hit,
        } = self;
        let mut order: Vec<u32> = (0..points.len() as u32).filter(|&i| keep[i as usize]).collect();
        par::sort_unstable_by(&mut order, |&a, &b| {
            dist[a as usize]
                .total_cmp(&dist[b as usize])
                .then_with(|| points[a as usize].cmp(&points[b as usize]))
        });
        let mut new_index = vec![u32::MAX; points.len()];
        for (n, &o) in order.iter().enumerate() {
            new_index[o as usize] = n as u32;
        }
        let mut slots: Vec<Option<P>> = points.into_iter().map(Some).collect();
        let new_points: IndexSet<P, FxBuildHasher> = order
            .iter()
            .map(|&o| slots[o as usize].take().expect("each point moved once"))
            .collect();
        let new_dist: Vec<f64> = order.iter().map(|&o| dist[o as usize]).collect();
        let (pred_start, pred_list) = if record_preds {
            let mut start = Vec::with_capacity(order.len() + 1);
            let mut list = Vec::new();
            for &o in &order {
                start.push(list.len() as u32);
                let mut ps: Vec<(u32, f64)> = preds[o as usize]
                    .iter()
                    .filter(|(p, _)| new_index[*p as usize] != u32::MAX)
                    .map(|&(p, w)| (new_index[p as usize], w))
                    .collect();
                ps.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
                ps.dedup();
                list.extend(ps);
            }
            start.push(list.len() as u32);
            (start, list)
        } else {
            (Vec::new(), Vec::new())
        };
        ExploredBall {
            radius,
            complete_radius,
            cap_hit,
            integral,
            points: new_points,
            dist: new_dist,
            pred_start,
            pred_list,
        }
    }
}

/// Ball in a group's Cayley graph around the identity.
pub fn group_ball(model: &dyn GroupModel, radius: f64, opts: BallOptions) -> ExploredBall<Element> {
    explore_ball(model, model.identity(), radius, opts)
}

#[cfg(test)]
mod tests;
