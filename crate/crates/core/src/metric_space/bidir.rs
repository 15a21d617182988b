use super::{eps_geo, GeodesicPath, Key, Space};
use rustc_hash::FxHashMap;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub state_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { state_cap: 5_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DistanceResult<P> {
    Exact {
        distance: f64,
        path: GeodesicPath<P>,
    },
    /// The distance is certainly larger than the cap.
    ExceedsCap,
    /// Search stopped early; the distance is at least `lower_bound`.
    StateCapHit {
        lower_bound: f64,
    },
}

impl<P> DistanceResult<P> {
    pub fn value(&self) -> Option<f64> {
        match self {
            DistanceResult::Exact { distance, .. } => Some(*distance),
            _ => None,
        }
    }
}

struct Side<P> {
    dist: FxHashMap<P, (f64, Option<P>, bool)>,
    heap: BinaryHeap<Reverse<(Key, u64, P)>>,
    seq: u64,
}

impl<P: Clone + Eq + std::hash::Hash + Ord> Side<P> {
    fn new(start: P) -> Self {
        let mut dist = FxHashMap::default();
        dist.insert(start.clone(), (0.0, None, false));
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Key(0.0), 0, start)));
        Side { dist, heap, seq: 1 }
    }

    fn top(&mut self) -> Option<f64> {
        while let Some(Reverse((Key(d), _, p))) = self.heap.peek() {
            match self.dist.get(p) {
                Some(&(best, _, done)) if !done && *d <= best => return Some(*d),
                _ => {
                    self.heap.pop();
                }
            }
        }
        None
    }

    fn chain(&self, from: &P) -> Vec<P> {
        let mut out = vec![from.clone()];
        let mut cur = from.clone();
        while let Some((_, Some(prev), _)) = self.dist.get(&cur) {
            out.push(prev.clone());
            cur = prev.clone();
        }
        out
    }
}

/// Exact distance by bidirectional Dijkstra, certified up to `cap`.
pub fn distance<S: Space + ?Sized>(
    space: &S,
    u: &S::Point,
    v: &S::Point,
    cap: f64,
    opts: SearchOptions,
) -> DistanceResult<S::Point> {
    if u == v {
        return DistanceResult::Exact {
            distance: 0.0,
            path: GeodesicPath {
                vertices: vec![u.clone()],
                length: 0.0,
            },
        };
    }
    let mut sides = [Side::new(u.clone()), Side::new(v.clone())];
    let mut best = f64::INFINITY;
    let mut meet: Option<S::Point> = None;
    let mut out = Vec::new();
    loop {
        let (tf, tb) = (sides[0].top(), sides[1].top());
        let lower = match (tf, tb) {
            (Some(a), Some(b)) => a + b,
            _ => f64::INFINITY,
        };
        if lower >= best - eps_geo(best) || lower > cap + eps_geo(cap) {
            break;
        }
        let states = sides[0].dist.len() + sides[1].dist.len();
        if states > opts.state_cap {
            return DistanceResult::StateCapHit {
                lower_bound: lower.min(best),
            };
        }
        let k = if sides[0].heap.len() <= sides[1].heap.len() {
            0
        } else {
            1
        };
        let Reverse((Key(d), _, p)) = sides[k].heap.pop().expect("nonempty heap");
        sides[k].dist.get_mut(&p).expect("seen").2 = true;
        out.clear();
        space.neighbors(&p, &mut out);
        for (q, w) in out.drain(..) {
            let nd = d + w;
            if nd > cap + eps_geo(cap) {
                continue;
            }
            let side = &mut sides[k];
            let improved = match side.dist.get(&q) {
                Some(&(old, _, done)) => !done && nd < old - eps_geo(nd),
                None => true,
            };
            if improved {
                side.dist.insert(q.clone(), (nd, Some(p.clone()), false));
                side.seq += 1;
                side.heap.push(Reverse((Key(nd), side.seq, q.clone())));
            }
            let mine = sides[k].dist[&q].0;
            if let Some(&(other, _, _)) = sides[1 - k].dist.get(&q) {
                let total = mine + other;
                if total < best - eps_geo(total)
                    || (total <= best + eps_geo(total) && meet.as_ref().is_none_or(|m| q < *m))
                {
                    best = best.min(total);
                    meet = Some(q.clone());
                }
            }
        }
    }
    match meet {
        Some(m) if best <= cap + eps_geo(cap) => {
            let mut vertices = sides[0].chain(&m);
            vertices.reverse();
            let back = sides[1].chain(&m);
            vertices.extend(back.into_iter().skip(1));
            DistanceResult::Exact {
                distance: best,
                path: GeodesicPath { vertices, length: best },
            }
        }
        _ => DistanceResult::ExceedsCap,
    }
}
