use super::{eps_geo, Key, SearchOptions, Space};
use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SetDistance {
    /// d(u, T) and the indices of every target attaining it, ascending.
    Exact {
        distance: f64,
        nearest: Vec<usize>,
    },
    ExceedsCap,
    StateCapHit {
        lower_bound: f64,
    },
}

struct Entry {
    dist: f64,
    done: bool,
    labels: SmallVec<[u32; 2]>,
}

struct Side<P> {
    seen: FxHashMap<P, Entry>,
    heap: BinaryHeap<Reverse<(Key, P)>>,
}

impl<P: Clone + Eq + std::hash::Hash + Ord> Side<P> {
    fn top(&mut self) -> Option<f64> {
        while let Some(Reverse((Key(d), p))) = self.heap.peek() {
            let e = &self.seen[p];
            if e.done || *d > e.dist {
                self.heap.pop();
                continue;
            }
            return Some(*d);
        }
        None
    }
}

/// Distance from `u` to a finite target set and all nearest targets, by a
/// forward search from u meeting a multi-source backward search whose
/// states carry the set of targets they are nearest to.
///
/// Every edge between a forward-settled and a backward-settled state is
/// examined, and the search stops only once top_f + top_b exceeds the best
/// meeting value, so each optimal path crosses such an edge and no nearest
/// target is missed.
pub fn nearest_in_set<S: Space + ?Sized>(
    space: &S,
    u: &S::Point,
    targets: &[S::Point],
    cap: f64,
    opts: SearchOptions,
) -> SetDistance {
    let mut sides = [
        Side {
            seen: FxHashMap::default(),
            heap: BinaryHeap::new(),
        },
        Side {
            seen: FxHashMap::default(),
            heap: BinaryHeap::new(),
        },
    ];
    sides[0].seen.insert(
        u.clone(),
        Entry {
            dist: 0.0,
            done: false,
            labels: SmallVec::new(),
        },
    );
    sides[0].heap.push(Reverse((Key(0.0), u.clone())));
    for (i, t) in targets.iter().enumerate() {
        sides[1]
            .seen
            .entry(t.clone())
            .or_insert(Entry {
                dist: 0.0,
                done: false,
                labels: SmallVec::new(),
            })
            .labels
            .push(i as u32);
        sides[1].heap.push(Reverse((Key(0.0), t.clone())));
    }
    let mut best = f64::INFINITY;
    let mut nearest: Vec<u32> = Vec::new();
    let offer = |total: f64, labels: &[u32], best: &mut f64, nearest: &mut Vec<u32>| {
        if total < *best - eps_geo(total) {
            *best = total;
            nearest.clear();
        }
        if total <= *best + eps_geo(*best) {
            nearest.extend_from_slice(labels);
        }
    };
    let mut out = Vec::new();
    loop {
        let (tf, tb) = (sides[0].top(), sides[1].top());
        let lower = match (tf, tb) {
            (Some(a), Some(b)) => a + b,
            // An exhausted side still meets the other at distance ≥ 0.
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::INFINITY,
        };
        if lower > best + eps_geo(best) || lower > cap + eps_geo(cap) || lower.is_infinite() {
            break;
        }
        if sides[0].seen.len() + sides[1].seen.len() > opts.state_cap {
            return SetDistance::StateCapHit {
                lower_bound: lower.min(best),
            };
        }
        let k = match (tf, tb) {
            (Some(_), None) => 0,
            (None, Some(_)) => 1,
            _ if sides[0].heap.len() <= sides[1].heap.len() => 0,
            _ => 1,
        };
        let Reverse((Key(d), p)) = sides[k].heap.pop().expect("nonempty heap");
        let entry = sides[k].seen.get_mut(&p).expect("seen");
        entry.done = true;
        let labels = entry.labels.clone();
        if let Some(o) = sides[1 - k].seen.get(&p).filter(|o| o.done) {
            let l = if k == 1 { &labels } else { &o.labels };
            offer(d + o.dist, l, &mut best, &mut nearest);
        }
        out.clear();
        space.neighbors(&p, &mut out);
        for (q, w) in out.drain(..) {
            let nd = d + w;
            if let Some(o) = sides[1 - k].seen.get(&q).filter(|o| o.done) {
                let l = if k == 1 { &labels } else { &o.labels };
                offer(nd + o.dist, l, &mut best, &mut nearest);
            }
            if nd > cap + eps_geo(cap) {
                continue;
            }
            let side = &mut sides[k];
            match side.seen.get_mut(&q) {
                Some(e) if e.done => {}
                Some(e) if nd < e.dist - eps_geo(nd) => {
                    e.dist = nd;
                    e.labels = labels.clone();
                    side.heap.push(Reverse((Key(nd), q)));
                }
                Some(e) if nd <= e.dist + eps_geo(nd) => {
                    for &l in &labels {
                        if !e.labels.contains(&l) {
                            e.labels.push(l);
                        }
                    }
                }
                Some(_) => {}
                None => {
                    side.seen.insert(
                        q.clone(),
                        Entry {
                            dist: nd,
                            done: false,
                            labels: labels.clone(),
                        },
                    );
                    side.heap.push(Reverse((Key(nd), q)));
                }
            }
        }
    }
    if best <= cap + eps_geo(cap) && best.is_finite() {
        let mut nearest: Vec<usize> = nearest.into_iter().map(|l| l as usize).collect();
        nearest.sort_unstable();
        nearest.dedup();
        SetDistance::Exact {
            distance: best,
            nearest,
        }
    } else {
        SetDistance::ExceedsCap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_space::ExplicitGraph;

    #[test]
    fn path_graph_ties() {
        let g = ExplicitGraph::path(9);
        let r = nearest_in_set(&g, &4, &[0, 2, 6, 8], 100.0, SearchOptions::default());
        assert_eq!(
            r,
            SetDistance::Exact {
                distance: 2.0,
                nearest: vec![1, 2]
            }
        );
        let r = nearest_in_set(&g, &4, &[0, 8], 3.0, SearchOptions::default());
        assert_eq!(r, SetDistance::ExceedsCap);
        let r = nearest_in_set(&g, &4, &[4, 5], 3.0, SearchOptions::default());
        assert_eq!(
            r,
            SetDistance::Exact {
                distance: 0.0,
                nearest: vec![0]
            }
        );
    }

    #[test]
    fn weighted_edges_are_crossed() {
        let mut g = ExplicitGraph::new(5);
        g.add_edge(0, 1, 6.0);
        g.add_edge(0, 2, 3.0);
        g.add_edge(2, 3, 3.0);
        g.add_edge(3, 1, 1.0);
        g.add_edge(0, 4, 6.0);
        let r = nearest_in_set(&g, &0, &[1, 4], 100.0, SearchOptions::default());
        assert_eq!(
            r,
            SetDistance::Exact {
                distance: 6.0,
                nearest: vec![0, 1]
            }
        );
    }
}
