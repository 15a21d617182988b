use super::{AxisFamily, ProjectionTable};
use crate::error::{Error, Result};
use crate::metric_space::{explore_ball, for_each_geodesic, format_number, BallOptions, ExplicitGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct KEdgeBundle {
    pub x: usize,
    pub y: usize,
    /// Number of length-K edges joining π_X(Y) to π_Y(X).
    pub edges: usize,
    pub flagged: bool,
}

/// Disjoint union of the realized axes, with consecutive axis points joined
/// at their native distance and a length-K edge bundle between X and Y
/// whenever no Z has d_Z(X, Y) > C.
#[derive(Clone, Debug)]
pub struct QuasiTree {
    pub graph: ExplicitGraph,
    /// (member, parameter) of each vertex.
    pub vertices: Vec<(usize, i64)>,
    pub bundles: Vec<KEdgeBundle>,
    pub c: f64,
    pub k: f64,
    pub components: usize,
    pub connected: bool,
    /// Bundles that failed re-verification against the table.
    pub unsound: usize,
}

pub fn build_quasitree(family: &AxisFamily, table: &ProjectionTable, c: f64, k: f64) -> Result<QuasiTree> {
    if !(c > 0.0 && k > 0.0) {
        return Err(Error::Invalid("C and K must be positive".into()));
    }
    let n = family.len();
    let mut vertices = Vec::new();
    let mut first = Vec::with_capacity(n);
    for (i, m) in family.members.iter().enumerate() {
        first.push(vertices.len());
        vertices.extend((m.lo..=m.hi).map(|p| (i, p)));
    }
    let vertex = |i: usize, p: i64| (first[i] as i64 + p - family.members[i].lo) as u32;
    let mut graph = ExplicitGraph::new(vertices.len());
    for (i, m) in family.members.iter().enumerate() {
        for p in m.lo..m.hi {
            graph.add_edge(vertex(i, p), vertex(i, p + 1), family.span(p, p + 1));
        }
    }
    let blocked =
        |x: usize, y: usize| (0..n).any(|z| z != x && z != y && table.d_pi(z, x, y).is_some_and(|(d, _)| d > c));
    let mut bundles = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if blocked(x, y) {
                continue;
            }
            let (a, b) = (table.entry(x, y).unwrap(), table.entry(y, x).unwrap());
            let mut edges = 0;
            for p in a.lo..=a.hi {
                for q in b.lo..=b.hi {
                    graph.add_edge(vertex(x, p), vertex(y, q), k);
                    edges += 1;
                }
            }
            bundles.push(KEdgeBundle {
                x,
                y,
                edges,
                flagged: a.flagged || b.flagged,
            });
        }
    }
    let unsound = bundles.iter().filter(|b| blocked(b.x, b.y)).count();
    let components = components(&graph);
    Ok(QuasiTree {
        graph,
        vertices,
        bundles,
        c,
        k,
        components,
        connected: components <= 1,
        unsound,
    })
}

impl QuasiTree {
    /// Weighted edge list: `u,v,weight,kind`, vertices as member:parameter.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,weight,kind\n");
        for (u, v, w) in self.graph.edges() {
            let (a, b) = (self.vertices[u as usize], self.vertices[v as usize]);
            let kind = if a.0 == b.0 { "axis" } else { "k" };
            let _ = writeln!(out, "{}:{},{}:{},{},{kind}", a.0, a.1, b.0, b.1, format_number(w));
        }
        out
    }
}

fn components(graph: &ExplicitGraph) -> usize {
    let mut seen = vec![false; graph.len()];
    let mut count = 0;
    for s in 0..graph.len() {
        if !seen[s] {
            count += 1;
            reach(graph, s as u32, &|_| false, &mut seen);
        }
    }
    count
}

/// Marks everything reachable from `s` without entering a blocked vertex.
fn reach(graph: &ExplicitGraph, s: u32, blocked: &dyn Fn(u32) -> bool, seen: &mut [bool]) {
    let mut stack = vec![s];
    seen[s as usize] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in graph.neighbors_of(u) {
            if !seen[v as usize] && !blocked(v) {
                seen[v as usize] = true;
                stack.push(v);
            }
        }
    }
}

/// Distinct connected pairs drawn with a seeded generator.
pub fn sample_pairs(graph: &ExplicitGraph, count: usize, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = graph.len() as u32;
    let ids: Vec<u32> = (0..n).collect();
    let mut out = Vec::with_capacity(count);
    if n < 2 {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let pair: Vec<u32> = ids.choose_multiple(&mut rng, 2).copied().collect();
        let mut seen = vec![false; n as usize];
        reach(graph, pair[0], &|_| false, &mut seen);
        if seen[pair[1] as usize] {
            out.push((pair[0], pair[1]));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BottleneckSample {
    pub x: u32,
    pub y: u32,
    pub length: f64,
    pub midpoint: u32,
    /// Least Δ such that every x–y path meets the closed Δ-ball at the
    /// midpoint; None when no Δ ≤ Δ_max works.
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BottleneckReport {
    pub delta_hat: f64,
    pub delta_max: f64,
    pub exceeded: usize,
    pub samples: Vec<BottleneckSample>,
}

/// For each pair, takes a geodesic, its vertex nearest the midpoint m, and
/// binary-searches the least Δ for which removing the closed ball B(m, Δ)
/// separates x from y (or swallows one of them).
pub fn bottleneck_measure(graph: &ExplicitGraph, pairs: &[(u32, u32)], delta_max: f64) -> Result<BottleneckReport> {
    let mut samples = Vec::with_capacity(pairs.len());
    // Bounds every graph distance; explore_ball needs a finite radius.
    let total: f64 = graph.edges().map(|e| e.2).sum::<f64>() + 1.0;
    for &(x, y) in pairs {
        let from_x = explore_ball(graph, x, total, BallOptions::default());
        let Some(iy) = from_x.index_of(&y) else {
            return Err(Error::Invalid(format!("pair ({x}, {y}) is not connected")));
        };
        let length = from_x.dist(iy);
        let mut path = Vec::new();
        for_each_geodesic(&from_x, iy, 1, |p| path = p.to_vec());
        let target = length / 2.0;
        let mid = path
            .iter()
            .copied()
            .min_by(|&a, &b| {
                (from_x.dist(a) - target)
                    .abs()
                    .total_cmp(&(from_x.dist(b) - target).abs())
            })
            .unwrap();
        let midpoint = *from_x.point(mid);

        let from_m = explore_ball(graph, midpoint, total, BallOptions::counting());
        let dm = |v: u32| from_m.dist_of(&v).unwrap_or(f64::INFINITY);
        let separates = |delta: f64| {
            let inside = |v: u32| dm(v) <= delta + 1e-9;
            if inside(x) || inside(y) {
                return true;
            }
            let mut seen = vec![false; graph.len()];
            reach(graph, x, &inside, &mut seen);
            !seen[y as usize]
        };
        let mut radii: Vec<f64> = from_m
            .distances()
            .iter()
            .copied()
            .filter(|&d| d <= delta_max + 1e-9)
            .collect();
        radii.dedup();
        let i = radii.partition_point(|&d| !separates(d));
        samples.push(BottleneckSample {
            x,
            y,
            length,
            midpoint,
            delta: radii.get(i).copied(),
        });
    }
    let exceeded = samples.iter().filter(|s| s.delta.is_none()).count();
    let delta_hat = samples.iter().filter_map(|s| s.delta).fold(0.0, f64::max);
    Ok(BottleneckReport {
        delta_hat,
        delta_max,
        exceeded,
        samples,
    })
}
