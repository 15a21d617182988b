use super::Space;
use std::sync::Arc;

/// A finite undirected weighted graph on vertices 0..n.
#[derive(Clone, Debug, Default)]
pub struct ExplicitGraph {
    adj: Vec<Vec<(u32, f64)>>,
}

impl ExplicitGraph {
    pub fn new(n: usize) -> Self {
        ExplicitGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: u32, v: u32, w: f64) {
        assert!(w > 0.0, "edge weights must be positive");
        self.adj[u as usize].push((v, w));
        self.adj[v as usize].push((u, w));
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = ExplicitGraph::new(n);
        for i in 0..n {
            g.add_edge(i as u32, ((i + 1) % n) as u32, 1.0);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = ExplicitGraph::new(n);
        for i in 1..n {
            g.add_edge(i as u32 - 1, i as u32, 1.0);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |(v, _)| (u as u32) < *v)
                .map(move |&(v, w)| (u as u32, v, w))
        })
    }

    pub fn neighbors_of(&self, u: u32) -> &[(u32, f64)] {
        &self.adj[u as usize]
    }
}

impl Space for ExplicitGraph {
    type Point = u32;

    fn neighbors(&self, p: &u32, out: &mut Vec<(u32, f64)>) {
        out.extend_from_slice(&self.adj[*p as usize]);
    }

    fn integral_weights(&self) -> bool {
        self.adj.iter().flatten().all(|(_, w)| w.fract() == 0.0)
    }
}

/// The integer line with unit edges. Cheaper than `free:1` when only the
/// metric matters.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerLine;

impl Space for IntegerLine {
    type Point = i64;

    fn neighbors(&self, p: &i64, out: &mut Vec<(i64, f64)>) {
        out.push((p - 1, 1.0));
        out.push((p + 1, 1.0));
    }

    fn integral_weights(&self) -> bool {
        true
    }
}

impl<T: Space + ?Sized + Send> Space for Arc<T> {
    type Point = T::Point;

    fn neighbors(&self, p: &Self::Point, out: &mut Vec<(Self::Point, f64)>) {
        (**self).neighbors(p, out)
    }

    fn integral_weights(&self) -> bool {
        (**self).integral_weights()
    }

    fn describe(&self, p: &Self::Point) -> String {
        (**self).describe(p)
    }
}

impl<T: Space + ?Sized> Space for &T {
    type Point = T::Point;

    fn neighbors(&self, p: &Self::Point, out: &mut Vec<(Self::Point, f64)>) {
        (**self).neighbors(p, out)
    }

    fn integral_weights(&self) -> bool {
        (**self).integral_weights()
    }

    fn describe(&self, p: &Self::Point) -> String {
        (**self).describe(p)
    }
}
