use super::ExploredBall;
use serde::Serialize;
use std::fmt::Debug;
use std::hash::Hash;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicPath<P> {
    pub vertices: Vec<P>,
    pub length: f64,
}

#[derive(Clone, Debug)]
pub struct GeodesicEnumeration<P> {
    pub paths: Vec<GeodesicPath<P>>,
    pub partial: bool,
}

/// Calls `f` with the index sequence (origin first) of every geodesic from
/// the ball's origin to point `target`, in canonical order. Stops after
/// `cap` paths and returns whether it stopped early.
pub fn for_each_geodesic<P, F>(ball: &ExploredBall<P>, target: usize, cap: usize, mut f: F) -> bool
where
    P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
    F: FnMut(&[usize]),
{
    let mut stack: Vec<usize> = vec![target];
    let mut emitted = 0usize;
    let mut path: Vec<usize> = Vec::new();
    fn walk<P, F>(
        ball: &ExploredBall<P>,
        stack: &mut Vec<usize>,
        path: &mut Vec<usize>,
        emitted: &mut usize,
        cap: usize,
        f: &mut F,
    ) -> bool
    where
        P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
        F: FnMut(&[usize]),
    {
        let v = *stack.last().unwrap();
        if v == 0 {
            if *emitted >= cap {
                return true;
            }
            path.clear();
            path.extend(stack.iter().rev());
            f(path);
            *emitted += 1;
            return false;
        }
        for &(u, _) in ball.preds(v) {
            stack.push(u as usize);
            let stop = walk(ball, stack, path, emitted, cap, f);
            stack.pop();
            if stop {
                return true;
            }
        }
        false
    }
    walk(ball, &mut stack, &mut path, &mut emitted, cap, &mut f)
}

/// Number of geodesics from the origin to every point (saturating).
pub fn count_geodesics<P>(ball: &ExploredBall<P>) -> Vec<u128>
where
    P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
{
    let mut n = vec![0u128; ball.len()];
    if !n.is_empty() {
        n[0] = 1;
    }
    for v in 1..ball.len() {
        n[v] = ball
            .preds(v)
            .iter()
            .fold(0u128, |acc, &(u, _)| acc.saturating_add(n[u as usize]));
    }
    n
}

/// All geodesics from the origin to `target`, capped.
pub fn geodesic_dag<P>(ball: &ExploredBall<P>, target: &P, cap: usize) -> Option<GeodesicEnumeration<P>>
where
    P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
{
    let t = ball.index_of(target)?;
    let mut paths = Vec::new();
    let partial = for_each_geodesic(ball, t, cap, |idx| {
        paths.push(GeodesicPath {
            vertices: idx.iter().map(|&i| ball.point(i).clone()).collect(),
            length: ball.dist(t),
        });
    });
    Some(GeodesicEnumeration { paths, partial })
}
