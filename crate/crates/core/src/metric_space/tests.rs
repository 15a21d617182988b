use super::*;
use crate::groups::{parse_group, GroupModel, Letter};
use std::collections::HashMap;

fn model(spec: &str) -> std::sync::Arc<dyn GroupModel> {
    parse_group(spec).unwrap()
}

/// Minimal weighted length over all words of weight ≤ r, by enumeration.
fn brute_distances(g: &dyn GroupModel, r: f64) -> HashMap<Element, f64> {
    let mut best: HashMap<Element, f64> = HashMap::new();
    let mut stack: Vec<(Vec<Letter>, f64)> = vec![(vec![], 0.0)];
    while let Some((w, len)) = stack.pop() {
        let e = g.evaluate(&w);
        let entry = best.entry(e).or_insert(f64::INFINITY);
        if len < *entry {
            *entry = len;
        }
        for i in 0..g.rank() {
            for inv in [false, true] {
                let l = Letter::new(i, inv);
                let nl = len + g.weight(l);
                if nl <= r {
                    let mut w2 = w.clone();
                    w2.push(l);
                    stack.push((w2, nl));
                }
            }
        }
    }
    best
}

#[test]
fn free_ball_sizes() {
    let f = model("free:2");
    let b = group_ball(&*f, 2.0, BallOptions::default());
    assert_eq!(b.len(), 17);
    let b0 = group_ball(&*f, 0.0, BallOptions::default());
    assert_eq!(b0.len(), 1);
    assert_eq!(b0.dist(0), 0.0);
    let s = sphere_counts(&group_ball(&*f, 5.0, BallOptions::counting()), 1.0);
    assert_eq!(s.counts, vec![1, 4, 12, 36, 108, 324]);
    assert!(s.trusted.iter().all(|&t| t));
}

#[test]
fn matches_brute_force_enumeration() {
    for spec in [
        "free:2",
        "raag:a-b",
        "raag:a-b,b-c",
        "bb:3",
        "product(free:1,free:1):l1",
        "freeprod(free:1,raag:a-b)",
    ] {
        let g = model(spec);
        let ball = group_ball(&*g, 4.0, BallOptions::default());
        let brute = brute_distances(&*g, 4.0);
        assert_eq!(ball.len(), brute.len(), "{spec}");
        for (e, d) in brute {
            assert_eq!(ball.dist_of(&e), Some(d), "{spec} {e:?}");
        }
    }
}

#[test]
fn snowflake_ball_contains_a6() {
    let g = model("bb:3");
    let ball = group_ball(&*g, 6.0, BallOptions::default());
    let a6 = g.evaluate(&g.parse_word("a^6").unwrap());
    assert_eq!(ball.dist_of(&a6), Some(6.0));
    let s = sphere_counts(&ball, 1.0);
    let a3b = g.evaluate(&g.parse_word("a^3 b").unwrap());
    assert_eq!(ball.dist_of(&a3b), Some(3.0));
    assert!(s.counts[3] > 0);
}

#[test]
fn predecessor_records_are_geodesic_steps() {
    let g = model("bb:3");
    let ball = group_ball(&*g, 7.0, BallOptions::default());
    for v in 1..ball.len() {
        assert!(!ball.preds(v).is_empty());
        for &(u, w) in ball.preds(v) {
            assert!((ball.dist(v) - ball.dist(u as usize) - w).abs() <= eps_geo(ball.dist(v)));
            assert!((u as usize) < v);
        }
    }
}

#[test]
fn geodesic_counts() {
    let z2 = model("raag:a-b");
    let ball = group_ball(&*z2, 3.0, BallOptions::default());
    let target = z2.evaluate(&z2.parse_word("a^2 b").unwrap());
    let e = geodesic_dag(&ball, &target, 100).unwrap();
    assert_eq!(e.paths.len(), 3);
    assert!(!e.partial);
    assert!(e.paths.iter().all(|p| p.vertices.len() == 4 && p.length == 3.0));
    let o = geodesic_dag(&ball, &z2.identity(), 100).unwrap();
    assert_eq!(o.paths.len(), 1);
    assert_eq!(o.paths[0].vertices.len(), 1);
    let capped = geodesic_dag(&ball, &target, 2).unwrap();
    assert!(capped.partial && capped.paths.len() == 2);
    let f = model("free:2");
    let fb = group_ball(&*f, 4.0, BallOptions::default());
    assert!(count_geodesics(&fb).iter().all(|&c| c == 1));
}

#[test]
fn bidirectional_distances() {
    let f = model("free:2");
    let x = f.evaluate(&f.parse_word("a b a b").unwrap());
    let r = distance(&*f, &f.identity(), &x, 10.0, SearchOptions::default());
    assert_eq!(r.value(), Some(4.0));
    assert_eq!(distance(&*f, &x, &x, 0.0, SearchOptions::default()).value(), Some(0.0));
    assert_eq!(
        distance(&*f, &f.identity(), &x, 3.0, SearchOptions::default()),
        DistanceResult::ExceedsCap
    );
    let g = model("bb:3");
    let a6 = g.evaluate(&g.parse_word("a^6").unwrap());
    match distance(&*g, &g.identity(), &a6, 20.0, SearchOptions::default()) {
        DistanceResult::Exact { distance, path } => {
            assert_eq!(distance, 6.0);
            assert_eq!(path.vertices.first(), Some(&g.identity()));
            assert_eq!(path.vertices.last(), Some(&a6));
        }
        other => panic!("{other:?}"),
    }
    let a3b = g.evaluate(&g.parse_word("a^3 b").unwrap());
    assert_eq!(
        distance(&*g, &g.identity(), &a3b, 20.0, SearchOptions::default()).value(),
        Some(3.0)
    );
}

#[test]
fn bidirectional_agrees_with_ball() {
    let g = model("bb:3");
    let ball = group_ball(&*g, 6.0, BallOptions::default());
    for i in (0..ball.len()).step_by(7) {
        let d = distance(&*g, &g.identity(), ball.point(i), 6.0, SearchOptions::default());
        assert_eq!(d.value(), Some(ball.dist(i)));
    }
}

#[test]
fn state_cap_truncates_to_complete_radius() {
    let f = model("free:2");
    let b = group_ball(&*f, 6.0, BallOptions::default().with_cap(100));
    assert!(b.cap_hit);
    assert_eq!(b.complete_radius, 3.0);
    assert_eq!(b.len(), 53);
    let s = sphere_counts(&b, 1.0);
    assert_eq!(s.trusted, vec![true, true, true, true, false, false, false]);
}

#[test]
fn deterministic_and_csv() {
    let g = model("bb:3");
    let a = group_ball(&*g, 5.0, BallOptions::default());
    let b = group_ball(&*g, 5.0, BallOptions::default());
    let ca = ball_csv(&a, |p| g.format(p));
    assert_eq!(ca, ball_csv(&b, |p| g.format(p)));
    assert!(ca.starts_with("element_canonical_word,distance\n1,0\n"));
}

#[test]
fn triangle_inequality_on_samples() {
    let g = model("raag:a-b,b-c");
    let ball = group_ball(&*g, 3.0, BallOptions::default());
    let big = group_ball(&*g, 6.0, BallOptions::counting());
    let d = |x: &Element, y: &Element| big.dist_of(&g.multiply(&g.inverse(x), y)).unwrap();
    let pts: Vec<&Element> = ball.points().step_by(5).collect();
    for x in &pts {
        for y in &pts {
            for z in pts.iter().step_by(3) {
                assert!(d(x, z) <= d(x, y) + d(y, z) + 2.0 * eps_geo(6.0));
            }
        }
    }
}
