use super::ExploredBall;
use std::fmt::Debug;
use std::hash::Hash;

/// CSV with columns `element_canonical_word,distance`, canonical row order.
pub fn ball_csv<P, F>(ball: &ExploredBall<P>, describe: F) -> String
where
    P: Clone + Eq + Hash + Ord + Send + Sync + Debug,
    F: Fn(&P) -> String,
{
    let mut s = String::from("element_canonical_word,distance\n");
    for (i, p) in ball.points().enumerate() {
        s.push_str(&describe(p));
        s.push(',');
        s.push_str(&format_number(ball.dist(i)));
        s.push('\n');
    }
    s
}

/// 12 significant digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let s = format!("{:.*e}", 11, x);
    let v: f64 = s.parse().expect("valid float");
    format!("{v}")
}
