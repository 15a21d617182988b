use super::WordMetric;
use crate::error::{Error, Result};
use crate::groups::{word_power, BrittonForm, Element, GroupModel, Letter, Snowflake};
use crate::metric_space::eps_geo;
use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

/// A finite piece of a subset, ordered by an integer parameter (e.g. the
/// exponent i of hⁱ·o). Projection diameters are measured in parameter
/// steps, which is the word metric along a straight axis and the tree
/// distance along the snowflake orbits.
#[derive(Clone, Debug)]
pub struct RealizedSubset {
    pub label: String,
    points: Vec<Element>,
    params: Vec<i64>,
    index: FxHashMap<Element, usize>,
}

impl RealizedSubset {
    pub fn new(label: impl Into<String>, members: impl IntoIterator<Item = (i64, Element)>) -> Result<Self> {
        let mut points = Vec::new();
        let mut params = Vec::new();
        let mut index = FxHashMap::default();
        for (p, e) in members {
            if index.contains_key(&e) {
                continue;
            }
            index.insert(e.clone(), points.len());
            points.push(e);
            params.push(p);
        }
        if points.is_empty() {
            return Err(Error::Invalid("realized subset is empty".into()));
        }
        Ok(RealizedSubset {
            label: label.into(),
            points,
            params,
            index,
        })
    }

    /// {hⁱ : i ∈ range}.
    pub fn axis(model: &dyn GroupModel, h: &[Letter], range: std::ops::RangeInclusive<i64>) -> Result<Self> {
        let label = format!("<{}>", model.format_word(h));
        Self::new(label, range.map(|i| (i, model.evaluate(&word_power(h, i)))))
    }

    /// Every vertex of the path spelled by h^k for k in `reps`, parametrized
    /// by letter position. A geodesic line when h is cyclically geodesic.
    pub fn line(model: &dyn GroupModel, h: &[Letter], reps: std::ops::RangeInclusive<i64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Invalid("empty axis word".into()));
        }
        let len = h.len() as i64;
        let (k0, k1) = (*reps.start(), *reps.end());
        let mut g = model.evaluate(&word_power(h, k0));
        let mut members = vec![(k0 * len, g.clone())];
        for k in k0..k1 {
            for (j, &l) in h.iter().enumerate() {
                g = model.mul_letter(&g, l);
                members.push((k * len + j as i64 + 1, g.clone()));
            }
        }
        Self::new(format!("line({})", model.format_word(h)), members)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn param(&self, i: usize) -> i64 {
        self.params[i]
    }

    pub fn param_of(&self, e: &Element) -> Option<i64> {
        self.index.get(e).map(|&i| self.params[i])
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }
}

/// Closest-point projection of one point: all minimizers and the span of
/// their parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Projection {
    pub distance: f64,
    pub members: SmallVec<[usize; 2]>,
    pub lo: i64,
    pub hi: i64,
}

impl Projection {
    /// Parameter diameter of π(x) ∪ π(y).
    pub fn joint_diameter(&self, other: &Projection) -> f64 {
        (self.hi.max(other.hi) - self.lo.min(other.lo)) as f64
    }

    pub fn diameter(&self) -> f64 {
        (self.hi - self.lo) as f64
    }
}

/// All points of `a` nearest to `x`. Errors when no member is within the
/// metric's reach.
pub fn closest_point_projection(metric: &WordMetric, a: &RealizedSubset, x: &Element) -> Result<Projection> {
    let mut best = f64::INFINITY;
    let mut members: SmallVec<[usize; 2]> = SmallVec::new();
    for (i, p) in a.points.iter().enumerate() {
        let Some(d) = metric.dist(x, p) else { continue };
        if d < best - eps_geo(d) {
            best = d;
            members.clear();
            members.push(i);
        } else if d <= best + eps_geo(best) {
            members.push(i);
        }
    }
    if members.is_empty() {
        return Err(Error::NotInBall);
    }
    let lo = members.iter().map(|&i| a.params[i]).min().unwrap();
    let hi = members.iter().map(|&i| a.params[i]).max().unwrap();
    Ok(Projection {
        distance: best,
        members,
        lo,
        hi,
    })
}

/// α(2n) = (s⁻¹t)ⁿ, α(2n+1) = (s⁻¹t)ⁿs⁻¹: the orbit of s⁻¹t through the
/// base vertex, one tree edge per step.
pub fn alpha_orbit(bb: &Snowflake, range: std::ops::RangeInclusive<i64>) -> Result<RealizedSubset> {
    use crate::groups::snowflake::{S, T};
    let st = [Letter::neg(S), Letter::pos(T)];
    let at = |n: i64| {
        let mut w = word_power(&st, n.div_euclid(2));
        if n.rem_euclid(2) == 1 {
            w.push(Letter::neg(S));
        }
        bb.evaluate(&w)
    };
    RealizedSubset::new("alpha", range.map(|n| (n, at(n))))
}

/// β(n) = s⁻ⁿ.
pub fn beta_orbit(bb: &Snowflake, range: std::ops::RangeInclusive<i64>) -> Result<RealizedSubset> {
    use crate::groups::snowflake::S;
    RealizedSubset::new(
        "beta",
        range.map(|n| (n, bb.evaluate(&word_power(&[Letter::neg(S)], n)))),
    )
}

/// Nearest-point projection in the Bass–Serre tree onto the line through
/// the tree vertices of an orbit that contains the base vertex.
#[derive(Clone, Debug)]
pub struct TreeLine {
    vertices: FxHashMap<BrittonForm, i64>,
    min: i64,
    max: i64,
}

impl TreeLine {
    pub fn new(bb: &Snowflake, orbit: &RealizedSubset) -> Self {
        let vertices = orbit
            .points
            .iter()
            .zip(&orbit.params)
            .map(|(e, &p)| (bb.form(e).tree_vertex(), p))
            .collect();
        let min = *orbit.params.iter().min().unwrap();
        let max = *orbit.params.iter().max().unwrap();
        TreeLine { vertices, min, max }
    }

    /// Parameter of the projection of g's tree vertex, or None when the
    /// realized line is too short to decide.
    pub fn project(&self, bb: &Snowflake, g: &Element) -> Option<i64> {
        let path = bb.form(g).tree_path();
        let last_on = path.iter().rposition(|v| self.vertices.contains_key(v))?;
        let p = self.vertices[&path[last_on]];
        // A path leaving through a realized end may follow the line further.
        let certain = last_on + 1 == path.len() || (self.min < p && p < self.max);
        certain.then_some(p)
    }

    pub fn contains(&self, bb: &Snowflake, g: &Element) -> bool {
        self.vertices.contains_key(&bb.form(g).tree_vertex())
    }
}
