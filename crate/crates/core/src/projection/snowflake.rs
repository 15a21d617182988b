use super::{RealizedSubset, TreeLine, WordMetric};
use crate::error::{Error, Result};
use crate::groups::{snowflake_geodesic, word_power, Element, GroupModel, Letter, Snowflake};
use crate::metric_space::{distance, nearest_in_set, DistanceResult, SearchOptions, SetDistance};
use crate::par;
use serde::Serialize;

/// Certification searches around a^{L²} stay under this; more does not fit in 5 GB.
const CERTIFY: SearchOptions = SearchOptions { state_cap: 6_000_000 };

/// Multi-source searches slow down sharply past this many sources.
const CHUNK: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct AlphaBgiReport {
    pub pairs: u64,
    pub geodesics: u64,
    /// Geodesics whose tree projection onto α spans at least `min_diameter`.
    pub long_projections: u64,
    /// Of those, geodesics sharing no vertex with α.
    pub violations: u64,
    pub min_diameter: i64,
    /// Largest projection diameter among geodesics that miss α.
    pub max_diameter_missing: i64,
    pub witness: Option<Vec<String>>,
    pub beyond_reach: u64,
    pub partial: bool,
}

/// Samples geodesics between points x = α(i)·u and y = α(j)·v with u, v in
/// the probe ball of radius `jitter`, |x|, |y| ≤ `radius` (by the bound
/// |α(i)| + |u|) and |i − j| ≥ `min_diameter`, and checks that every geodesic
/// whose tree projection onto α spans at least `min_diameter` shares a vertex
/// with α.
pub fn alpha_bgi_scan(
    bb: &Snowflake,
    metric: &WordMetric,
    alpha: &RealizedSubset,
    radius: f64,
    jitter: f64,
    min_diameter: i64,
    cap: usize,
) -> Result<AlphaBgiReport> {
    let line = TreeLine::new(bb, alpha);
    let probe = metric.probe();
    let model = metric.model();
    let offsets: Vec<usize> = probe.within(jitter).collect();
    let reach = radius as i64;
    let anchors: Vec<(i64, Element, f64)> = (-reach..=reach)
        .filter_map(|i| {
            let e = alpha_point(alpha, i)?;
            Some((i, e.clone(), i.unsigned_abs() as f64))
        })
        .collect();
    let ends: Vec<(i64, Element)> = anchors
        .iter()
        .flat_map(|(i, a, len)| {
            offsets
                .iter()
                .filter(move |&&u| len + probe.dist(u) <= radius)
                .map(move |&u| (*i, model.multiply(a, probe.point(u))))
        })
        .collect();

    struct Partial {
        pairs: u64,
        geodesics: u64,
        long: u64,
        violations: u64,
        max_missing: i64,
        witness: Option<Vec<Element>>,
        beyond: u64,
        partial: bool,
    }
    let per = par::map_range(ends.len(), |a| {
        let mut out = Partial {
            pairs: 0,
            geodesics: 0,
            long: 0,
            violations: 0,
            max_missing: -1,
            witness: None,
            beyond: 0,
            partial: false,
        };
        let (i, x) = &ends[a];
        for (j, y) in &ends[a + 1..] {
            if (i - j).abs() < min_diameter {
                continue;
            }
            out.pairs += 1;
            let mut undecided = false;
            let mut on_path = |path: &[Element]| {
                out.geodesics += 1;
                let mut lo = i64::MAX;
                let mut hi = i64::MIN;
                for v in path {
                    match line.project(bb, v) {
                        Some(p) => {
                            lo = lo.min(p);
                            hi = hi.max(p);
                        }
                        None => undecided = true,
                    }
                }
                let diam = hi - lo;
                let meets = path.iter().any(|v| alpha.contains(v));
                if !meets {
                    out.max_missing = out.max_missing.max(diam);
                }
                if diam >= min_diameter {
                    out.long += 1;
                    if !meets {
                        out.violations += 1;
                        if out.witness.is_none() {
                            out.witness = Some(path.to_vec());
                        }
                    }
                }
            };
            match metric.for_each_geodesic(x, y, cap, &mut |_| true, &mut on_path) {
                None => out.beyond += 1,
                Some(hit) => out.partial |= hit,
            }
            out.partial |= undecided;
        }
        out
    });
    let mut rep = AlphaBgiReport {
        pairs: 0,
        geodesics: 0,
        long_projections: 0,
        violations: 0,
        min_diameter,
        max_diameter_missing: -1,
        witness: None,
        beyond_reach: 0,
        partial: false,
    };
    for p in per {
        rep.pairs += p.pairs;
        rep.geodesics += p.geodesics;
        rep.long_projections += p.long;
        rep.violations += p.violations;
        rep.max_diameter_missing = rep.max_diameter_missing.max(p.max_missing);
        rep.beyond_reach += p.beyond;
        rep.partial |= p.partial;
        if rep.witness.is_none() {
            rep.witness = p.witness.map(|w| w.iter().map(|v| model.format(v)).collect());
        }
    }
    Ok(rep)
}

fn alpha_point(alpha: &RealizedSubset, i: i64) -> Option<&Element> {
    (0..alpha.len())
        .find(|&k| alpha.param(k) == i)
        .map(|k| &alpha.points()[k])
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaWitness {
    pub path: Vec<String>,
    /// Certified d(a^L, a^{L²}), equal to the path length.
    pub length: f64,
    /// Every path vertex is farther than this from β.
    pub avoids: f64,
    /// (j, n) with π_β(a^{L^j}) = {β(n)} certified by exact distances.
    pub projections: Vec<(u32, i64)>,
    pub projection_diameter: i64,
}

/// Nearest points of `beta` to g among those within `cap`, or None when
/// every point is farther. Every word from g to β(n) spells at least the
/// stable letters of g⁻¹β(n), so points whose tree distance already exceeds
/// the best distance found are skipped. The rest are searched in chunks,
/// closest in the tree first, each chunk capped by the best so far.
fn nearest_on_beta(
    bb: &Snowflake,
    model: &dyn GroupModel,
    beta: &RealizedSubset,
    g: &Element,
    cap: f64,
) -> Result<Option<(f64, Vec<i64>)>> {
    let mut order: Vec<(usize, usize)> = (0..beta.len())
        .map(|k| (bb.tree_distance(g, &beta.points()[k]), k))
        .collect();
    order.sort_unstable();
    let mut best = cap;
    let mut found: Option<(f64, Vec<i64>)> = None;
    let mut rest = &order[..];
    while let Some(&(tree, _)) = rest.first() {
        if tree as f64 > best + 1e-9 {
            break;
        }
        let take = rest.len().min(CHUNK);
        let (chunk, tail) = rest.split_at(take);
        rest = tail;
        let pts: Vec<Element> = chunk.iter().map(|&(_, k)| beta.points()[k].clone()).collect();
        match nearest_in_set(model, g, &pts, best, CERTIFY) {
            SetDistance::Exact { distance, nearest } => {
                let params = nearest.iter().map(|&i| beta.param(chunk[i].1));
                match &mut found {
                    Some((d, ps)) if (*d - distance).abs() < 1e-9 => ps.extend(params),
                    _ => found = Some((distance, params.collect())),
                }
                best = distance;
            }
            SetDistance::ExceedsCap => {}
            SetDistance::StateCapHit { .. } => {
                return Err(Error::Insufficient("distance search hit its state cap".into()))
            }
        }
    }
    // The tree distance to β(n) is convex in n, so when both realized ends
    // lie beyond the best distance, so does everything unrealized.
    let ends = [0, beta.len() - 1].map(|k| bb.tree_distance(g, &beta.points()[k]) as f64);
    if ends.iter().any(|&t| t <= best + 1e-9) {
        return Err(Error::Insufficient("β realized too short for this projection".into()));
    }
    if let Some((_, ps)) = &mut found {
        ps.sort_unstable();
    }
    Ok(found)
}

/// Nearest points of `beta` to g with their distance. Errors when the
/// realized part of β is too short to rule out nearer points beyond it.
pub fn beta_projection(
    bb: &Snowflake,
    model: &dyn GroupModel,
    beta: &RealizedSubset,
    g: &Element,
) -> Result<(f64, Vec<i64>)> {
    nearest_on_beta(bb, model, beta, g, f64::INFINITY)?.ok_or_else(|| Error::Insufficient("β unreachable".into()))
}

/// The family geodesic from a^L to a^{L²}: certified length, vertices all
/// farther than `c` from β, and endpoint projections onto β(1) and β(2).
pub fn beta_witness(bb: &Snowflake, model: &dyn GroupModel, beta: &RealizedSubset, c: f64) -> Result<BetaWitness> {
    let l = bb.big_l();
    let (word, len) = snowflake_geodesic(l * l - l, 0, bb.r);
    let start = model.evaluate(&word_power(&[Letter::pos(0)], l));
    let end = model.evaluate(&word_power(&[Letter::pos(0)], l * l));
    let certified = distance(model, &model.identity(), &model.evaluate(&word), len as f64, CERTIFY);
    let length = match certified {
        DistanceResult::Exact { distance, .. } if (distance - len as f64).abs() < 1e-9 => distance,
        other => {
            return Err(Error::Rejected(format!(
                "family length {len} not certified as the distance: {:?}",
                other.value()
            )))
        }
    };
    let mut path = vec![start.clone()];
    for &letter in &word {
        let next = model.mul_letter(path.last().unwrap(), letter);
        path.push(next);
    }
    if path.last() != Some(&end) {
        return Err(Error::Rejected("family word does not reach a^{L²}".into()));
    }
    for v in &path {
        if nearest_on_beta(bb, model, beta, v, c)?.is_some() {
            return Err(Error::Rejected(format!("{} is within {c} of β", model.format(v))));
        }
    }
    let mut projections = Vec::new();
    for (j, g) in [(1u32, &start), (2, &end)] {
        let (_, argmin) = beta_projection(bb, model, beta, g)?;
        if argmin.len() != 1 {
            return Err(Error::Rejected(format!("projection of a^(L^{j}) is {argmin:?}")));
        }
        projections.push((j, argmin[0]));
    }
    let projection_diameter = (projections[1].1 - projections[0].1).abs();
    Ok(BetaWitness {
        path: path.iter().map(|v| model.format(v)).collect(),
        length,
        avoids: c,
        projections,
        projection_diameter,
    })
}
