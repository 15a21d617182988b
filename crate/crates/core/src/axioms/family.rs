use crate::error::{Error, Result};
use crate::groups::{word_power, Element, Letter};
use crate::metric_space::eps_geo;
use crate::par;
use crate::projection::{closest_point_projection, RealizedSubset, WordMetric};
use serde::Serialize;

/// One translate g·A of the base axis A = {hⁱ}, realized as the points
/// g·hⁱ inside the host ball. `rep` is the least realized point, and
/// parameters are exponents relative to it.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub rep: Element,
    pub label: String,
    pub subset: RealizedSubset,
    pub lo: i64,
    pub hi: i64,
    /// Coarse distance to the nearest other member (the distinctness
    /// certificate); infinite for a lone member.
    pub separation: f64,
}

#[derive(Clone, Debug)]
pub struct AxisFamily {
    pub axis: String,
    pub radius: f64,
    pub family_radius: f64,
    /// Translates closer than this in the coarse sense count as one.
    pub threshold: f64,
    pub members: Vec<FamilyMember>,
    /// Translates dropped as coarsely equal to an earlier member.
    pub merged: usize,
    /// |h^k| for k = 0, 1, ...; diameters of projections read off this.
    axis_norms: Vec<f64>,
}

impl AxisFamily {
    /// All translates g·A meeting the ball of radius `family_radius`,
    /// realized within `radius`. Realization walks hⁱ outward from a point
    /// of the small ball and stops at the first point outside, which
    /// assumes norms along the axis are unimodal (true on straight axes of
    /// free groups and RAAGs).
    pub fn translates(metric: &WordMetric, h: &[Letter], radius: f64, family_radius: f64) -> Result<Self> {
        let model = metric.model();
        if h.is_empty() || model.evaluate(h) == model.identity() {
            return Err(Error::Invalid("axis word must be a nontrivial element".into()));
        }
        if family_radius > radius || radius > metric.reach() + eps_geo(radius) {
            return Err(Error::Invalid(format!(
                "need family radius {family_radius} ≤ radius {radius} ≤ reach {}",
                metric.reach()
            )));
        }
        let threshold = 2.0 * model.generators().iter().map(|g| g.weight).fold(0.0, f64::max);
        let inside = |g: &Element| metric.norm(g).is_some_and(|d| d <= radius + eps_geo(radius));
        let step = model.evaluate(h);
        let back = model.inverse(&step);
        let max_steps = 4 * (radius.ceil() as i64 + 1) * h.len() as i64;

        let probe = metric.probe();
        let mut seen = std::collections::BTreeMap::new();
        for i in probe.within(family_radius) {
            let g = probe.point(i);
            let mut pts = vec![(0i64, g.clone())];
            for (dir, s) in [(1i64, &step), (-1, &back)] {
                let mut cur = g.clone();
                for k in 1..=max_steps {
                    cur = model.multiply(&cur, s);
                    if !inside(&cur) {
                        break;
                    }
                    pts.push((dir * k, cur.clone()));
                }
            }
            let (p0, rep) = pts.iter().min_by(|a, b| a.1.cmp(&b.1)).cloned().unwrap();
            seen.entry(rep)
                .or_insert_with(|| pts.into_iter().map(|(p, e)| (p - p0, e)).collect::<Vec<_>>());
        }

        let max_span = seen
            .values()
            .map(|v| v.iter().map(|p| p.0.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
            * 2;
        let axis_norms = (0..=max_span)
            .map(|k| metric.norm(&model.evaluate(&word_power(h, k))).unwrap_or(f64::NAN))
            .collect();

        let label = model.format_word(h);
        let mut members: Vec<FamilyMember> = Vec::new();
        let mut merged = 0;
        for (rep, mut pts) in seen {
            pts.sort_by_key(|p| p.0);
            let lo = pts[0].0;
            let hi = pts[pts.len() - 1].0;
            let subset = RealizedSubset::new(format!("{}<{label}>", model.format(&rep)), pts)?;
            let cand = FamilyMember {
                label: subset.label.clone(),
                rep,
                subset,
                lo,
                hi,
                separation: f64::INFINITY,
            };
            let dists: Vec<f64> = members
                .iter()
                .map(|m| coarse_distance(metric, m, &cand, radius - threshold))
                .collect();
            if dists.iter().any(|&d| d <= threshold) {
                merged += 1;
                continue;
            }
            let mut sep = f64::INFINITY;
            for (m, d) in members.iter_mut().zip(dists) {
                m.separation = m.separation.min(d);
                sep = sep.min(d);
            }
            members.push(FamilyMember {
                separation: sep,
                ..cand
            });
        }
        Ok(AxisFamily {
            axis: label,
            radius,
            family_radius,
            threshold,
            members,
            merged,
            axis_norms,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn span(&self, lo: i64, hi: i64) -> f64 {
        self.axis_norms.get((hi - lo) as usize).copied().unwrap_or(f64::NAN)
    }
}

/// Largest distance from a point of one member with norm ≤ `within` to the
/// other member, taken both ways. With `within` =
/// radius − threshold, any point of the full axis within the threshold is
/// realized, so the comparison against the threshold is exact.
fn coarse_distance(metric: &WordMetric, x: &FamilyMember, y: &FamilyMember, within: f64) -> f64 {
    let one_way = |a: &FamilyMember, b: &FamilyMember| {
        a.subset
            .points()
            .iter()
            .filter(|p| metric.norm(p).is_some_and(|d| d <= within + eps_geo(within)))
            .map(|p| closest_point_projection(metric, &b.subset, p).map_or(f64::INFINITY, |q| q.distance))
            .fold(0.0, f64::max)
    };
    one_way(x, y).max(one_way(y, x))
}

/// π_Y(X) as a parameter interval of Y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjEntry {
    pub lo: i64,
    pub hi: i64,
    pub diameter: f64,
    /// The interval touches a realized end of Y, where Y was cut off, so
    /// the true projection may be larger.
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct ProjectionTable {
    pub n: usize,
    /// entries[y·n + x] = π_Y(X); None on the diagonal.
    entries: Vec<Option<ProjEntry>>,
    spans: Vec<f64>,
}

impl ProjectionTable {
    pub fn entry(&self, y: usize, x: usize) -> Option<&ProjEntry> {
        self.entries[y * self.n + x].as_ref()
    }

    /// diam π_Y(X) ∪ π_Y(Z), with whether either part is flagged. Equals
    /// diam π_Y(X) when X = Z.
    pub fn d_pi(&self, y: usize, x: usize, z: usize) -> Option<(f64, bool)> {
        let a = self.entry(y, x)?;
        let b = self.entry(y, z)?;
        let span = (a.hi.max(b.hi) - a.lo.min(b.lo)) as usize;
        Some((
            self.spans.get(span).copied().unwrap_or(f64::NAN),
            a.flagged || b.flagged,
        ))
    }

    pub fn flagged(&self) -> usize {
        self.entries.iter().flatten().filter(|e| e.flagged).count()
    }
}

/// Exact closest-point projections of every realized member onto every
/// other one.
pub fn projection_table(metric: &WordMetric, family: &AxisFamily) -> ProjectionTable {
    let n = family.len();
    let entries = par::map_range(n * n, |k| {
        let (y, x) = (k / n, k % n);
        if x == y {
            return None;
        }
        let ym = &family.members[y];
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let mut flagged = false;
        for p in family.members[x].subset.points() {
            match closest_point_projection(metric, &ym.subset, p) {
                Ok(q) => {
                    lo = lo.min(q.lo);
                    hi = hi.max(q.hi);
                }
                Err(_) => flagged = true,
            }
        }
        if lo > hi {
            return Some(ProjEntry {
                lo: ym.lo,
                hi: ym.hi,
                diameter: f64::NAN,
                flagged: true,
            });
        }
        flagged |= lo == ym.lo || hi == ym.hi;
        Some(ProjEntry {
            lo,
            hi,
            diameter: family.span(lo, hi),
            flagged,
        })
    });
    ProjectionTable {
        n,
        entries,
        spans: family.axis_norms.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct P0Violation {
    pub onto: usize,
    pub from: usize,
    pub diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Violation {
    pub members: [usize; 3],
    /// d_X(Y, Z), d_Y(X, Z), d_Z(X, Y).
    pub values: [f64; 3],
}

/// Witness lists are cut at this length; counts are complete.
const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct AxiomAudit {
    pub xi: f64,
    pub members: usize,
    pub p0_count: u64,
    pub p0: Vec<P0Violation>,
    pub p1_count: u64,
    pub p1: Vec<P1Violation>,
    /// Largest #{V : d_V(X, Y) > ξ} over pairs, and a pair attaining it.
    pub p2_max: usize,
    pub p2_pair: Option<(usize, usize)>,
    /// Entries or triples skipped because a projection was flagged.
    pub undecided: u64,
    /// Least ξ for which (P0) and (P1) hold on the decided entries.
    pub least_passing_xi: f64,
    pub pass: bool,
}

/// Checks (P0) diam π_Y(X) ≤ ξ, (P1) at most one of d_X(Y,Z), d_Y(X,Z),
/// d_Z(X,Y) exceeds ξ, and counts the (P2) sets {V : d_V(X,Y) > ξ}.
pub fn audit_axioms(table: &ProjectionTable, xi: f64) -> Result<AxiomAudit> {
    if !(xi >= 0.0) {
        return Err(Error::Invalid("ξ must be nonnegative".into()));
    }
    let n = table.n;
    let over = |v: f64| v > xi + eps_geo(xi.max(1.0));
    let mut audit = AxiomAudit {
        xi,
        members: n,
        p0_count: 0,
        p0: Vec::new(),
        p1_count: 0,
        p1: Vec::new(),
        p2_max: 0,
        p2_pair: None,
        undecided: 0,
        least_passing_xi: 0.0,
        pass: true,
    };
    for y in 0..n {
        for x in (0..n).filter(|&x| x != y) {
            let e = table.entry(y, x).unwrap();
            if e.flagged {
                audit.undecided += 1;
                continue;
            }
            audit.least_passing_xi = audit.least_passing_xi.max(e.diameter);
            if over(e.diameter) {
                audit.p0_count += 1;
                if audit.p0.len() < MAX_WITNESSES {
                    audit.p0.push(P0Violation {
                        onto: y,
                        from: x,
                        diameter: e.diameter,
                    });
                }
            }
        }
    }

    struct Row {
        count: u64,
        found: Vec<P1Violation>,
        undecided: u64,
        second: f64,
    }
    let rows = par::map_range(n, |x| {
        let mut row = Row {
            count: 0,
            found: Vec::new(),
            undecided: 0,
            second: 0.0,
        };
        for y in x + 1..n {
            for z in y + 1..n {
                let vals = [table.d_pi(x, y, z), table.d_pi(y, x, z), table.d_pi(z, x, y)].map(Option::unwrap);
                if vals.iter().any(|v| v.1) {
                    row.undecided += 1;
                    continue;
                }
                let values = vals.map(|v| v.0);
                let mut sorted = values;
                sorted.sort_by(|a, b| b.total_cmp(a));
                row.second = row.second.max(sorted[1]);
                if values.iter().filter(|&&v| over(v)).count() > 1 {
                    row.count += 1;
                    if row.found.len() < MAX_WITNESSES {
                        row.found.push(P1Violation {
                            members: [x, y, z],
                            values,
                        });
                    }
                }
            }
        }
        row
    });
    for row in rows {
        audit.p1_count += row.count;
        audit.undecided += row.undecided;
        audit.least_passing_xi = audit.least_passing_xi.max(row.second);
        for v in row.found {
            if audit.p1.len() < MAX_WITNESSES {
                audit.p1.push(v);
            }
        }
    }

    for x in 0..n {
        for y in x + 1..n {
            let count = (0..n)
                .filter(|&v| v != x && v != y)
                .filter(|&v| table.d_pi(v, x, y).is_some_and(|(d, f)| !f && over(d)))
                .count();
            if count > audit.p2_max {
                audit.p2_max = count;
                audit.p2_pair = Some((x, y));
            }
        }
    }
    audit.pass = audit.p0_count == 0 && audit.p1_count == 0;
    Ok(audit)
}
