use super::{closest_point_projection, Projection, RealizedSubset, WordMetric};
use crate::error::{Error, Result};
use crate::groups::Element;
use crate::metric_space::eps_geo;
use crate::par;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::cell::RefCell;

/// Per-radius maxima: entry k is the value over pairs inside the ball of
/// radius k + 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl Trend {
    fn from_levels(levels: &[f64]) -> Self {
        let mut running = 0f64;
        let values = levels
            .iter()
            .map(|&v| {
                running = running.max(v);
                running
            })
            .collect();
        Trend {
            radii: (1..=levels.len()).map(|k| k as f64).collect(),
            values,
        }
    }

    /// Finite-scale boundedness: no growth over the last third of radii.
    pub fn is_flat(&self) -> bool {
        let n = self.values.len();
        if n == 0 {
            return true;
        }
        let from = (2 * n).div_ceil(3).saturating_sub(1).min(n - 1);
        self.values[n - 1] <= self.values[from] + 1e-9
    }
}

fn level_of(d: f64) -> usize {
    ((d - 1e-9).ceil().max(1.0) as usize) - 1
}

/// Host ball (the probe truncated to `radius`) with projections of its
/// points precomputed.
struct Host<'a> {
    metric: &'a WordMetric,
    subset: &'a RealizedSubset,
    len: usize,
    table: Vec<Projection>,
}

impl<'a> Host<'a> {
    fn new(metric: &'a WordMetric, subset: &'a RealizedSubset, radius: f64) -> Result<Self> {
        if radius > metric.reach() + eps_geo(radius) {
            return Err(Error::Invalid(format!(
                "host radius {radius} exceeds the metric reach {}",
                metric.reach()
            )));
        }
        let probe = metric.probe();
        let len = probe.within(radius).end;
        let table = par::map_range(len, |i| closest_point_projection(metric, subset, probe.point(i)));
        let table = table.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Host {
            metric,
            subset,
            len,
            table,
        })
    }

    fn point(&self, i: usize) -> &Element {
        self.metric.probe().point(i)
    }

    fn level(&self, i: usize, j: usize) -> usize {
        let p = self.metric.probe();
        level_of(p.dist(i).max(p.dist(j)))
    }

    fn levels(&self) -> usize {
        match self.len {
            0 => 0,
            n => level_of(self.metric.probe().dist(n - 1)) + 1,
        }
    }

    fn project(&self, cache: &mut FxHashMap<Element, Option<Projection>>, v: &Element) -> Option<Projection> {
        if let Some(i) = self.metric.probe().index_of(v).filter(|&i| i < self.len) {
            return Some(self.table[i].clone());
        }
        cache
            .entry(v.clone())
            .or_insert_with(|| closest_point_projection(self.metric, self.subset, v).ok())
            .clone()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathWitness {
    pub vertices: Vec<String>,
    pub length: f64,
    pub value: f64,
}

impl PathWitness {
    fn new(metric: &WordMetric, path: &[Element], value: f64) -> Self {
        let length = metric.dist(&path[0], path.last().unwrap()).unwrap_or(f64::NAN);
        PathWitness {
            vertices: path.iter().map(|v| metric.model().format(v)).collect(),
            length,
            value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionCell {
    pub e: f64,
    pub d: f64,
    /// None when no pair qualifies.
    pub c: Option<f64>,
    pub pairs: u64,
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionProfile {
    pub subset: String,
    pub radius: f64,
    pub cells: Vec<ContractionCell>,
    /// The (E, D) = (e_grid[0], d_grid[0]) cell by radius.
    pub trend: Trend,
    pub strongly_contracting: bool,
    pub partial: bool,
    pub verdict_label: String,
}

impl ContractionProfile {
    pub fn cell(&self, e: f64, d: f64) -> Option<&ContractionCell> {
        self.cells.iter().find(|c| c.e == e && c.d == d)
    }
}

/// C(E, D) = max d^π(x₀, x₁) over host pairs with d(x₀, x₁) < d(x₀, A)/E − D,
/// found by translating the probe around each x₀.
pub fn contraction_scan(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    e_grid: &[f64],
    d_grid: &[f64],
) -> Result<ContractionProfile> {
    if e_grid.is_empty() || d_grid.is_empty() || e_grid.iter().any(|&e| e < 1.0) || d_grid.iter().any(|&d| d < 0.0) {
        return Err(Error::Invalid("grids need E ≥ 1 and D ≥ 0 and must be nonempty".into()));
    }
    let host = Host::new(metric, subset, radius)?;
    let probe = metric.probe();
    let model = metric.model();
    let cells: Vec<(f64, f64)> = e_grid
        .iter()
        .flat_map(|&e| d_grid.iter().map(move |&d| (e, d)))
        .collect();
    let e_min = e_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let d_min = d_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let nlev = host.levels();

    struct Partial {
        best: Vec<Option<(f64, usize)>>,
        pairs: Vec<u64>,
        levels: Vec<f64>,
        partial: bool,
    }
    let per_x0 = par::map_range(host.len, |i| {
        let mut out = Partial {
            best: vec![None; cells.len()],
            pairs: vec![0; cells.len()],
            levels: vec![0.0; nlev],
            partial: false,
        };
        let p0 = &host.table[i];
        let rho = p0.distance / e_min - d_min;
        if rho <= 0.0 {
            return out;
        }
        out.partial = rho > metric.reach() && radius * 2.0 > metric.reach();
        let x0 = host.point(i);
        for j in probe.within(rho) {
            let d01 = probe.dist(j);
            if d01 >= rho - eps_geo(rho) {
                break;
            }
            let x1 = model.multiply(x0, probe.point(j));
            let Some(k) = probe.index_of(&x1).filter(|&k| k < host.len) else {
                continue;
            };
            let dpi = p0.joint_diameter(&host.table[k]);
            for (c, &(e, d)) in cells.iter().enumerate() {
                let bound = p0.distance / e - d;
                if d01 < bound - eps_geo(bound) {
                    out.pairs[c] += 1;
                    if out.best[c].is_none_or(|(v, _)| dpi > v) {
                        out.best[c] = Some((dpi, k));
                    }
                    if c == 0 {
                        let l = host.level(i, k);
                        out.levels[l] = out.levels[l].max(dpi);
                    }
                }
            }
        }
        out
    });

    let mut best: Vec<Option<(f64, usize, usize)>> = vec![None; cells.len()];
    let mut pairs = vec![0u64; cells.len()];
    let mut levels = vec![0.0; nlev];
    let mut partial = false;
    for (i, r) in per_x0.into_iter().enumerate() {
        partial |= r.partial;
        for c in 0..cells.len() {
            pairs[c] += r.pairs[c];
            if let Some((v, k)) = r.best[c] {
                if best[c].is_none_or(|(b, _, _)| v > b) {
                    best[c] = Some((v, i, k));
                }
            }
        }
        for (l, v) in r.levels.into_iter().enumerate() {
            levels[l] = f64::max(levels[l], v);
        }
    }
    let cells = cells
        .iter()
        .enumerate()
        .map(|(c, &(e, d))| ContractionCell {
            e,
            d,
            c: best[c].map(|b| b.0),
            pairs: pairs[c],
            witness: best[c].map(|(_, i, k)| (model.format(host.point(i)), model.format(host.point(k)))),
        })
        .collect();
    let trend = Trend::from_levels(&levels);
    Ok(ContractionProfile {
        subset: subset.label.clone(),
        radius,
        cells,
        strongly_contracting: trend.is_flat(),
        trend,
        partial,
        verdict_label: format!("finite-scale verdict at radius {radius}"),
    })
}

/// Shared result of the geodesic scans.
#[derive(Clone, Debug, Serialize)]
pub struct GeodesicScan {
    pub subset: String,
    pub radius: f64,
    /// Threshold parameter of the scan (C for BGI and constriction, D for Morse).
    pub parameter: f64,
    pub max_value: f64,
    pub witness: Option<PathWitness>,
    pub geodesics: u64,
    /// Geodesics whose value exceeds `bound`, when one was given.
    pub bound: Option<f64>,
    pub violations: u64,
    /// Some per-pair enumeration hit its cap, or a projection was
    /// undecidable within reach.
    pub partial: bool,
    /// Host pairs farther apart than the metric reach, skipped.
    pub beyond_reach: u64,
    pub trend: Trend,
    pub bounded: bool,
    pub verdict_label: String,
}

type Cache = FxHashMap<Element, Option<Projection>>;

struct ScanSpec<'s> {
    /// Endpoint projections must satisfy this, or the pair is skipped.
    pair_ok: &'s (dyn Fn(&Projection, &Projection) -> bool + Sync),
    /// Vertices must project farther than this from the subset.
    avoid: Option<f64>,
    /// Value of one geodesic; None when undecidable.
    score: &'s (dyn Fn(&Host, &mut Cache, usize, usize, &[Element]) -> Option<f64> + Sync),
    include_diagonal: bool,
}

fn scan_geodesics(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    parameter: f64,
    bound: Option<f64>,
    cap: usize,
    spec: ScanSpec<'_>,
) -> Result<GeodesicScan> {
    let host = Host::new(metric, subset, radius)?;
    let nlev = host.levels();

    struct Partial {
        best: Option<(f64, Vec<Element>)>,
        geodesics: u64,
        violations: u64,
        partial: bool,
        beyond: u64,
        levels: Vec<f64>,
    }
    let per_i = par::map_range(host.len, |i| {
        let mut out = Partial {
            best: None,
            geodesics: 0,
            violations: 0,
            partial: false,
            beyond: 0,
            levels: vec![0.0; nlev],
        };
        let cache = RefCell::new(Cache::default());
        let x = host.point(i);
        for j in (if spec.include_diagonal { i } else { i + 1 })..host.len {
            if !(spec.pair_ok)(&host.table[i], &host.table[j]) {
                continue;
            }
            let y = host.point(j);
            let mut undecided = false;
            let mut keep = |v: &Element| match spec.avoid {
                None => true,
                Some(c) => match host.project(&mut cache.borrow_mut(), v) {
                    Some(p) => p.distance > c + eps_geo(c),
                    None => {
                        undecided = true;
                        false
                    }
                },
            };
            let level = host.level(i, j);
            let mut on_path = |path: &[Element]| {
                out.geodesics += 1;
                let value = (spec.score)(&host, &mut cache.borrow_mut(), i, j, path);
                let Some(value) = value else {
                    out.partial = true;
                    return;
                };
                if bound.is_some_and(|b| value > b + eps_geo(b)) {
                    out.violations += 1;
                }
                out.levels[level] = out.levels[level].max(value);
                if out.best.as_ref().is_none_or(|(b, _)| value > *b) {
                    out.best = Some((value, path.to_vec()));
                }
            };
            match metric.for_each_geodesic(x, y, cap, &mut keep, &mut on_path) {
                None => out.beyond += 1,
                Some(hit) => out.partial |= hit,
            }
            out.partial |= undecided;
        }
        out
    });

    let mut best: Option<(f64, Vec<Element>)> = None;
    let mut geodesics = 0;
    let mut violations = 0;
    let mut partial = false;
    let mut beyond_reach = 0;
    let mut levels = vec![0.0; nlev];
    for r in per_i {
        geodesics += r.geodesics;
        violations += r.violations;
        partial |= r.partial;
        beyond_reach += r.beyond;
        if let Some((v, p)) = r.best {
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, p));
            }
        }
        for (l, v) in r.levels.into_iter().enumerate() {
            levels[l] = f64::max(levels[l], v);
        }
    }
    let trend = Trend::from_levels(&levels);
    Ok(GeodesicScan {
        subset: subset.label.clone(),
        radius,
        parameter,
        max_value: best.as_ref().map_or(0.0, |b| b.0),
        witness: best.map(|(v, p)| PathWitness::new(metric, &p, v)),
        geodesics,
        bound,
        violations,
        partial,
        beyond_reach,
        bounded: trend.is_flat(),
        trend,
        verdict_label: format!("finite-scale verdict at radius {radius}"),
    })
}

/// Geodesics between host points that stay farther than C from A; reports
/// the largest parameter diameter of their projections.
pub fn bgi_test(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    c: f64,
    bound: Option<f64>,
    cap: usize,
) -> Result<GeodesicScan> {
    if c < 0.0 {
        return Err(Error::Invalid("C must be nonnegative".into()));
    }
    let far = move |p: &Projection, q: &Projection| p.distance > c + eps_geo(c) && q.distance > c + eps_geo(c);
    let diameter = |host: &Host, cache: &mut Cache, _: usize, _: usize, path: &[Element]| {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for v in path {
            let p = host.project(cache, v)?;
            lo = lo.min(p.lo);
            hi = hi.max(p.hi);
        }
        Some((hi - lo) as f64)
    };
    scan_geodesics(
        metric,
        subset,
        radius,
        c,
        bound,
        cap,
        ScanSpec {
            pair_ok: &far,
            avoid: Some(c),
            score: &diameter,
            include_diagonal: false,
        },
    )
}

/// Over geodesics whose endpoints have d^π > C: the largest distance from an
/// endpoint's projection to the geodesic.
pub fn constriction_test(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    c: f64,
    cap: usize,
) -> Result<GeodesicScan> {
    let spread = move |p: &Projection, q: &Projection| p.joint_diameter(q) > c + eps_geo(c);
    let gap = |host: &Host, _: &mut Cache, i: usize, j: usize, path: &[Element]| {
        let mut worst = 0f64;
        for end in [i, j] {
            let mut nearest = f64::INFINITY;
            for &m in &host.table[end].members {
                let a = &subset.points()[m];
                for v in path {
                    let d = host.metric.dist(a, v)?;
                    nearest = nearest.min(d);
                    if nearest == 0.0 {
                        break;
                    }
                }
            }
            worst = worst.max(nearest);
        }
        Some(worst)
    };
    scan_geodesics(
        metric,
        subset,
        radius,
        c,
        None,
        cap,
        ScanSpec {
            pair_ok: &spread,
            avoid: None,
            score: &gap,
            include_diagonal: false,
        },
    )
}

/// Over geodesics with both endpoints within D of A: the largest distance
/// from a geodesic vertex to A.
pub fn morse_profile(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    d: f64,
    cap: usize,
) -> Result<GeodesicScan> {
    let near = move |p: &Projection, q: &Projection| p.distance <= d + eps_geo(d) && q.distance <= d + eps_geo(d);
    let excursion = |host: &Host, cache: &mut Cache, _: usize, _: usize, path: &[Element]| {
        let mut worst = 0f64;
        for v in path {
            worst = worst.max(host.project(cache, v)?.distance);
        }
        Some(worst)
    };
    scan_geodesics(
        metric,
        subset,
        radius,
        d,
        None,
        cap,
        ScanSpec {
            pair_ok: &near,
            avoid: None,
            score: &excursion,
            include_diagonal: true,
        },
    )
}

/// The three verdicts of the equivalence cross-check at one scale.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceVerdicts {
    pub subset: String,
    pub radius: f64,
    pub contraction_bounded: bool,
    pub bgi_bounded: bool,
    pub constriction_bounded: bool,
    pub contraction: ContractionProfile,
    pub bgi: GeodesicScan,
    pub constriction: GeodesicScan,
}

impl EquivalenceVerdicts {
    pub fn agree(&self) -> bool {
        self.contraction_bounded == self.bgi_bounded && self.bgi_bounded == self.constriction_bounded
    }
}

/// Runs contraction (E = 1, D = 0), BGI and constriction at threshold `c`.
pub fn equivalence_check(
    metric: &WordMetric,
    subset: &RealizedSubset,
    radius: f64,
    c: f64,
    cap: usize,
) -> Result<EquivalenceVerdicts> {
    let contraction = contraction_scan(metric, subset, radius, &[1.0], &[0.0])?;
    let bgi = bgi_test(metric, subset, radius, c, None, cap)?;
    let constriction = constriction_test(metric, subset, radius, c, cap)?;
    Ok(EquivalenceVerdicts {
        subset: subset.label.clone(),
        radius,
        contraction_bounded: contraction.strongly_contracting,
        bgi_bounded: bgi.bounded,
        constriction_bounded: constriction.bounded,
        contraction,
        bgi,
        constriction,
    })
}
