//! One function per op. Each reads its parameters from a validated manifest
//! and returns the results, the scale they were measured at, a partial flag
//! and, where the op has a tabular form, CSV text.

use crate::manifest::Manifest;
use crate::CliError;
use growthlab::axioms::{
    audit_axioms, bottleneck_measure, build_quasitree, find_contracting_in_subgroup, projection_table, sample_pairs,
    AxisFamily,
};
use growthlab::groups::{parse_group, snowflake_geodesic, word_power, Element, GroupModel, Letter, Snowflake};
use growthlab::growth::{
    complementary_count, conjugacy_growth, estimate_exponent, poincare_partial_with, SphereCounts,
};
use growthlab::horoball::{
    default_depth, fit_log_profile, horoball_distance, horoball_sphere_counts, parabolic_gap_report, AugmentedSpace,
    HoroballSpace, Peripheral,
};
use growthlab::metric_space::{
    distance, format_number, group_ball, sphere_counts, BallOptions, DistanceResult, IntegerLine, SearchOptions, Space,
};
use growthlab::projection::{
    alpha_orbit, beta_orbit, bgi_test, constriction_test, contraction_scan, morse_profile, RealizedSubset, WordMetric,
};
use growthlab::quotient::{
    growth_tightness_report, minimal_section, phi_injectivity, quotient_ball, separated_net, PresentationQuotient,
    Quotient,
};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

pub struct Outcome {
    pub results: Value,
    pub scale: Value,
    pub partial: bool,
    pub csv: Option<String>,
}

impl Outcome {
    fn new(results: impl Serialize, scale: Value) -> Result<Self, CliError> {
        Ok(Outcome {
            results: serde_json::to_value(results)?,
            scale,
            partial: false,
            csv: None,
        })
    }

    fn partial(mut self, p: bool) -> Self {
        self.partial = p;
        self
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

type OpResult = Result<Outcome, CliError>;

const DEFAULT_CAP: u64 = 5_000_000;

/// Runs the op named in `m`. Relative relator paths resolve against `dir`.
pub fn dispatch(m: &Manifest, dir: &Path) -> OpResult {
    let ctx = Ctx { m, dir };
    match m.op() {
        "group.ball" => ctx.group_ball(),
        "group.distance" => ctx.group_distance(),
        "growth.fit" => ctx.growth_fit(),
        "growth.poincare" => ctx.growth_poincare(),
        "growth.comp" => ctx.growth_comp(),
        "growth.conjugacy" => ctx.growth_conjugacy(),
        "contract.scan" | "contract.bgi" | "contract.constrict" | "contract.morse" => ctx.contract(),
        "axioms.audit" | "axioms.quasitree" | "axioms.bottleneck" => ctx.axioms(),
        "axioms.normalclosure" => ctx.normal_closure(),
        "horoball.distance" | "horoball.spheres" | "horoball.fit" => ctx.horoball(),
        "horoball.gap" => ctx.horoball_gap(),
        "quotient.pieces" => ctx.quotient_pieces(),
        "quotient.dehn" => ctx.quotient_dehn(),
        "quotient.ball" | "quotient.section" | "quotient.net" | "quotient.phi" | "quotient.tightness" => ctx.quotient(),
        "snowflake.distance" => ctx.snowflake_distance(),
        "snowflake.geodesic" => ctx.snowflake_geodesic(),
        op => Err(CliError::Usage(format!("unknown op `{op}`"))),
    }
}

/// `radius,count,cumulative,trusted`, one row per bucket.
pub fn counts_csv(c: &SphereCounts) -> String {
    let mut out = String::from("radius,count,cumulative,trusted\n");
    for (k, (n, cum)) in c.counts.iter().zip(c.cumulative()).enumerate() {
        let _ = writeln!(
            out,
            "{},{n},{cum},{}",
            format_number(c.radius_of(k)),
            k < c.trusted_len()
        );
    }
    out
}

struct Ctx<'a> {
    m: &'a Manifest,
    dir: &'a Path,
}

impl Ctx<'_> {
    fn str(&self, key: &str) -> &str {
        self.m.get(key).unwrap_or("")
    }

    fn num(&self, key: &str, default: f64) -> f64 {
        self.m.num(key).unwrap_or(default)
    }

    fn cap(&self, default: u64) -> usize {
        self.m.uint("cap").unwrap_or(default) as usize
    }

    fn model(&self) -> Result<Arc<dyn GroupModel>, CliError> {
        Ok(parse_group(self.str("group"))?)
    }

    fn word(&self, model: &dyn GroupModel, key: &str) -> Result<Vec<Letter>, CliError> {
        Ok(model.parse_word(self.m.get(key).unwrap_or("1"))?)
    }

    fn width(&self, model: &dyn GroupModel) -> f64 {
        self.m
            .num("width")
            .unwrap_or(if model.integral_weights() { 1.0 } else { 0.25 })
    }

    fn grid(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.m.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("`{key}` needs numbers, got `{v}`")))
                })
                .collect(),
        }
    }

    fn ball_counts(&self, model: &dyn GroupModel, radius: f64) -> (SphereCounts, bool, f64) {
        let ball = group_ball(model, radius, BallOptions::counting().with_cap(self.cap(DEFAULT_CAP)));
        (
            sphere_counts(&ball, self.width(model)),
            ball.cap_hit,
            ball.complete_radius,
        )
    }

    fn group_ball(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let ball = group_ball(&*model, radius, BallOptions::counting().with_cap(self.cap(DEFAULT_CAP)));
        let counts = sphere_counts(&ball, self.width(&*model));
        let csv = counts_csv(&counts);
        Ok(Outcome::new(
            json!({
                "group": model.spec(),
                "size": ball.len(),
                "complete_radius": ball.complete_radius,
                "cap_hit": ball.cap_hit,
                "counts": counts,
            }),
            json!({ "radius": radius }),
        )?
        .partial(ball.cap_hit)
        .csv(csv))
    }

    fn group_distance(&self) -> OpResult {
        let model = self.model()?;
        distance_report(&*model, self.word(&*model, "from")?, self.word(&*model, "to")?, self)
    }

    fn growth_fit(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let (counts, cap_hit, complete) = self.ball_counts(&*model, radius);
        let estimate = estimate_exponent(&counts, self.m.pair("window"))?;
        let csv = counts_csv(&counts);
        Ok(Outcome::new(
            json!({ "group": model.spec(), "estimate": estimate, "counts": counts }),
            json!({ "radius": radius, "complete_radius": complete, "window": estimate.window }),
        )?
        .partial(cap_hit)
        .csv(csv))
    }

    fn growth_poincare(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let (counts, cap_hit, complete) = self.ball_counts(&*model, radius);
        let eval = poincare_partial_with(&counts, self.num("s", 0.0), radius, self.num("eps", 0.05));
        Ok(Outcome::new(
            json!({ "group": model.spec(), "poincare": eval }),
            json!({ "radius": radius, "complete_radius": complete }),
        )?
        .partial(cap_hit))
    }

    fn growth_comp(&self) -> OpResult {
        let model = self.model()?;
        let (q, radius) = (self.num("q", 0.0), self.num("radius", 0.0));
        let cap = self.cap(1 << 22);
        let report = match self.m.get("peripherals") {
            None => complementary_count(&*model, q, radius, self.width(&*model), cap),
            Some(_) => {
                let aug = self.augmented(model.clone(), radius)?;
                complementary_count(&aug, q, radius, self.num("width", 0.25), cap)
            }
        };
        let csv = counts_csv(&report.counts);
        let partial = report.partial;
        Ok(Outcome::new(&report, json!({ "radius": radius, "q": q }))?
            .partial(partial)
            .csv(csv))
    }

    fn growth_conjugacy(&self) -> OpResult {
        let model = self.model()?;
        let h = model.evaluate(&self.word(&*model, "h")?);
        let radius = self.num("radius", 0.0);
        let report = conjugacy_growth(&*model, &h, radius, self.m.num("group_radius"))?;
        let csv = counts_csv(&report.counts);
        let scale = json!({ "radius": radius, "conjugator_radius": report.conjugator_radius, "group_radius": report.group_radius });
        Ok(Outcome::new(&report, scale)?.csv(csv))
    }

    /// `axis = <word>` for ⟨w⟩·o, `line:<word>` for the word path, or
    /// `alpha` / `beta` in a snowflake group. `range` is in powers.
    fn subset(&self, radius: f64) -> Result<(WordMetric, RealizedSubset), CliError> {
        let reach = self.num("reach", radius);
        let (lo, hi) = self.m.pair("range").unwrap_or((-12.0, 12.0));
        let range = lo.round() as i64..=hi.round() as i64;
        let axis = self.str("axis");
        if axis == "alpha" || axis == "beta" {
            let bb = Arc::new(snowflake(self.str("group"))?);
            let subset = if axis == "alpha" {
                alpha_orbit(&bb, range)?
            } else {
                beta_orbit(&bb, range)?
            };
            return Ok((WordMetric::new(bb, reach), subset));
        }
        let model = self.model()?;
        let subset = match axis.strip_prefix("line:") {
            Some(w) => RealizedSubset::line(&*model, &model.parse_word(w)?, range)?,
            None => RealizedSubset::axis(&*model, &model.parse_word(axis)?, range)?,
        };
        Ok((WordMetric::new(model, reach), subset))
    }

    fn contract(&self) -> OpResult {
        let radius = self.num("radius", 0.0);
        let (metric, subset) = self.subset(radius)?;
        let cap = self.cap(100_000);
        let scale = |extra: Value| {
            let mut s =
                json!({ "radius": radius, "reach": metric.reach(), "subset": subset.label, "points": subset.len() });
            if let (Value::Object(s), Value::Object(e)) = (&mut s, extra) {
                s.extend(e);
            }
            s
        };
        let scan = match self.m.op() {
            "contract.scan" => {
                let e_grid = self.grid("e_grid", &[1.0, 2.0])?;
                let d_grid = self.grid("d_grid", &[0.0, 1.0])?;
                let profile = contraction_scan(&metric, &subset, radius, &e_grid, &d_grid)?;
                let mut table = Map::new();
                let mut csv = String::from("e,d,c,pairs\n");
                for cell in &profile.cells {
                    let key = format!("E={},D={}", format_number(cell.e), format_number(cell.d));
                    table.insert(key, json!(cell.c));
                    let c = cell.c.map(format_number).unwrap_or_default();
                    let _ = writeln!(
                        csv,
                        "{},{},{c},{}",
                        format_number(cell.e),
                        format_number(cell.d),
                        cell.pairs
                    );
                }
                let witnesses: Vec<_> = profile.cells.iter().map(|c| &c.witness).collect();
                let results = json!({
                    "C_table": table,
                    "witnesses": witnesses,
                    "profile": profile,
                });
                let grid = json!({ "grid": { "E": e_grid, "D": d_grid } });
                return Ok(Outcome::new(results, scale(grid))?.partial(profile.partial).csv(csv));
            }
            "contract.bgi" => bgi_test(&metric, &subset, radius, self.num("c", 0.0), self.m.num("bound"), cap)?,
            "contract.constrict" => constriction_test(&metric, &subset, radius, self.num("c", 0.0), cap)?,
            _ => morse_profile(&metric, &subset, radius, self.num("d", 0.0), cap)?,
        };
        let partial = scan.partial;
        Ok(Outcome::new(&scan, scale(json!({ "parameter": scan.parameter })))?.partial(partial))
    }

    fn axioms(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let family_radius = self.num("family_radius", 0.0);
        let metric = WordMetric::new(model.clone(), self.num("reach", radius));
        let family = AxisFamily::translates(&metric, &self.word(&*model, "axis")?, radius, family_radius)?;
        let table = projection_table(&metric, &family);
        let scale = json!({
            "radius": radius,
            "family_radius": family_radius,
            "reach": metric.reach(),
            "members": family.len(),
            "flagged_projections": table.flagged(),
        });
        if self.m.op() == "axioms.audit" {
            let audit = audit_axioms(&table, self.num("xi", 2.0))?;
            let partial = audit.undecided > 0;
            return Ok(Outcome::new(&audit, scale)?.partial(partial));
        }
        let (c, k) = (self.num("c", 0.0), self.num("k", 0.0));
        let qt = build_quasitree(&family, &table, c, k)?;
        if self.m.op() == "axioms.quasitree" {
            let results = json!({
                "c": qt.c,
                "k": qt.k,
                "vertices": qt.graph.len(),
                "bundles": qt.bundles,
                "components": qt.components,
                "connected": qt.connected,
                "unsound": qt.unsound,
            });
            return Ok(Outcome::new(results, scale)?.csv(qt.to_csv()));
        }
        let seed = self.m.uint("seed").unwrap_or(0);
        let pairs = sample_pairs(&qt.graph, self.m.uint("pairs").unwrap_or(50) as usize, seed);
        let report = bottleneck_measure(&qt.graph, &pairs, self.num("delta_max", 100.0))?;
        let mut csv = String::from("x,y,delta\n");
        for s in &report.samples {
            let row = serde_json::to_value(s)?;
            let _ = writeln!(csv, "{},{},{}", row["x"], row["y"], row["delta"]);
        }
        let results = json!({ "vertices": qt.graph.len(), "connected": qt.connected, "bottleneck": report });
        Ok(Outcome::new(results, scale)?.csv(csv))
    }

    fn normal_closure(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let metric = WordMetric::new(model.clone(), self.num("reach", radius));
        let h = self.word(&*model, "h")?;
        let g = self.word(&*model, "g")?;
        let n = self.m.int("n").unwrap_or(0);
        let found = find_contracting_in_subgroup(&metric, &h, &g, n, radius, &self.grid("d_grid", &[0.0, 1.0])?)?;
        let partial = found.profile.partial;
        Ok(Outcome::new(&found, json!({ "radius": radius, "reach": metric.reach(), "n": n }))?.partial(partial))
    }

    fn horoball(&self) -> OpResult {
        match self.m.get("base").unwrap_or("line") {
            "line" => self.horoball_on(
                IntegerLine,
                &|t: &str| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::Usage(format!("`{t}` is not an integer point of the line")))
                },
                &|n| n,
            ),
            spec => {
                let model = parse_group(spec)?;
                let m2 = model.clone();
                self.horoball_on(
                    model.clone(),
                    &move |t: &str| Ok(m2.evaluate(&m2.parse_word(t)?)),
                    &|n| model.evaluate(&word_power(&[Letter::pos(0)], n)),
                )
            }
        }
    }

    /// The horoball ops over any base. `point` parses a point label and
    /// `ray` gives the n-th point along a fixed ray from the origin.
    fn horoball_on<B>(
        &self,
        base: B,
        point: &dyn Fn(&str) -> Result<B::Point, CliError>,
        ray: &dyn Fn(i64) -> B::Point,
    ) -> OpResult
    where
        B: Space + Clone,
    {
        let a = self.num("a", 1.0);
        if !(a > 0.0) {
            return Err(CliError::Usage("horoball parameter `a` must be positive".into()));
        }
        let origin = match self.m.get("from") {
            Some(t) => point(t)?,
            None => ray(0),
        };
        let depth = |max_base: f64| self.m.uint("depth").map_or(default_depth(a, max_base), |d| d as u32);
        match self.m.op() {
            "horoball.distance" => {
                let targets: Vec<B::Point> = self.str("to").split(';').map(point).collect::<Result<_, _>>()?;
                let mut base_d = Vec::new();
                for t in &targets {
                    let d = distance(
                        &base,
                        &origin,
                        t,
                        f64::INFINITY,
                        SearchOptions {
                            state_cap: self.cap(DEFAULT_CAP),
                        },
                    );
                    base_d.push(
                        d.value()
                            .ok_or_else(|| CliError::Usage("base distance exceeded the state cap".into()))?,
                    );
                }
                let n = depth(base_d.iter().cloned().fold(1.0, f64::max));
                let space = HoroballSpace::new(base.clone(), a, n);
                let mut rows = Vec::new();
                let mut csv = String::from("pair,distance,truncated\n");
                let labels: Vec<&str> = self.str("to").split(';').map(str::trim).collect();
                let from = self.m.get("from").unwrap_or("origin");
                for ((t, label), db) in targets.iter().zip(&labels).zip(&base_d) {
                    let h = horoball_distance(&space, &origin, t);
                    let _ = writeln!(csv, "{from}~{label},{},{}", format_number(h.distance), h.truncated);
                    rows.push(json!({ "to": label, "base_distance": db, "horoball": h }));
                }
                Ok(Outcome::new(json!({ "pairs": rows }), json!({ "a": a, "depth": n }))?.csv(csv))
            }
            "horoball.spheres" => {
                let radius = self.num("radius", 0.0);
                let n = depth((a * radius / 2.0).exp() * 2.0);
                let space = HoroballSpace::new(base, a, n);
                let s = horoball_sphere_counts(&space, &origin, radius, self.num("width", 0.25));
                let fit = estimate_exponent(&s.counts, None).ok();
                let csv = counts_csv(&s.counts);
                let results = json!({ "spheres": s, "estimate": fit, "predicted": a / 2.0 });
                Ok(Outcome::new(results, json!({ "a": a, "radius": radius, "depth": n }))?.csv(csv))
            }
            _ => {
                let max_base = self.num("max_base", 1000.0).max(10.0);
                let samples = self.m.uint("samples").unwrap_or(21).max(10) as i64;
                let n = depth(max_base);
                let space = HoroballSpace::new(base, a, n);
                let steps: Vec<i64> = (0..samples)
                    .map(|k| (10f64 * (max_base / 10.0).powf(k as f64 / (samples - 1) as f64)).round() as i64)
                    .collect();
                let pairs: Vec<(B::Point, B::Point)> = steps.iter().map(|&s| (origin.clone(), ray(s))).collect();
                let profile = fit_log_profile(&space, &pairs)?;
                let mut csv = String::from("pair,distance,truncated\n");
                for (s, row) in steps.iter().zip(&profile.samples) {
                    let _ = writeln!(csv, "0~{s},{},{}", format_number(row.1), row.2);
                }
                let results = json!({ "profile": profile, "predicted_slope": 2.0 / a });
                Ok(Outcome::new(results, json!({ "a": a, "max_base": max_base, "depth": n }))?.csv(csv))
            }
        }
    }

    /// Peripherals as `b` or `a,b` (a ℤ² pair), several separated by `;`.
    fn augmented(&self, model: Arc<dyn GroupModel>, radius: f64) -> Result<AugmentedSpace, CliError> {
        let a = self.num("a", 1.0);
        let depth = self
            .m
            .uint("depth")
            .map_or(default_depth(a, (a * radius).exp()), |d| d as u32);
        let peripherals = self
            .str("peripherals")
            .split(';')
            .map(|p| {
                let labels: Vec<&str> = p.split(',').map(str::trim).collect();
                Peripheral::new(&*model, &labels, a, depth)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AugmentedSpace::new(model, peripherals))
    }

    fn horoball_gap(&self) -> OpResult {
        let model = self.model()?;
        let radius = self.num("radius", 0.0);
        let aug = self.augmented(model, radius)?;
        let report = parabolic_gap_report(
            &aug,
            radius,
            self.num("width", 0.25),
            self.num("margin", 0.05),
            self.m.pair("window"),
            self.cap(1 << 22),
        )?;
        let partial = report.cap_hit;
        let csv = counts_csv(&report.group_counts);
        Ok(
            Outcome::new(&report, json!({ "radius": radius, "a": self.num("a", 1.0) }))?
                .partial(partial)
                .csv(csv),
        )
    }

    /// The quotient spec, read from `quotient` or built from a relator file.
    fn quotient_spec(&self) -> Result<String, CliError> {
        if let Some(q) = self.m.get("quotient") {
            return Ok(q.to_string());
        }
        let path = self
            .m
            .get("relators")
            .ok_or_else(|| CliError::Usage(format!("{} needs `quotient` or `relators`", self.m.op())))?;
        let path = self.dir.join(path);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let words: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Ok(format!("relators:{}", words.join(";")))
    }

    fn presentation(&self) -> Result<PresentationQuotient, CliError> {
        let rank = self.model()?.rank();
        let spec = self.quotient_spec()?;
        let Some(words) = spec.strip_prefix("relators:") else {
            return Err(CliError::Usage(format!("{} needs relators, got `{spec}`", self.m.op())));
        };
        Ok(PresentationQuotient::parse(rank, &words.replace(';', "\n"))?)
    }

    fn quotient_pieces(&self) -> OpResult {
        let p = self.presentation()?;
        let model = self.model()?;
        let results = json!({
            "relators": p.relators.iter().map(|r| model.format_word(r.letters())).collect::<Vec<_>>(),
            "pieces": p.pieces,
            "witness": p.pieces.witness.as_ref().map(|w| model.format_word(w)),
            "exponent_sums": p.exponent_sums(),
            "symmetrized": p.symmetrized().len(),
        });
        Outcome::new(results, json!({}))
    }

    fn quotient_dehn(&self) -> OpResult {
        let p = self.presentation()?;
        let model = self.model()?;
        let w = self.word(&*model, "word")?;
        let reduced = p.dehn_reduce(&w)?;
        let results = json!({
            "word": model.format_word(&w),
            "reduced": model.format_word(&reduced),
            "trivial": reduced.is_empty(),
        });
        Outcome::new(results, json!({}))
    }

    fn quotient(&self) -> OpResult {
        let q = Quotient::from_spec(self.str("group"), &self.quotient_spec()?)?;
        let radius = self.num("radius", 4.0);
        let cap = self.cap(50_000_000);
        let scale = json!({ "radius": radius, "quotient": q.label() });
        match self.m.op() {
            "quotient.ball" => {
                let ball = quotient_ball(&q, radius, cap)?;
                let csv = counts_csv(&ball.counts);
                Ok(Outcome::new(&ball, scale)?.csv(csv))
            }
            "quotient.section" => {
                let table = minimal_section(&q, radius, cap)?;
                let mut csv = String::from("word,norm,tie_count\n");
                for e in &table.entries {
                    let _ = writeln!(csv, "{},{},{}", e.word, format_number(e.norm), e.tie_count);
                }
                Ok(Outcome::new(&table, scale)?.csv(csv))
            }
            "quotient.net" => {
                let table = minimal_section(&q, radius, cap)?;
                let net = separated_net(&table, self.num("k", 1.0))?;
                Ok(Outcome::new(&net, scale)?)
            }
            "quotient.phi" => {
                let table = minimal_section(&q, radius, cap)?;
                let net = separated_net(&table, self.num("k", 1.0))?;
                let slice = self.m.uint("slice").unwrap_or(4) as usize;
                // Skip the identity, which every net contains.
                let chosen: Vec<usize> = net
                    .members
                    .iter()
                    .copied()
                    .filter(|&i| table.entries[i].norm > 0.0)
                    .take(slice)
                    .collect();
                let a_star: Vec<Element> = chosen.iter().map(|&i| table.entries[i].rep.clone()).collect();
                let model = q.base();
                let h = model.evaluate(&self.word(&**model, "h")?);
                let n = self.m.int("n").unwrap_or(0);
                let k_max = self.m.uint("k_max").unwrap_or(1) as usize;
                let report = phi_injectivity(&**model, &a_star, &h, n, k_max, self.cap(100_000))?;
                let words: Vec<&str> = chosen.iter().map(|&i| table.entries[i].word.as_str()).collect();
                Ok(Outcome::new(json!({ "a_star": words, "phi": report }), scale)?)
            }
            _ => {
                let report = growth_tightness_report(&q, radius, self.m.pair("window"), cap)?;
                Ok(Outcome::new(&report, scale)?)
            }
        }
    }

    fn snowflake_distance(&self) -> OpResult {
        let bb = snowflake(self.str("group"))?;
        let from = bb.evaluate(&self.word(&bb, "from")?);
        let to = bb.evaluate(&self.word(&bb, "to")?);
        let tree = bb.tree_distance(&from, &to);
        let mut out = distance_report(&bb, bb.word_of(&from), bb.word_of(&to), self)?;
        if let Value::Object(r) = &mut out.results {
            r.insert("tree_distance".into(), json!(tree));
        }
        Ok(out)
    }

    fn snowflake_geodesic(&self) -> OpResult {
        let r = self.m.int("r").unwrap_or(0);
        let bb = Snowflake::new(r)?;
        let (x, y) = (self.m.int("x").unwrap_or(0), self.m.int("y").unwrap_or(0));
        let (word, length) = snowflake_geodesic(x, y, r);
        let results = json!({ "r": r, "x": x, "y": y, "word": bb.format_word(&word), "length": length });
        Outcome::new(results, json!({}))
    }
}

fn snowflake(spec: &str) -> Result<Snowflake, CliError> {
    let r = spec
        .trim()
        .strip_prefix("bb:")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("`{spec}` is not a snowflake group bb:<r>")))?;
    Ok(Snowflake::new(r)?)
}

fn distance_report(model: &dyn GroupModel, from: Vec<Letter>, to: Vec<Letter>, ctx: &Ctx) -> OpResult {
    let (u, v) = (model.evaluate(&from), model.evaluate(&to));
    let max = ctx.num("max", f64::INFINITY);
    let opts = SearchOptions {
        state_cap: ctx.cap(DEFAULT_CAP),
    };
    let mut results = json!({ "from": model.format(&u), "to": model.format(&v) });
    let mut partial = false;
    let extra = match distance(model, &u, &v, max, opts) {
        DistanceResult::Exact { distance, path } => {
            let word = geodesic_word(model, &path.vertices);
            json!({ "status": "exact", "distance": distance, "geodesic": word })
        }
        DistanceResult::ExceedsCap => json!({ "status": "exceeds_max", "lower_bound": max }),
        DistanceResult::StateCapHit { lower_bound } => {
            partial = true;
            json!({ "status": "state_cap_hit", "lower_bound": lower_bound })
        }
    };
    if let (Value::Object(r), Value::Object(e)) = (&mut results, extra) {
        r.extend(e);
    }
    Ok(Outcome::new(
        results,
        json!({ "max": if max.is_finite() { json!(max) } else { Value::Null }, "state_cap": opts.state_cap }),
    )?
    .partial(partial))
}

/// Labels along a vertex path: the generator taking each vertex to the next.
fn geodesic_word(model: &dyn GroupModel, path: &[Element]) -> String {
    let mut word = Vec::new();
    for w in path.windows(2) {
        let step = (0..model.rank())
            .flat_map(|i| [Letter::pos(i), Letter::neg(i)])
            .find(|&l| model.mul_letter(&w[0], l) == w[1]);
        if let Some(l) = step {
            word.push(l);
        }
    }
    model.format_word(&word)
}
