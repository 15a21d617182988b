//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use growthlab::axioms::*;
use growthlab::groups::{invert_word, parse_group, snowflake_geodesic, word_power, GroupModel, Letter, Snowflake};
use growthlab::growth::{conjugacy_growth, estimate_exponent};
use growthlab::horoball::{default_depth, fit_log_profile, horoball_distance, horoball_sphere_counts, HoroballSpace};
use growthlab::metric_space::{
    distance, group_ball, sphere_counts, BallOptions, ExplicitGraph, IntegerLine, SearchOptions,
};
use growthlab::projection::*;
use growthlab::quotient::*;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn word(model: &dyn GroupModel, text: &str) -> Vec<Letter> {
    model.parse_word(text).unwrap()
}

fn free_exactness() -> Outcome {
    let model = parse_group("free:2").map_err(err)?;
    let ball = group_ball(&*model, 12.0, BallOptions::counting());
    let counts = sphere_counts(&ball, 1.0);
    let exact = (1..=10u32).all(|n| counts.counts[n as usize] == 4 * 3u64.pow(n - 1));
    let fit = estimate_exponent(&counts, Some((6.0, 12.0))).map_err(err)?;
    let off = (fit.delta - 3f64.ln()).abs();
    check(
        exact && off <= 0.02,
        format!(
            "spheres exact to 10: {exact}; δ̂ = {:.5}, |δ̂ − ln 3| = {off:.5}",
            fit.delta
        ),
    )
}

fn non_growth_tight() -> Outcome {
    let q = Quotient::from_spec("product(free:2,free:2):l1", "factor:2").map_err(err)?;
    let r = growth_tightness_report(&q, 10.0, None, 50_000_000).map_err(err)?;
    check(
        r.gap.abs() <= 0.03,
        format!(
            "radius 10: δ̂_G = {:.5}, δ̂_Q = {:.5}, gap = {:.5}",
            r.group.delta, r.quotient_fit.delta, r.gap
        ),
    )
}

/// First length-13 word (in a fixed search order) whose pieces have length
/// ≤ 2. Candidates are filtered on repeated 3-letter subwords, then handed
/// to the piece checker for the verdict.
fn small_cancellation_relator() -> Option<Vec<Letter>> {
    fn go(w: &mut Vec<Letter>, used: &mut Vec<[Letter; 3]>) -> Option<Vec<Letter>> {
        if w.len() == 13 {
            let ok = w[0] != w[12].inverse() && small_cancellation_check(std::slice::from_ref(w)).c6;
            return ok.then(|| w.clone());
        }
        for code in 0..4 {
            let l = if code % 2 == 0 {
                Letter::pos(code / 2)
            } else {
                Letter::neg(code / 2)
            };
            if w.last() == Some(&l.inverse()) {
                continue;
            }
            let n = w.len();
            let fresh = n < 2 || {
                let t = [w[n - 2], w[n - 1], l];
                let ti = [l.inverse(), w[n - 1].inverse(), w[n - 2].inverse()];
                !used.contains(&t) && !used.contains(&ti)
            };
            if !fresh {
                continue;
            }
            if n >= 2 {
                used.push([w[n - 2], w[n - 1], l]);
                used.push([l.inverse(), w[n - 1].inverse(), w[n - 2].inverse()]);
            }
            w.push(l);
            let found = go(w, used);
            w.pop();
            if n >= 2 {
                used.truncate(used.len() - 2);
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(&mut vec![Letter::pos(0)], &mut Vec::new())
}

fn growth_tight() -> Outcome {
    let r = small_cancellation_relator().ok_or("no length-13 relator passed the piece checker")?;
    let p = PresentationQuotient::new(2, &[r]).map_err(err)?;
    let label = parse_group("free:2").map_err(err)?.format_word(p.relators[0].letters());
    let q = Quotient::presentation(p);
    let t = growth_tightness_report(&q, 10.0, None, 50_000_000).map_err(err)?;
    check(
        t.gap >= 0.05,
        format!(
            "{label}: δ̂_F2 = {:.5}, δ̂_Q = {:.5}, gap = {:.5} (need ≥ 0.05)",
            t.group.delta, t.quotient_fit.delta, t.gap
        ),
    )
}

fn snowflake_distances() -> Outcome {
    let bb = parse_group("bb:3").map_err(err)?;
    let a = word(&*bb, "a");
    let mut lengths = Vec::new();
    for k in 1..=5u32 {
        let n = 6i64.pow(k);
        let (w, len) = snowflake_geodesic(n, 0, 3);
        let target = bb.evaluate(&word_power(&a, n));
        if len != 5 * 2i64.pow(k) - 4 || w.len() as i64 != len || bb.evaluate(&w) != target {
            return Err(format!("k = {k}: length {len}"));
        }
        lengths.push(len);
    }
    let id = bb.identity();
    let opts = SearchOptions { state_cap: 6_000_000 };
    let d6 = distance(&*bb, &id, &bb.evaluate(&word_power(&a, 6)), 6.0, opts).value();
    let d36 = distance(&*bb, &id, &bb.evaluate(&word_power(&a, 36)), 16.0, opts).value();
    check(
        d6 == Some(6.0) && d36 == Some(16.0),
        format!("family lengths {lengths:?}; certified d(1,a^6) = {d6:?}, d(1,a^36) = {d36:?}"),
    )
}

fn alpha_beta() -> Outcome {
    let bb = Arc::new(Snowflake::new(3).map_err(err)?);
    let metric = WordMetric::new(bb.clone(), 8.0);
    let alpha = alpha_orbit(&bb, -12..=12).map_err(err)?;
    let scan = alpha_bgi_scan(&bb, &metric, &alpha, 10.0, 1.0, 5, 100_000).map_err(err)?;
    let beta = beta_orbit(&bb, -24..=24).map_err(err)?;
    let w = beta_witness(&bb, &*bb, &beta, 2.0).map_err(err)?;
    let projections_ok = w.projections == vec![(1, 1), (2, 2)];
    check(
        scan.violations == 0 && scan.long_projections > 0 && !scan.partial && w.projection_diameter > 0 && w.avoids >= 2.0 && projections_ok,
        format!(
            "α: {} geodesics over {} pairs, {} with tree projection ≥ 5, {} miss α; β: witness of length {} avoiding N_{}(β), π_β(a^6^j) = {:?}, diameter {}",
            scan.geodesics, scan.pairs, scan.long_projections, scan.violations, w.length, w.avoids, w.projections, w.projection_diameter
        ),
    )
}

fn horoball_growth() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (a, r) in [(0.5, 40.0), (1.0, 20.0), (2.0, 12.0)] {
        let max_base = (a * r / 2.0_f64).exp() * 2.0;
        let h = HoroballSpace::new(IntegerLine, a, default_depth(a, max_base));
        let s = horoball_sphere_counts(&h, &0, r, 0.25);
        // Pure exponential growth: the log-linear cumulative fit. The ln r
        // prefactor term is reported but not used, since it only chases the
        // periodic modulation of the counts.
        let fit = estimate_exponent(&s.counts, None).map_err(err)?;
        let rel = (fit.plain_cumulative - a / 2.0).abs() / (a / 2.0);
        ok &= rel <= 0.10 && !s.truncated;
        parts.push(format!(
            "a={a} r={r}: δ̂ = {:.4} ({:.1}% off; with prefactor {:.4})",
            fit.plain_cumulative,
            100.0 * rel,
            fit.delta
        ));
        let h = HoroballSpace::new(IntegerLine, a, default_depth(a, 1000.0));
        let pairs: Vec<(i64, i64)> = (0..=20)
            .map(|k| (0, (10.0 * 100f64.powf(k as f64 / 20.0)).round() as i64))
            .collect();
        let excess: Vec<f64> = pairs
            .iter()
            .map(|&(x, y)| horoball_distance(&h, &x, &y).distance - (2.0 / a) * (y as f64).ln())
            .collect();
        let spread = excess.iter().fold(f64::MIN, |m, &x| m.max(x)) - excess.iter().fold(f64::MAX, |m, &x| m.min(x));
        let profile = fit_log_profile(&h, &pairs).map_err(err)?;
        ok &= spread <= 4.0;
        parts.push(format!("excess spread {spread:.3}, log slope {:.3}", profile.slope));
    }
    check(ok, parts.join("; "))
}

fn projection_axioms() -> Outcome {
    let m = WordMetric::new(parse_group("free:2").map_err(err)?, 8.0);
    let family = AxisFamily::translates(&m, &word(m.model(), "a"), 8.0, 4.0).map_err(err)?;
    let audit = audit_axioms(&projection_table(&m, &family), 2.0).map_err(err)?;
    let z = WordMetric::new(parse_group("raag:a-b").map_err(err)?, 8.0);
    let zf = AxisFamily::translates(&z, &word(z.model(), "a"), 8.0, 4.0).map_err(err)?;
    let za = audit_axioms(&projection_table(&z, &zf), 2.0).map_err(err)?;
    let clean = audit.pass && audit.p0_count + audit.p1_count + audit.undecided == 0;
    check(
        clean && !za.pass && za.p0_count > 0 && !za.p0.is_empty(),
        format!(
            "F2: {} members, pass {} (least ξ {}); Z2: {} members, P0 violations {}",
            audit.members, audit.pass, audit.least_passing_xi, za.members, za.p0_count
        ),
    )
}

fn quasitree_bottleneck() -> Outcome {
    let m = WordMetric::new(parse_group("free:2").map_err(err)?, 8.0);
    let family = AxisFamily::translates(&m, &word(m.model(), "a"), 8.0, 4.0).map_err(err)?;
    let table = projection_table(&m, &family);
    let (c, k) = (2.0, 2.0);
    let qt = build_quasitree(&family, &table, c, k).map_err(err)?;
    let pairs = sample_pairs(&qt.graph, 50, 7);
    let report = bottleneck_measure(&qt.graph, &pairs, 100.0).map_err(err)?;
    let mut cycle = Vec::new();
    for l in [4u32, 8, 16, 32] {
        let g = ExplicitGraph::cycle(2 * l as usize);
        let p: Vec<(u32, u32)> = (0..2 * l).map(|i| (i, (i + l) % (2 * l))).collect();
        cycle.push(bottleneck_measure(&g, &p, 100.0).map_err(err)?.delta_hat);
    }
    let linear = cycle.iter().zip([4.0, 8.0, 16.0, 32.0]).all(|(d, l)| *d == l / 2.0);
    check(
        qt.connected && pairs.len() == 50 && report.delta_hat <= k + 4.0 && report.delta_hat == k && linear,
        format!(
            "{} vertices, {} K-edge bundles, connected {}; Δ̂ = {} (bound {}, regression {k}); cycle Δ̂ {:?}",
            qt.graph.len(),
            qt.bundles.len(),
            qt.connected,
            report.delta_hat,
            k + 4.0,
            cycle
        ),
    )
}

fn conjugacy() -> Outcome {
    let model = parse_group("free:2").map_err(err)?;
    let h = model.evaluate(&word(&*model, "a b -a -b"));
    let r = conjugacy_growth(&*model, &h, 14.0, None).map_err(err)?;
    let ratio = r.ratio.ok_or("ratio undefined")?;
    check(
        (0.4..=0.6).contains(&ratio),
        format!("δ̂_[ab]/δ̂_F2 = {ratio:.4} at radius 14"),
    )
}

fn phi() -> Outcome {
    let q = Quotient::from_spec("free:2", "kill:b").map_err(err)?;
    let table = minimal_section(&q, 4.0, 1_000_000).map_err(err)?;
    let net = separated_net(&table, 1.0).map_err(err)?;
    let slice: Vec<_> = net.members[1..5]
        .iter()
        .map(|&i| table.entries[i].rep.clone())
        .collect();
    let model = q.base();
    let b = model.evaluate(&word(&**model, "b"));
    let on = phi_injectivity(&**model, &slice, &b, 2, 3, 10_000).map_err(err)?;
    let off = phi_injectivity(&**model, &slice, &b, 0, 3, 10_000).map_err(err)?;
    check(
        on.injective && off.collision.is_some(),
        format!(
            "A* = {:?}; n = 2: {} tuples, injective {}; n = 0: collision {:?}",
            &net.words[1..5],
            on.tuples,
            on.injective,
            off.collision.map(|c| (c.first, c.second))
        ),
    )
}

fn equivalence() -> Outcome {
    let f2 = WordMetric::new(parse_group("free:2").map_err(err)?, 8.0);
    let z2 = WordMetric::new(parse_group("raag:a-b").map_err(err)?, 8.0);
    let bb = Arc::new(Snowflake::new(3).map_err(err)?);
    let bbm = WordMetric::new(bb.clone(), 8.0);
    let axis = |m: &WordMetric| RealizedSubset::axis(m.model(), &word(m.model(), "a"), -12..=12).unwrap();
    let cases = [
        (&f2, axis(&f2)),
        (&z2, axis(&z2)),
        (&bbm, alpha_orbit(&bb, -12..=12).map_err(err)?),
        (&bbm, beta_orbit(&bb, -12..=12).map_err(err)?),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, subset) in &cases {
        let v = equivalence_check(m, subset, 4.0, 2.0, 100_000).map_err(err)?;
        ok &= v.agree();
        parts.push(format!(
            "{} {}: contraction {} bgi {} constriction {}",
            m.model().spec(),
            v.subset,
            v.contraction_bounded,
            v.bgi_bounded,
            v.constriction_bounded
        ));
    }
    check(ok, parts.join("; "))
}

fn normal_subgroup() -> Outcome {
    let m = WordMetric::new(parse_group("free:2").map_err(err)?, 8.0);
    let (a, b) = (word(m.model(), "a"), word(m.model(), "b"));
    let c = find_contracting_in_subgroup(&m, &a, &b, 2, 8.0, &[0.0, 1.0]).map_err(err)?;
    let zero = c.profile.cells.iter().all(|cell| cell.c == Some(0.0) && cell.pairs > 0);
    let rejected = find_contracting_in_subgroup(&m, &a, &a, 2, 8.0, &[0.0]).is_err()
        && find_contracting_in_subgroup(&m, &a, &invert_word(&a), 2, 8.0, &[0.0]).is_err();
    check(
        zero && rejected && c.f == "b a^2 -b -a^2",
        format!(
            "f = {}: contraction constants {:?}; g ∈ E(h) rejected {rejected}",
            c.f,
            c.profile.cells.iter().map(|x| x.c).collect::<Vec<_>>()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("free-group exactness", Duration::from_secs(30), free_exactness),
        ("non-growth-tight witness", Duration::from_secs(120), non_growth_tight),
        ("growth-tight witness", Duration::from_secs(120), growth_tight),
        ("snowflake distances", Duration::from_secs(180), snowflake_distances),
        ("alpha/beta dichotomy", Duration::from_secs(300), alpha_beta),
        ("horoball growth", Duration::from_secs(60), horoball_growth),
        ("projection axioms", Duration::from_secs(60), projection_axioms),
        ("quasi-tree bottleneck", Duration::from_secs(60), quasitree_bottleneck),
        ("conjugacy growth", Duration::from_secs(60), conjugacy),
        ("phi injection", Duration::from_secs(10), phi),
        ("equivalence suite", Duration::from_secs(600), equivalence),
        ("normal-subgroup constructor", Duration::from_secs(600), normal_subgroup),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (status, detail) = match &outcome {
            Ok(d) if took <= *budget => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d} [over the {}s budget]", budget.as_secs())),
            Err(d) => ("FAIL", d.clone()),
        };
        println!(
            "criterion {:>2} {status} {name} ({:.1}s): {detail}",
            i + 1,
            took.as_secs_f64()
        );
        if status == "FAIL" {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
