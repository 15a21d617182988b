use growthlab::groups::{parse_group, GroupModel, Snowflake};
use growthlab::projection::*;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn f2() -> &'static WordMetric {
    static M: OnceLock<WordMetric> = OnceLock::new();
    M.get_or_init(|| WordMetric::new(parse_group("free:2").unwrap(), 8.0))
}

fn z2() -> &'static WordMetric {
    static M: OnceLock<WordMetric> = OnceLock::new();
    M.get_or_init(|| WordMetric::new(parse_group("raag:a-b").unwrap(), 12.0))
}

fn a_axis(m: &WordMetric, range: std::ops::RangeInclusive<i64>) -> RealizedSubset {
    let model = m.model();
    RealizedSubset::axis(model, &model.parse_word("a").unwrap(), range).unwrap()
}

fn el(m: &dyn GroupModel, w: &str) -> growthlab::groups::Element {
    m.evaluate(&m.parse_word(w).unwrap())
}

#[test]
fn free_word_projects_to_its_axis_prefix() {
    let m = f2();
    let axis = a_axis(m, -10..=10);
    let p = closest_point_projection(m, &axis, &el(m.model(), "a^2 b^3")).unwrap();
    assert_eq!(p.distance, 3.0);
    assert_eq!((p.lo, p.hi, p.members.len()), (2, 2, 1));
}

#[test]
fn far_points_are_not_in_the_ball() {
    let (_, m) = snowflake();
    let axis = a_axis(m, 0..=0);
    assert!(closest_point_projection(m, &axis, &el(m.model(), "a^36")).is_err());
}

#[test]
fn free_axis_contraction_is_zero() {
    let m = f2();
    let prof = contraction_scan(m, &a_axis(m, -14..=14), 6.0, &[1.0, 2.0], &[0.0, 1.0]).unwrap();
    for cell in &prof.cells {
        assert_eq!(cell.c, Some(0.0), "E={} D={}", cell.e, cell.d);
        assert!(cell.pairs > 0);
    }
    assert!(prof.strongly_contracting);
}

#[test]
fn flat_axis_contraction_grows() {
    let m = z2();
    let r = 6.0;
    let prof = contraction_scan(m, &a_axis(m, -18..=18), r, &[1.0], &[0.0]).unwrap();
    let c = prof.cell(1.0, 0.0).unwrap().c.unwrap();
    assert!(c >= r / 2.0 - 1.0, "C(1,0) = {c}");
    assert!(!prof.strongly_contracting);
}

#[test]
fn all_points_on_the_subset_is_vacuous() {
    let m = f2();
    let prof = contraction_scan(m, &a_axis(m, -3..=3), 0.0, &[1.0], &[0.0]).unwrap();
    assert_eq!(prof.cells[0].c, None);
    assert_eq!(prof.cells[0].pairs, 0);
}

#[test]
fn bad_grids_are_rejected() {
    let m = f2();
    let axis = a_axis(m, -3..=3);
    assert!(contraction_scan(m, &axis, 2.0, &[0.5], &[0.0]).is_err());
    assert!(contraction_scan(m, &axis, 2.0, &[1.0], &[]).is_err());
    assert!(contraction_scan(m, &axis, 20.0, &[1.0], &[0.0]).is_err());
}

#[test]
fn tree_geodesic_scans() {
    let m = f2();
    let axis = a_axis(m, -14..=14);
    let bgi = bgi_test(m, &axis, 4.0, 1.0, Some(0.0), 64).unwrap();
    assert!(bgi.geodesics > 0);
    assert_eq!((bgi.max_value, bgi.violations), (0.0, 0));
    // In a tree a geodesic between points with distinct projections runs
    // through both of them.
    let con = constriction_test(m, &axis, 4.0, 0.0, 64).unwrap();
    assert!(con.geodesics > 0);
    assert_eq!(con.max_value, 0.0);
    for d in [0.0, 1.0, 2.0] {
        let morse = morse_profile(m, &axis, 4.0, d, 64).unwrap();
        assert_eq!(morse.max_value, d);
    }
}

#[test]
fn flat_morse_profile_equals_d() {
    // ℓ¹ geodesics between points within D of a line are monotone in the
    // transverse coordinate, so they never stray farther than D.
    let m = z2();
    let axis = a_axis(m, -12..=12);
    for d in [1.0, 2.0] {
        let morse = morse_profile(m, &axis, 4.0, d, 256).unwrap();
        assert_eq!(morse.max_value, d);
        assert!(morse.witness.is_some());
    }
}

#[test]
fn flat_bgi_is_unbounded() {
    let m = z2();
    let scan = bgi_test(m, &a_axis(m, -12..=12), 5.0, 1.0, None, 256).unwrap();
    assert!(scan.max_value >= 4.0, "{}", scan.max_value);
    assert!(!scan.bounded);
}

fn snowflake() -> &'static (Arc<Snowflake>, WordMetric) {
    static M: OnceLock<(Arc<Snowflake>, WordMetric)> = OnceLock::new();
    M.get_or_init(|| {
        let bb = Arc::new(Snowflake::new(3).unwrap());
        let metric = WordMetric::new(bb.clone(), 6.0);
        (bb, metric)
    })
}

#[test]
fn tree_projection_tracks_metric_projection() {
    let (bb, m) = snowflake();
    let alpha = alpha_orbit(bb, -12..=12).unwrap();
    let line = TreeLine::new(bb, &alpha);
    let probe = m.probe();
    let mut compared = 0;
    for i in probe.within(3.0) {
        let g = probe.point(i);
        let (Some(t), Ok(p)) = (line.project(bb, g), closest_point_projection(m, &alpha, g)) else {
            continue;
        };
        assert!(
            (p.lo - t).abs() <= 4 && (p.hi - t).abs() <= 4,
            "{}: tree {t}, metric {p:?}",
            m.model().format(g)
        );
        compared += 1;
    }
    assert!(compared > 100);
}

#[test]
fn beta_projection_of_a_to_the_l() {
    let (bb, _) = snowflake();
    let beta = beta_orbit(bb, -12..=12).unwrap();
    let (d, nearest) = beta_projection(bb, &**bb, &beta, &el(&**bb, "a^6")).unwrap();
    assert_eq!((d, nearest), (5.0, vec![1]));
    let short = beta_orbit(bb, 0..=1).unwrap();
    assert!(beta_projection(bb, &**bb, &short, &el(&**bb, "a^6")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subset_points_project_to_themselves(i in -10i64..=10) {
        let m = f2();
        let axis = a_axis(m, -10..=10);
        let x = el(m.model(), &format!("a^{i}"));
        let p = closest_point_projection(m, &axis, &x).unwrap();
        prop_assert_eq!(p.distance, 0.0);
        prop_assert_eq!((p.lo, p.hi), (i, i));
    }

    /// Distance to the subset is 1-Lipschitz, and projections of adjacent
    /// points in a tree are at most one step apart.
    #[test]
    fn projection_is_coarsely_lipschitz(i in 0usize..1400, gen in 0usize..4) {
        let m = f2();
        let axis = a_axis(m, -14..=14);
        let probe = m.probe();
        let x = probe.point(i % probe.within(5.0).end).clone();
        let y = m.model().evaluate(&[m.model().word_of(&x), m.model().parse_word(["a", "-a", "b", "-b"][gen]).unwrap()].concat());
        let px = closest_point_projection(m, &axis, &x).unwrap();
        let py = closest_point_projection(m, &axis, &y).unwrap();
        prop_assert!((px.distance - py.distance).abs() <= 1.0);
        prop_assert!(px.joint_diameter(&py) <= 1.0);
        prop_assert!(m.dist(&x, &y).unwrap() >= (px.distance - py.distance).abs());
    }
}
