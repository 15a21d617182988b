use growthlab::axioms::*;
use growthlab::groups::{parse_group, Letter};
use growthlab::metric_space::ExplicitGraph;
use growthlab::projection::WordMetric;
use proptest::prelude::*;
use std::sync::OnceLock;

fn word(m: &WordMetric, w: &str) -> Vec<Letter> {
    m.model().parse_word(w).unwrap()
}

fn f2() -> &'static WordMetric {
    static M: OnceLock<WordMetric> = OnceLock::new();
    M.get_or_init(|| WordMetric::new(parse_group("free:2").unwrap(), 8.0))
}

struct Built {
    family: AxisFamily,
    table: ProjectionTable,
}

fn f2_family() -> &'static Built {
    static B: OnceLock<Built> = OnceLock::new();
    B.get_or_init(|| {
        let m = f2();
        let family = AxisFamily::translates(m, &word(m, "a"), 8.0, 4.0).unwrap();
        let table = projection_table(m, &family);
        Built { family, table }
    })
}

fn z2_family() -> &'static Built {
    static B: OnceLock<Built> = OnceLock::new();
    B.get_or_init(|| {
        let m = WordMetric::new(parse_group("raag:a-b").unwrap(), 8.0);
        let family = AxisFamily::translates(&m, &word(&m, "a"), 8.0, 4.0).unwrap();
        let table = projection_table(&m, &family);
        Built { family, table }
    })
}

#[test]
fn free_family_passes_all_axioms() {
    let b = f2_family();
    // Coset representatives not ending in a^±1 with length ≤ 4.
    assert_eq!(b.family.len(), 81);
    assert_eq!(b.family.merged, 0);
    assert!(b.family.members.iter().all(|m| m.separation > b.family.threshold));
    let audit = audit_axioms(&b.table, 2.0).unwrap();
    assert!(audit.pass);
    assert_eq!((audit.p0_count, audit.p1_count, audit.undecided), (0, 0, 0));
    // Projections between distinct cosets in a tree are single vertices.
    assert_eq!(audit.least_passing_xi, 0.0);
}

#[test]
fn projection_onto_a_neighbouring_coset_is_a_vertex() {
    let b = f2_family();
    let m = f2();
    let find = |w: &str| {
        let e = m.model().evaluate(&word(m, w));
        b.family.members.iter().position(|x| x.subset.contains(&e)).unwrap()
    };
    let (axis, shifted) = (find(""), find("b"));
    let e = b.table.entry(shifted, axis).unwrap();
    assert_eq!((e.lo, e.hi, e.diameter), (0, 0, 0.0));
    assert_eq!(b.table.d_pi(shifted, axis, axis).unwrap().0, e.diameter);
}

#[test]
fn parallel_lines_fail_p0() {
    let b = z2_family();
    // b^k·⟨a⟩ within distance 2 of each other merge, leaving k ∈ {−3, 0, 3}.
    assert_eq!(b.family.len(), 3);
    let audit = audit_axioms(&b.table, 2.0).unwrap();
    assert!(!audit.pass);
    assert!(audit.p0_count > 0);
    let w = &audit.p0[0];
    assert!(w.diameter > 2.0);
    assert!(audit.least_passing_xi >= w.diameter);
}

#[test]
fn lone_member_is_vacuous() {
    let m = f2();
    let family = AxisFamily::translates(m, &word(m, "a"), 8.0, 0.0).unwrap();
    assert_eq!(family.len(), 1);
    let table = projection_table(m, &family);
    let audit = audit_axioms(&table, 0.0).unwrap();
    assert!(audit.pass);
    let qt = build_quasitree(&family, &table, 1.0, 1.0).unwrap();
    assert!(qt.bundles.is_empty() && qt.connected);
}

#[test]
fn bad_inputs_are_rejected() {
    let m = f2();
    assert!(AxisFamily::translates(m, &word(m, "a -a"), 4.0, 2.0).is_err());
    assert!(AxisFamily::translates(m, &word(m, "a"), 4.0, 5.0).is_err());
    assert!(AxisFamily::translates(m, &word(m, "a"), 9.0, 2.0).is_err());
    let b = f2_family();
    assert!(audit_axioms(&b.table, -1.0).is_err());
    assert!(build_quasitree(&b.family, &b.table, 0.0, 1.0).is_err());
}

#[test]
fn quasitree_is_connected_and_sound() {
    let b = f2_family();
    for (c, k) in [(2.0, 2.0), (0.5, 3.0)] {
        let qt = build_quasitree(&b.family, &b.table, c, k).unwrap();
        assert!(qt.connected, "C={c}");
        assert_eq!(qt.unsound, 0);
        let n = b.family.len();
        let bundled: std::collections::HashSet<(usize, usize)> = qt.bundles.iter().map(|e| (e.x, e.y)).collect();
        for x in 0..n {
            for y in x + 1..n {
                let blocked = (0..n).any(|z| z != x && z != y && b.table.d_pi(z, x, y).unwrap().0 > c);
                assert_eq!(bundled.contains(&(x, y)), !blocked);
            }
        }
        let pairs = sample_pairs(&qt.graph, 50, 7);
        assert_eq!(pairs.len(), 50);
        let report = bottleneck_measure(&qt.graph, &pairs, 100.0).unwrap();
        assert_eq!(report.exceeded, 0);
        assert!(report.delta_hat <= k + 4.0);
    }
}

#[test]
fn csv_lists_every_edge() {
    let b = f2_family();
    let qt = build_quasitree(&b.family, &b.table, 2.0, 2.0).unwrap();
    let csv = qt.to_csv();
    assert_eq!(csv.lines().count(), 1 + qt.graph.edges().count());
    assert!(csv.lines().skip(1).any(|l| l.ends_with(",k")));
}

#[test]
fn tree_bottleneck_is_small() {
    let g = ExplicitGraph::path(21);
    let pairs: Vec<(u32, u32)> = (0..10).map(|i| (i, 20 - i)).chain([(0, 19), (3, 8)]).collect();
    let report = bottleneck_measure(&g, &pairs, 50.0).unwrap();
    assert!(report.samples.iter().all(|s| s.delta.unwrap() <= 1.0));
    assert_eq!(report.samples[0].delta, Some(0.0));
}

#[test]
fn cycle_bottleneck_grows_linearly() {
    for l in [4u32, 8, 16, 32] {
        let g = ExplicitGraph::cycle(2 * l as usize);
        let pairs: Vec<(u32, u32)> = (0..2 * l).map(|i| (i, (i + l) % (2 * l))).collect();
        let report = bottleneck_measure(&g, &pairs, 100.0).unwrap();
        assert_eq!(report.delta_hat, (l / 2) as f64);
    }
    let mut split = ExplicitGraph::new(4);
    split.add_edge(0, 1, 1.0);
    split.add_edge(2, 3, 1.0);
    assert!(bottleneck_measure(&split, &[(0, 3)], 10.0).is_err());
    let capped = bottleneck_measure(&ExplicitGraph::cycle(40), &[(0, 20)], 3.0).unwrap();
    assert_eq!((capped.exceeded, capped.samples[0].delta), (1, None));
}

#[test]
fn commutator_axis_contracts_exactly() {
    let m = f2();
    let c = find_contracting_in_subgroup(m, &word(m, "a"), &word(m, "b"), 2, 6.0, &[0.0, 1.0]).unwrap();
    assert_eq!(c.f, "b a^2 -b -a^2");
    for cell in &c.profile.cells {
        assert_eq!(cell.c, Some(0.0));
        assert!(cell.pairs > 0);
    }
    assert!(c.drift.iter().any(|d| d.1 > 3.0));
}

#[test]
fn elementary_closure_is_rejected() {
    let m = f2();
    for g in ["a", "a^3", "-a"] {
        let err = find_contracting_in_subgroup(m, &word(m, "a"), &word(m, g), 2, 6.0, &[0.0]).unwrap_err();
        assert!(err.to_string().contains("E(h)"), "{g}: {err}");
    }
    assert!(find_contracting_in_subgroup(m, &word(m, "a"), &word(m, "b"), 0, 6.0, &[0.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn table_is_symmetric(x in 0usize..81, y in 0usize..81, z in 0usize..81) {
        let t = &f2_family().table;
        prop_assume!(x != y && z != y);
        prop_assert_eq!(t.d_pi(y, x, z), t.d_pi(y, z, x));
        prop_assert_eq!(t.d_pi(y, x, x).unwrap().0, t.entry(y, x).unwrap().diameter);
    }

    #[test]
    fn violations_shrink_as_xi_grows(a in 0.0f64..12.0, b in 0.0f64..12.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for built in [z2_family(), f2_family()] {
            let small = audit_axioms(&built.table, lo).unwrap();
            let large = audit_axioms(&built.table, hi).unwrap();
            prop_assert!(large.p0_count <= small.p0_count);
            prop_assert!(large.p1_count <= small.p1_count);
            prop_assert!(large.p2_max <= small.p2_max);
            prop_assert_eq!(small.least_passing_xi, large.least_passing_xi);
            prop_assert_eq!(small.pass, lo >= small.least_passing_xi);
        }
    }
}
