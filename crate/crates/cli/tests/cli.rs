use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn growthlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_manifest(dir: &Path, text: &str, extra: &[&str]) -> Output {
    let path = dir.join("experiment.manifest");
    std::fs::write(&path, text).unwrap();
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    growthlab(&args)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn strip_timing(mut v: Value) -> Value {
    let meta = v["meta"].as_object_mut().unwrap();
    meta.remove("wall_clock_seconds");
    meta.remove("timestamp_unix");
    v
}

fn floats(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) if n.is_f64() => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| floats(x, out)),
        Value::Object(m) => m.values().for_each(|x| floats(x, out)),
        _ => {}
    }
}

#[test]
fn free_group_fit_from_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_manifest(
        dir.path(),
        "# growth of F2\nop = growth.fit\ngroup = free:2\nradius = 12\n",
        &[],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["manifest", "results", "meta"]);
    let delta = r["results"]["estimate"]["delta"].as_f64().unwrap();
    assert!((delta - 3f64.ln()).abs() < 0.02, "δ̂ = {delta}");
    // Spheres of F2 have 4·3^(n−1) elements.
    let counts: Vec<u64> = r["results"]["counts"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert_eq!(counts[..4], [1, 4, 12, 36]);
    assert_eq!(counts[12], 4 * 3u64.pow(11));
    assert_eq!(r["meta"]["scale"]["radius"], 12.0);
    assert_eq!(r["meta"]["rng"], "ChaCha8");
    assert_eq!(r["meta"]["partial"], false);
}

#[test]
fn empty_manifest_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_manifest(dir.path(), "# only a comment\n\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("1:1"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_manifests_are_rejected_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("op = growth.fit\ngroup = free:2\n  radius 12\n", "3:3"),
        ("op = growth.fit\ngroup = free:2\nradius = twelve\n", "3:1"),
        ("op = growth.fit\ngroup = hyperbolic:2\nradius = 4\n", "unknown group"),
        ("op = growth.flt\ngroup = free:2\n", "unknown op"),
        ("op = growth.fit\ngroup = free:2\n", "needs `radius`"),
        (
            "op = growth.fit\ngroup = free:2\nradius = 4\nxi = 1\n",
            "does not take `xi`",
        ),
    ];
    for (text, needle) in cases {
        let out = run_manifest(dir.path(), text, &[]);
        assert_eq!(out.status.code(), Some(1), "{text}");
        assert!(stderr(&out).contains(needle), "{text}: {}", stderr(&out));
    }
}

#[test]
fn cap_limited_ball_exits_partial() {
    let out = growthlab(&["group", "ball", "--group", "free:3", "--radius", "20", "--cap", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["meta"]["partial"], true);
    assert_eq!(r["results"]["cap_hit"], true);
    let trusted = r["results"]["counts"]["trusted"].as_array().unwrap();
    assert!(trusted.iter().any(|t| t == false));
}

#[test]
fn json_round_trips() {
    let out = growthlab(&[
        "growth",
        "conjugacy",
        "--group",
        "free:2",
        "--radius",
        "10",
        "--set",
        "h=a b -a -b",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = json(&out);
    let again: Value = serde_json::from_str(&serde_json::to_string(&first).unwrap()).unwrap();
    assert_eq!(first, again);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    floats(&first, &mut a);
    floats(&again, &mut b);
    assert!(!a.is_empty());
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn floats_carry_at_most_twelve_significant_digits() {
    let out = growthlab(&["horoball", "fit", "--param", "0.7", "--set", "max_base=500"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut xs = Vec::new();
    floats(&json(&out), &mut xs);
    for x in xs {
        let mantissa = format!("{x:e}");
        let digits = mantissa
            .split('e')
            .next()
            .unwrap()
            .chars()
            .filter(char::is_ascii_digit)
            .count();
        assert!(digits <= 12, "{x}");
    }
}

#[test]
fn reports_are_deterministic_given_the_seed() {
    let args = [
        "axioms",
        "bottleneck",
        "--group",
        "free:2",
        "--axis",
        "a",
        "--radius",
        "8",
        "--set",
        "family_radius=4",
        "--C",
        "2",
        "--K",
        "2",
        "--seed",
        "11",
    ];
    let (x, y) = (growthlab(&args), growthlab(&args));
    assert!(x.status.success(), "{}", stderr(&x));
    let (x, y) = (strip_timing(json(&x)), strip_timing(json(&y)));
    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    assert_eq!(x["meta"]["seed"], 11);
}

#[test]
fn csv_outputs_have_documented_columns() {
    let header = |args: &[&str]| {
        let out = growthlab(args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    let spheres = growthlab(&[
        "growth", "fit", "--group", "raag:a-b", "--radius", "6", "--format", "csv",
    ]);
    let text = String::from_utf8(spheres.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "radius,count,cumulative,trusted");
    // ℤ² spheres hold 4n points.
    assert_eq!(rows[4], "3,12,25,true");
    let qt = [
        "axioms",
        "quasitree",
        "--group",
        "free:2",
        "--axis",
        "a",
        "--radius",
        "8",
        "--set",
        "family_radius=4",
        "--C",
        "2",
        "--K",
        "2",
        "--format",
        "csv",
    ];
    assert_eq!(header(&qt), "u,v,weight,kind");
    let scan = [
        "contract", "scan", "--group", "free:2", "--axis", "a", "--radius", "3", "--format", "csv",
    ];
    assert_eq!(header(&scan), "e,d,c,pairs");
    let horo = [
        "horoball",
        "distance",
        "--param",
        "1",
        "--set",
        "to=10;100",
        "--format",
        "csv",
    ];
    assert_eq!(header(&horo), "pair,distance,truncated");
}

#[test]
fn ops_without_a_table_refuse_csv() {
    let out = growthlab(&[
        "snowflake",
        "geodesic",
        "--set",
        "r=3",
        "--set",
        "x=36",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no CSV form"));
}

#[test]
fn contraction_table_is_keyed_by_grid_cell() {
    let out = growthlab(&[
        "contract",
        "scan",
        "--group",
        "free:2",
        "--axis",
        "a",
        "--radius",
        "4",
        "--set",
        "e_grid=1,3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json(&out);
    let table = r["results"]["C_table"].as_object().unwrap();
    let keys: Vec<&str> = table.keys().map(String::as_str).collect();
    assert_eq!(keys, ["E=1,D=0", "E=1,D=1", "E=3,D=0", "E=3,D=1"]);
    // Geodesics in a tree project onto an axis through a single point.
    assert!(table.values().all(|c| c.as_f64() == Some(0.0)));
    assert_eq!(r["meta"]["scale"]["grid"]["E"], serde_json::json!([1.0, 3.0]));
}

#[test]
fn relator_files_resolve_next_to_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("rel.txt"), "# one relator\na^3 b a^2 -b a b -a -b^3\n").unwrap();
    let out = run_manifest(
        dir.path(),
        "op = quotient.pieces\ngroup = free:2\nrelators = rel.txt\n",
        &[],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["results"]["pieces"]["max_piece"], 2);
    assert_eq!(r["results"]["pieces"]["c6"], true);
    assert_eq!(r["results"]["exponent_sums"], serde_json::json!([[5, -2]]));
}

#[test]
fn flags_override_manifest_keys_and_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = run_manifest(
        dir.path(),
        "op = group.ball\ngroup = free:2\nradius = 9\n",
        &["--radius", "2", "--format", "csv", "--out", target.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(target).unwrap();
    assert_eq!(
        text,
        "radius,count,cumulative,trusted\n0,1,1,true\n1,4,5,true\n2,12,17,true\n"
    );
}

#[test]
fn unwritable_output_is_an_error() {
    let out = growthlab(&[
        "group",
        "ball",
        "--group",
        "free:2",
        "--radius",
        "2",
        "--out",
        "/nonexistent/dir/x.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn snowflake_distance_matches_the_geodesic_length() {
    // The bidirectional search and the closed-form geodesic must agree.
    let d = json(&growthlab(&[
        "snowflake",
        "distance",
        "--group",
        "bb:3",
        "--set",
        "to=a^6",
    ]));
    let g = json(&growthlab(&["snowflake", "geodesic", "--set", "r=3", "--set", "x=6"]));
    assert_eq!(d["results"]["status"], "exact");
    assert_eq!(
        d["results"]["distance"].as_f64().unwrap(),
        g["results"]["length"].as_f64().unwrap()
    );
}
