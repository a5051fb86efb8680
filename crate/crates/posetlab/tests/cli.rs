//! The `posetlab` binary end to end: pipelines, exit codes and JSON output.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use posetlab::format::{parse_poly, parse_poset, MapDoc, PolyDoc};
use posetlab_core::ncpoly::AnyPoly;

fn posetlab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_posetlab"))
        .args(args)
        .env_remove("POSETLAB_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let o = posetlab(args, stdin);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn hexagon_pipeline() {
    let hexagon = ok(&["build", "polygon", "6"], None);
    assert_eq!(ok(&["cd-index", "-"], Some(&hexagon)).trim(), "c^2 + 4*d");
}

#[test]
fn two_gon_main_inequality_fails_at_d() {
    let two = ok(&["build", "polygon", "2"], None);
    let o = posetlab(&["--json", "verify", "main-inequality", "-", "--element", "v1"], Some(&two));
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["primal"]["witness"]["word"], "d");
    assert_eq!(v["is_lattice"], false);
}

#[test]
fn triangle_sheaf_table() {
    let o = posetlab(&["--json", "sheaf-cd", "polygon3", "--verify", "--seed", "7"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<(String, u64)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["word"].as_str().unwrap().to_string(), r["sheaf"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![("cc".to_string(), 1), ("d".to_string(), 1)]);
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_posetlab"))
            .args(["sheaf-cd", "boolean4", "--word", "dc"])
            .env("POSETLAB_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert!(run("5").contains("seed 5"));
}

#[test]
fn every_build_output_feeds_every_consumer() {
    let builds: Vec<String> = vec![
        ok(&["build", "boolean", "3"], None),
        ok(&["build", "polygon", "4"], None),
        ok(&["build", "pyr", "polygon3"], None),
        ok(&["build", "star", "polygon3", "boolean2"], None),
        ok(&["build", "product", "polygon3", "boolean2"], None),
        ok(&["build", "semisusp", "polygon5", "--element", "v1"], None),
        ok(&["build", "subdivision-target", "polygon4", "--element", "v1"], None),
    ];
    for doc in &builds {
        parse_poset(doc).expect("build output parses as a poset");
        ok(&["ab-index", "-"], Some(doc));
        ok(&["cd-index", "-"], Some(doc));
        for check in [&["check", "gorenstein-star", "-"][..], &["check", "cm", "-"], &["verify", "stanley", "-"]] {
            // 1 is a mathematical answer; only 2 would mean the input was rejected
            let o = posetlab(check, Some(doc));
            assert!(matches!(o.status.code(), Some(0 | 1)), "{check:?}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
    let oc = ok(&["build", "order-complex", "polygon3"], None);
    parse_poset(&oc).unwrap();
    ok(&["ab-index", "-"], Some(&oc));
}

#[test]
fn subdivision_map_decomposes() {
    let map = ok(&["build", "subdivision-target", "polygon5", "--element", "v1"], None);
    let doc: MapDoc = serde_json::from_str(&map).unwrap();
    assert!(doc.source.is_some() && doc.target.is_some());
    let dir = std::env::temp_dir().join(format!("posetlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    std::fs::write(&path, &map).unwrap();
    let out = ok(&["verify", "decomposition", "--map", path.to_str().unwrap()], None);
    assert!(out.contains("sum: c^2 + 3*d"), "{out}");
    let collapse = ok(&["build", "collapse", "cube", "--element", "1"], None);
    std::fs::write(&path, &collapse).unwrap();
    ok(&["verify", "decomposition", "--map", path.to_str().unwrap()], None);
}

#[test]
fn non_subdivision_is_a_precondition_failure() {
    let map = r#"{"assignment": [[0,0],[1,1],[2,1],[3,1],[4,1],[5,1],[6,1]]}"#;
    let dir = std::env::temp_dir().join(format!("posetlab-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    std::fs::write(&path, map).unwrap();
    let o = posetlab(
        &["verify", "decomposition", "--map", path.to_str().unwrap(), "--source", "polygon3", "--target", "polygon3"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn homology_checks_report_witnesses() {
    let path = r#"{"n": 2, "elements": [{"id":0,"rank":0},{"id":1,"rank":1},{"id":2,"rank":1},{"id":3,"rank":1},{"id":4,"rank":2},{"id":5,"rank":2}], "covers": [[0,1],[0,2],[0,3],[1,4],[2,4],[2,5],[3,5]]}"#;
    let o = posetlab(&["--json", "check", "gorenstein-star", "-"], Some(path));
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], false);
    assert!(v["witness"]["chain"].is_array());
    assert!(v["witness"]["betti"].is_array());

    let o = posetlab(&["--json", "check", "near-gorenstein-star", "-", "--boundary", "auto"], Some(path));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["boundary"], serde_json::json!([0, 1, 3]));

    let o = posetlab(&["check", "near-gorenstein-star", "-", "--boundary", "1"], Some(path));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(posetlab(&["check", "cm", "-"], Some(path)).status.code(), Some(0));
}

#[test]
fn near_cd_index_of_a_ball() {
    let path = r#"{"n": 2, "elements": [{"id":0,"rank":0},{"id":1,"rank":1},{"id":2,"rank":1},{"id":3,"rank":1},{"id":4,"rank":2},{"id":5,"rank":2}], "covers": [[0,1],[0,2],[0,3],[1,4],[2,4],[2,5],[3,5]]}"#;
    let out = ok(&["--json", "near-cd-index", "-", "--boundary", "auto"], Some(path));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let phi = parse_poly(&v["phi"].to_string()).unwrap();
    let bd = parse_poly(&v["boundary"].to_string()).unwrap();
    // the boundary is two points, a 0-sphere
    assert_eq!(bd, AnyPoly::Cd("c".parse().unwrap()));
    // ab-index a^2 + 2ab + 2ba + b^2 minus (a + b)a
    assert_eq!(phi, AnyPoly::Cd("d".parse().unwrap()));
}

#[test]
fn json_polynomials_round_trip() {
    let out = ok(&["--json", "cd-index", "pyr(cube)"], None);
    let doc: PolyDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.alphabet, "cd");
    let text = ok(&["cd-index", "pyr(cube)"], None);
    assert_eq!(parse_poly(&out).unwrap(), parse_poly(&text).unwrap());
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap(), out.trim_end());
}

#[test]
fn lambda_commands() {
    assert_eq!(ok(&["lambda-nu-prime", "polygon5", "--element", "v1"], None).trim(), "c^2 + d");
    let o = posetlab(&["verify", "semisusp", "cube", "--element", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    ok(&["lambda-nu", "polygon5", "--element", "v1"], None);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(posetlab(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(posetlab(&["cd-index", "no-such-poset"], None).status.code(), Some(2));
    assert_eq!(posetlab(&["build", "polygon", "1"], None).status.code(), Some(2));
    assert_eq!(posetlab(&["cd-index", "-"], Some("{not json")).status.code(), Some(2));
    assert_eq!(posetlab(&["verify", "main-inequality", "polygon4", "--element", "zz"], None).status.code(), Some(2));
    // the element must lie above the minimal element
    let triangle = ok(&["build", "polygon", "3"], None);
    let o = posetlab(&["lambda-nu-prime", "-", "--element", "0"], Some(&triangle));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_lists_names() {
    let out = ok(&["corpus", "list", "--max-rank", "2"], None);
    assert!(out.lines().any(|l| l.starts_with("polygon2\t")));
    assert!(!out.contains("cube"));
}
