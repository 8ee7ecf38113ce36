use std::path::PathBuf;

use lefschetz::cli::{run_with, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lefschetz").chain(args.split_whitespace());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &str) -> Value {
    let (code, out, err) = run(&format!("--format json {args}"));
    assert_eq!(code, EXIT_OK, "{args}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn manifest(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(path)
}

#[test]
fn nu_three_five() {
    let (code, out, _) = run("--verify nu 3 5");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("nu(3,5) = 12"));
    assert_eq!(json("nu 3 5")["girth"], 12);
}

#[test]
fn cyclic_worked_example() {
    let v = json("--verify cyclic 10 0 2 4");
    assert_eq!(v["mu"], 14);
    assert_eq!(v["prediction"], false);
    assert_eq!(v["direct"], false);
    assert_eq!(v["kernel_dimension"], 2);
    assert_eq!(v["surjectivity_witness"]["support_size"], 52);
}

#[test]
fn toeplitz_minors() {
    let (code, out, _) = run("--verify toeplitz 1 3");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "all 6 maximal minors nonzero\n");
}

#[test]
fn wlp_pure_powers() {
    assert_eq!(json("wlp -n 3 x1^3 x2^3 x3^3")["verdict"], true);
    let path = std::env::temp_dir().join(format!("lefschetz-ideal-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"n": 3, "d": 3, "generators": ["x1^3", "x2^3", "x3^3", "x1*x2*x3"]}"#).unwrap();
    let v = json(&format!("wlp --ideal {}", path.display()));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["verdict"], false);
}

#[test]
fn edge_cases_are_reported() {
    let v = json("--verify nu 3 2");
    assert_eq!(v["girth"], "infinite");
    assert!(v["edge_case"].as_str().unwrap().starts_with("paper-edge-case"));
    let v = json("--verify dihedral 2");
    assert!(v["edge_case"].as_str().unwrap().starts_with("paper-edge-case"));
}

#[test]
fn reports_match_schemas() {
    let cases = [
        ("wlp", "wlp -n 3 x1^3 x2^3 x3^3 x1*x2*x3"),
        ("nu", "nu 4 2"),
        ("nu", "nu 3 2"),
        ("matroid", "matroid 3 4"),
        ("cyclic", "cyclic 10 0 2 4"),
        ("cyclic", "cyclic 3 0 0 1 1"),
        ("cyclic", "cyclic 5 0 0 1"),
        ("scan", "scan 15"),
        ("dihedral", "dihedral 3"),
        ("dihedral", "dihedral 4"),
        ("classify", "classify c1"),
        ("toeplitz", "toeplitz 2 5"),
    ];
    for (name, args) in cases {
        let schema: Value =
            serde_json::from_str(&std::fs::read_to_string(manifest(&format!("schemas/{name}.schema.json"))).unwrap())
                .unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let instance = json(args);
        let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args}: {errors:?}");
    }
}

#[test]
fn csv_matches_golden_files() {
    for (file, args) in [
        ("scan_15.csv", "scan 15"),
        ("matroid_3_5.csv", "matroid 3 5"),
        ("classify_c1.csv", "classify c1"),
        ("classify_c2.csv", "classify c2"),
    ] {
        let (code, out, err) = run(&format!("--verify --format csv {args}"));
        assert_eq!(code, EXIT_OK, "{args}: {err}");
        let golden = std::fs::read_to_string(manifest(&format!("tests/golden/{file}"))).unwrap();
        assert_eq!(out, golden, "{args}");
    }
    let (_, out, _) = run("--format csv scan 15");
    assert_eq!(out.lines().count(), 11);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let (_, one, _) = run("--format json --jobs 1 classify c1");
    let (_, four, _) = run("--format json --jobs 4 classify c1");
    let (_, again, _) = run("--format json --jobs 4 classify c1");
    assert_eq!(one, four);
    assert_eq!(four, again);
    assert!(!one.contains('\r'));
    let (_, a, _) = run("--format json --jobs 1 matroid 3 5");
    let (_, b, _) = run("--format json --jobs 3 matroid 3 5");
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("lefschetz-scan-{}.csv", std::process::id()));
    let (code, out, _) = run(&format!("--format csv --output {} scan 15", path.display()));
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, std::fs::read_to_string(manifest("tests/golden/scan_15.csv")).unwrap());
}

#[test]
fn usage_errors_exit_two() {
    for args in
        ["bogus", "nu 3", "--format csv cyclic 3 0 1 2", "dihedral 9", "classify c3", "--jobs 0 scan 4", "cyclic 1 0"]
    {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args}");
        assert!(!err.is_empty(), "{args}");
    }
    let (_, _, err) = run("dihedral 9");
    assert_eq!(err.lines().count(), 1);
}
