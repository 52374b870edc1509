use std::path::Path;
use std::process::{Command, Output};

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monomialis"))
        .args(args)
        .env("MONOMIALIS_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), args);
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn ass_counts_match_the_tables() {
    let (code, out) = run(&["ass", "-m", "1", "-r", "2", "-s", "1", "-n", "3", "--containing-c"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Ass(BHH(1,2,1)^3) [containing-c]: 1\n"), "{out}");
    assert!(out.ends_with("formula: 1 MATCH\n"));

    let (code, out) = run(&["ass", "-m", "2", "-r", "2", "-n", "4", "--containing-c"]);
    assert_eq!(code, 0);
    assert!(out.contains("]: 4\n") && out.contains("MATCH"), "{out}");

    let (code, out) = run(&["ass", "-m", "1", "-r", "2", "-n", "1", "--total", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(v["verdict"], "MATCH");
    assert_eq!(v["params"], serde_json::json!({"m": 1, "r": 2, "s": 1}));
}

#[test]
fn formula_tables() {
    let (code, out) = run(&["table", "-r", "2", "--m-max", "6", "--n-max", "14", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,r,s,n,count,source");
    assert_eq!(lines.len(), 1 + 84);
    assert!(lines.contains(&"6,2,1,12,12,formula"));
    assert!(lines.contains(&"5,2,1,7,211,formula"));

    let (_, out) = run(&["table", "-r", "4", "--m-max", "5", "--n-max", "12", "--format", "md"]);
    assert!(out.contains("| 5 | 16807 | 16806 |"));
    assert!(out.trim_end().ends_with("| 16764 |"));
    assert!(out.contains("| 2392 | 2401 | 2384 | 2384 | 2344 |"));
}

#[test]
fn both_sources_agree() {
    let (code, out) = run(&["table", "-r", "2", "--m-max", "2", "--n-max", "6", "--source", "both"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("mismatches: none\n"));
}

#[test]
fn depth_profiles() {
    let (_, out) = run(&["depth", "-m", "1", "-r", "2", "-s", "1", "--n-max", "6", "--strategy", "formula"]);
    assert!(out.contains("depth: 0 1 0 1 1 1\n"), "{out}");
    assert!(out.contains("local minima: 1 3\n"));
    let (_, out) = run(&["depth", "-m", "1", "-r", "2", "--n-max", "6", "--strategy", "zero-detect"]);
    assert!(out.contains("depth: Z N Z N N N\n"), "{out}");
    let (_, out) = run(&["depth", "-m", "1", "-r", "2", "-s", "2", "--e", "2", "--n-max", "5"]);
    assert!(out.contains("depth: 1 2 1 3 3\n"), "{out}");
    let (_, out) = run(&["depth", "-m", "1", "-r", "2", "--n-max", "2", "--strategy", "betti"]);
    assert!(out.contains("depth: 0 1\n"), "{out}");
    let (_, out) = run(&["depth", "-m", "2", "-r", "3", "--n-max", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["zeros"], serde_json::json!([1, 4, 7]));
    assert_eq!(v["periodic_on_window"], true);
}

#[test]
fn identity_witness_and_maxima() {
    let (code, out) = run(&["identity", "--m-max", "8"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("all pass\n"));

    let (code, out) = run(&["witness", "--kind", "first-power", "-m", "1", "-r", "2", "--rows", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("witness: c1*a1^3*a2^4*x[1,1]*x[1,2]^2\n"));
    assert!(out.ends_with("PASS\n"));

    let (code, out) = run(&["witness", "--kind", "cfullhalf", "-m", "2", "-r", "2", "--rows", "1,2;2", "-n", "4"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = run(&["witness", "--kind", "other-c", "-m", "1", "-r", "3", "--rows", "1,2", "-n", "3"]);
    assert_eq!(code, 0);

    let (code, out) = run(&["maxima", "-m", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("local maxima: n=3 (487), n=5 (487)\n"), "{out}");
}

#[test]
fn exit_codes() {
    // precondition failures
    let (code, _) = run(&["witness", "--kind", "ggood-noc", "-m", "1", "-r", "2", "--rows", "1", "-n", "1"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["witness", "--kind", "cfullhalf", "-m", "1", "-r", "2", "--rows", "1,2", "-n", "2"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["ass", "-m", "0", "-r", "2", "-n", "1"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["nonsense"]);
    assert_eq!(code, 4);
    // exhausted budget: single instance fails, table cells degrade to `?`
    let (code, out) = run(&["--no-cache", "--budget-seconds", "0", "ass", "-m", "2", "-r", "2", "-n", "3"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    let (code, out) = run(&[
        "--no-cache", "--budget-seconds", "0", "table", "-r", "2", "--m-max", "1", "--n-max", "2", "--source", "oracle",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("?"), "{out}");
}

#[test]
fn cache_round_trip_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["table", "-r", "2", "--m-max", "2", "--n-max", "4", "--source", "oracle"];
    let cold = run_in(dir.path(), &args);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 8);
    let warm = run_in(dir.path(), &args);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(cold.status.success() && warm.status.success());

    let mut verify_args = vec!["--verify-cache"];
    verify_args.extend(args);
    assert!(run_in(dir.path(), &verify_args).status.success());

    // tamper with one entry: dropping a prime changes the stored value
    let path = entries[0].as_ref().unwrap().path();
    let mut entry: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    entry["value"]["associated_primes"].as_array_mut().unwrap().pop();
    std::fs::write(&path, entry.to_string()).unwrap();
    let out = run_in(dir.path(), &verify_args);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = |t: &'static str| {
        ["--no-cache", "--threads", t, "table", "-r", "3", "--m-max", "1", "--n-max", "3", "--source", "both"]
    };
    let (c1, one) = run(&args("1"));
    let (c4, four) = run(&args("4"));
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(one, four);
}
