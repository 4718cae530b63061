use std::path::{Path, PathBuf};

use newcomb_cli::{run, ScenarioFile, EXIT_INVALID, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

const S1: &str = r#"{
  "prediction": [{"omega": "1/10", "weight": "1/2"}, {"omega": "9/10", "weight": "1/2"}],
  "rewards": {"r": "1000", "R": "1000000"}
}"#;

const S2: &str = r#"{
  "prediction": [{"omega": "1/2", "weight": "1"}],
  "rewards": {"r": "1000", "R": "1000000"}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("newcomb").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(output: &'a str, key: &str) -> &'a str {
    output
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|rest| rest.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in {output}"))
}

#[test]
fn analyze_spread_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s1.json", S1);
    let (code, out, _) = invoke(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(field(&out, "threshold"), "16/25 (0.64)");
    assert!(field(&out, "posterior_full_given_onebox").starts_with("41/50 "));
    assert!(field(&out, "posterior_full_given_twobox").starts_with("9/50 "));
    assert!(field(&out, "e_onebox").starts_with("820000 "));
    assert!(field(&out, "e_twobox").starts_with("181000 "));
    assert_eq!(field(&out, "preference"), "onebox");
}

#[test]
fn analyze_point_mass_two_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s2.json", S2);
    let (code, out, _) = invoke(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(field(&out, "e_onebox").starts_with("500000 "));
    assert!(field(&out, "e_twobox").starts_with("501000 "));
    assert_eq!(field(&out, "preference"), "twobox");
}

#[test]
fn analyze_reports_omniscience_and_refinement() {
    let dir = tempfile::tempdir().unwrap();
    let text = S1.replace("\"rewards\"", "\"partition\": [[1, 2]], \"rewards\"");
    let path = write(dir.path(), "s1p.json", &text);
    let (code, out, _) = invoke(&["analyze", path.to_str().unwrap(), "--delta", "1/10"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(field(&out, "coarse_support"), "1/2@1");
    assert!(field(&out, "expected_conditional_var").starts_with("4/25 "));
    assert_eq!(field(&out, "delta_omniscient"), "true");

    let (code, _, err) = invoke(&["analyze", path.to_str().unwrap(), "--delta", "1/2"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.starts_with("error:"));
}

#[test]
fn emitted_scenario_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s1.json", S1);
    let emitted = dir.path().join("out.json");
    let (code, _, _) = invoke(&["analyze", path.to_str().unwrap(), "--emit-scenario", emitted.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let a = ScenarioFile::load(&path).unwrap();
    let b = ScenarioFile::load(&emitted).unwrap();
    assert_eq!(a, b);
    assert_eq!(b.to_json(), std::fs::read_to_string(&emitted).unwrap());
}

#[test]
fn sweep_rows_match_threshold_rule() {
    let (code, out, _) = invoke(&["sweep", "--p", "1/2", "--spread", "0,1/4", "--ratio", "1/100,1/4,1"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,spread,sigma2,threshold,r_over_R,preference,e_onebox,e_twobox");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "1/2,0/1,0/1,0/1,1/100,twobox,1/2,51/100");
    assert_eq!(lines[5], "1/2,1/4,1/16,1/4,1/4,indifferent,5/8,5/8");
}

#[test]
fn sweep_to_file_and_invalid_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let (code, out, _) =
        invoke(&["sweep", "--p", "1/3", "--spread", "1/6", "--ratio", "1/2", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);

    let (code, _, err) = invoke(&["sweep", "--p", "1/10", "--spread", "1/2", "--ratio", "1"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("leaves [0, 1]"), "{err}");
}

#[test]
fn impossibility_output() {
    let (code, out, _) = invoke(&["impossibility", "--beliefs", "1/2,3/10,1/5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(field(&out, "boxes"), "3");
    assert_eq!(field(&out, "target box"), "2");
    assert!(field(&out, "bad-decision probability").starts_with("7/10 "));
    assert_eq!(field(&out, "bound check"), "holds");

    let (_, out, _) = invoke(&["impossibility", "--beliefs", "1/4,1/4,1/4,1/4"]);
    assert_eq!(field(&out, "bound check"), "holds with equality");

    let (code, _, _) = invoke(&["impossibility", "--beliefs", "1/2,1/4"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn simulate_reports_comparison_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s1.json", S1);
    let args = ["simulate", path.to_str().unwrap(), "--samples", "20000", "--seed", "5"];
    let (code, out, _) = invoke(&args);
    assert_eq!(code, EXIT_OK);
    assert!(field(&out, "generator").starts_with("ChaCha8"));
    assert!(out.contains("\npost_full_given_onebox,41/50,0.82,"));
    assert!(out.contains("onebox_given_omega[2],9/10,"));
    assert_eq!(invoke(&args).1, out);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = invoke(&["verify", "--instances", "20"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS posterior-given-onebox"));
    let (code, out, _) = invoke(&["verify", "--instances", "20", "--inject-fault", "posterior-twobox"]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.contains("FAIL posterior-given-twobox"), "{out}");
}

#[test]
fn usage_and_load_errors() {
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "--inject-fault", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);

    let (code, _, err) = invoke(&["analyze", "/nonexistent/s.json"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("file not found"));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &S1.replace("\"1/2\"}]", "\"1/3\"}]"));
    let (code, _, err) = invoke(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(err.trim(), "error: invalid scenario: prediction: weights sum to 5/6, not 1");

    let syntax = write(dir.path(), "syntax.json", "{\n  \"prediction\": [,]\n}");
    let (code, _, err) = invoke(&["analyze", syntax.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 2"), "{err}");
}
