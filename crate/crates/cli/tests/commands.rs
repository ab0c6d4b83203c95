use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use thomae_cli::ResultRecord;

const ZETA_2: f64 = 1.644_934_066_848_226_4;

fn thomae(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thomae"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = thomae(&all);
    let v = serde_json::from_str(stdout(&o).trim()).expect("one JSON record");
    (code(&o), v)
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn eval_zeta_two() {
    let (rc, v) = json(&["eval", "--3f2", "1,1,1,2,2"]);
    assert_eq!(rc, 0);
    assert!((num(&v, "value") - ZETA_2).abs() < 1e-10);
    assert_eq!(v["representation"], "identity");
    assert!(v["diagnostics"]["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn eval_text_prints_fifteen_digits() {
    let o = thomae(&["eval", "--3f2", "1,1,1,2,2"]);
    let text = stdout(&o);
    assert!(text.contains("1.6449340668482"), "{text}");
    assert!(text.contains("identity"));
}

#[test]
fn eval_zero_upper_parameter_is_one() {
    let (rc, v) = json(&["eval", "--3f2", "0,5,5,1,1"]);
    assert_eq!(rc, 0);
    assert_eq!(num(&v, "value"), 1.0);
}

#[test]
fn auto_transform_keeps_value_and_saves_terms() {
    let (_, plain) = json(&["eval", "--3f2", "1,1,1,2,1.5"]);
    let (rc, auto) = json(&["eval", "--3f2", "1,1,1,2,1.5", "--auto-transform"]);
    assert_eq!(rc, 0);
    assert_eq!(plain["representation"], "identity");
    let (p, a) = (num(&plain, "value"), num(&auto, "value"));
    assert!(((p - a) / p).abs() < 1e-12, "{p} vs {a}");
    let terms = |v: &Value| v["diagnostics"]["terms_used"].as_u64().unwrap();
    assert!(terms(&auto) <= terms(&plain));
}

#[test]
fn auto_transform_tie_keeps_identity() {
    let (_, v) = json(&["eval", "--3f2", "1,1,1,2,2", "--auto-transform"]);
    assert_eq!(v["representation"], "identity");
}

#[test]
fn eval_two_f_one() {
    let (rc, v) = json(&["eval", "--2f1", "1,1,2", "--x", "0.5"]);
    assert_eq!(rc, 0);
    let bound = num(&v["diagnostics"], "tail_bound");
    assert!((num(&v, "value") - 2.0 * std::f64::consts::LN_2).abs() <= bound);
}

#[test]
fn eval_exit_codes() {
    // s = -1: divergent, an input problem
    let o = thomae(&["eval", "--3f2", "1,1,1,1,1"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error kind=divergence"), "{err}");
    // budget too small: an accuracy failure
    assert_eq!(code(&thomae(&["eval", "--3f2", "1,1,1,2,2", "--max-terms", "10"])), 1);
    // malformed flag value
    assert_eq!(code(&thomae(&["eval", "--3f2", "1,x,1,2,2"])), 2);
    assert_eq!(code(&thomae(&["eval", "--3f2", "1,1,1,2"])), 2);
}

#[test]
fn transform_thomae_reports_map() {
    let (rc, v) = json(&["transform", "thomae", "--params", "0.5,0.6,0.7,2.0,2.5"]);
    assert_eq!(rc, 0);
    let t = &v["transform"];
    assert_eq!(t["kind"], "thomae");
    let params: Vec<f64> = serde_json::from_value(t["params"].clone()).unwrap();
    for (got, want) in params.iter().zip([1.5, 2.0, 2.7, 3.4, 3.3]) {
        assert!((got - want).abs() < 1e-14);
    }
    assert!((num(t, "excess") - 0.5).abs() < 1e-14);
    let (_, direct) = json(&["eval", "--3f2", "0.5,0.6,0.7,2.0,2.5"]);
    assert!(((num(&v, "value") - num(&direct, "value")) / num(&direct, "value")).abs() < 1e-9);
}

#[test]
fn transform_euler_and_invalid() {
    let (rc, v) = json(&["transform", "euler2", "--params", "0.5,0.25,2"]);
    assert_eq!(rc, 0);
    assert_eq!(num(&v["transform"], "power_exponent"), 1.25);
    assert_eq!(code(&thomae(&["transform", "kummer", "--params", "1,1,3,2,2"])), 2);
}

#[test]
fn verify_thomae_reference_point() {
    let (rc, v) = json(&["verify", "thomae", "--params", "0.5,0.6,0.7,2.0,2.5"]);
    assert_eq!(rc, 0);
    let c = &v["checks"][0];
    assert_eq!(c["pass"], true);
    assert!(num(c, "rel_discrepancy") < 1e-9);
}

#[test]
fn verify_saalschutz_exact() {
    let (rc, v) = json(&["verify", "saalschutz", "--n", "1", "--a", "1", "--b", "1", "--c", "3"]);
    assert_eq!(rc, 0);
    let c = &v["checks"][0];
    assert_eq!(c["lhs_exact"], "4/3");
    assert_eq!(c["rhs_exact"], "4/3");
    let o = thomae(&["verify", "saalschutz", "--n", "2", "--a", "1/2", "--b", "1/2", "--c", "2"]);
    assert!(stdout(&o).contains("75/64"));
}

#[test]
fn verify_gauss_terminating() {
    let (rc, v) = json(&["verify", "gauss", "--params", "1,0,3"]);
    assert_eq!(rc, 0);
    assert_eq!(num(&v["checks"][0], "lhs"), 1.0);
    assert_eq!(num(&v["checks"][0], "rhs"), 1.0);
}

#[test]
fn verify_euler_grid_by_default() {
    let (rc, v) = json(&["verify", "euler2", "--params", "0.5,1.5,3"]);
    assert_eq!(rc, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_random_samples() {
    for identity in ["thomae", "kummer", "gauss", "euler2", "saalschutz"] {
        let (rc, v) = json(&["verify", identity, "--random", "3", "--seed", "11"]);
        assert_eq!(rc, 0, "{identity}: {v}");
        assert!(v["checks"].as_array().unwrap().len() >= 3);
    }
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&thomae(&["verify", "pythagoras", "--params", "1,2,3"])), 2);
    assert_eq!(code(&thomae(&["verify", "thomae"])), 2);
    assert_eq!(code(&thomae(&["verify", "thomae", "--params", "-1,0.6,0.7,2,2.5"])), 2);
    // series cannot converge in five terms
    let o = thomae(&["verify", "thomae", "--params", "0.5,0.6,0.7,2.0,2.5", "--max-terms", "5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn prove_reference_point() {
    let o = thomae(&["prove", "--params", "0.5,0.6,0.7,2.0,2.5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows = text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count();
    assert_eq!(rows, 8, "{text}");
    assert!(text.contains("max discrepancy"));
}

#[test]
fn prove_precondition_failure() {
    let o = thomae(&["prove", "--params", "2,0.3,0.4,1.5,2.2"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("stage=second-integral"), "{err}");
    assert!(err.contains("d - a > 0"), "{err}");
}

#[test]
fn prove_json_has_eight_stages() {
    let (rc, v) = json(&["prove", "--params", "1,1,1,2,2"]);
    assert_eq!(rc, 0);
    let stages = v["stage_values"].as_array().unwrap();
    assert_eq!(stages.len(), 8);
    for s in stages {
        assert!((num(s, "value") - ZETA_2).abs() < 1e-9);
    }
}

#[test]
fn prove_too_tight_tolerance_fails() {
    let (rc, v) = json(&["prove", "--params", "0.5,0.6,0.7,2.0,2.5", "--chain-tol", "1e-16"]);
    assert_eq!(rc, 1);
    assert_eq!(v["status"], "fail");
}

#[test]
fn closed_forms() {
    let (rc, v) = json(&["closed-form", "gauss", "--params", "0.5,0.5,2"]);
    assert_eq!(rc, 0);
    assert!((num(&v, "value") - 4.0 / std::f64::consts::PI).abs() < 1e-14);
    let (rc, v) = json(&["closed-form", "saalschutz", "--n", "2", "--a", "1/2", "--b", "1/2", "--c", "2"]);
    assert_eq!(rc, 0);
    assert_eq!(v["exact_value"], "75/64");
    // gamma pole on the right-hand side
    assert_eq!(code(&thomae(&["closed-form", "gauss", "--params", "5,-3,3"])), 2);
    assert_eq!(code(&thomae(&["closed-form", "saalschutz", "--n", "2"])), 2);
}

fn strip_time(s: &str) -> String {
    s.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            if let Some(o) = v.as_object_mut() {
                o.remove("wall_time_ms");
            }
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identical_invocations_are_identical() {
    let args = ["verify", "thomae", "--random", "4", "--seed", "7", "--format", "json"];
    let a = stdout(&thomae(&args));
    let b = stdout(&thomae(&args));
    assert_eq!(strip_time(&a), strip_time(&b));
    let c = stdout(&thomae(&["verify", "thomae", "--random", "4", "--seed", "8", "--format", "json"]));
    assert_ne!(strip_time(&a), strip_time(&c));
}

#[test]
fn records_round_trip() {
    for args in [
        &["eval", "--3f2", "1,1,1,2,1.5", "--auto-transform"][..],
        &["verify", "saalschutz", "--random", "2", "--seed", "3"],
        &["verify", "euler2", "--params", "0.3,0.7,1.9"],
        &["prove", "--params", "0.5,0.6,0.7,2.0,2.5"],
        &["prove", "--params", "2,0.3,0.4,1.5,2.2"],
    ] {
        let mut all = args.to_vec();
        all.extend(["--format", "json"]);
        let line = stdout(&thomae(&all));
        let r: ResultRecord = serde_json::from_str(line.trim()).unwrap();
        let again = serde_json::to_string(&r).unwrap();
        assert_eq!(again, line.trim());
        assert_eq!(serde_json::from_str::<ResultRecord>(&again).unwrap(), r);
    }
}

#[test]
fn outputs_match_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../schemas/result.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut lines = Vec::new();
    for args in [
        &["eval", "--3f2", "1,1,1,2,2"][..],
        &["eval", "--3f2", "1,1,1,2,1.5", "--auto-transform"],
        &["eval", "--3f2", "1,1,1,1,1"],
        &["transform", "euler2", "--params", "0.5,0.25,2"],
        &["verify", "saalschutz", "--n", "1", "--a", "1", "--b", "1", "--c", "3"],
        &["verify", "kummer", "--random", "2"],
        &["prove", "--params", "1,1,1,2,2"],
        &["prove", "--params", "2,0.3,0.4,1.5,2.2"],
        &["closed-form", "gauss", "--params", "1,2,4"],
    ] {
        let mut all = args.to_vec();
        all.extend(["--format", "json"]);
        lines.push(stdout(&thomae(&all)));
    }
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "{{\"command\":\"eval\",\"params\":[1,1,1,2,2]}}").unwrap();
    writeln!(file, "not json").unwrap();
    let batch = stdout(&thomae(&["batch", file.path().to_str().unwrap()]));
    lines.extend(batch.lines().take(2).map(String::from));
    for line in lines {
        let v: Value = serde_json::from_str(line.trim()).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?} in {line}");
    }
}
