use eulersum::cli::{run_with_env, Outcome};
use serde_json::Value;

fn run(args: &[&str]) -> Outcome {
    run_with_env(std::iter::once("eulersum").chain(args.iter().copied()), None)
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", out.stdout))
}

#[test]
fn eval_j4() {
    let out = run(&["eval", "--family", "J", "--b", "4", "--bits", "128"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["schema"], "eulersum/1");
    assert_eq!(v["symbolic_text"], "-7/12*pi^2*zeta(3) + 31/4*zeta(5)");
    assert_eq!(v["symbolic"][0]["coeff"], "-7/12");
    assert_eq!(v["symbolic"][0]["atoms"][0][0], "pi");
    assert!(v["value"].as_str().unwrap().starts_with("1.1156248763205805153782"));
    assert_eq!(v["bits"], 128);
}

#[test]
fn eval_by_id_matches_flags() {
    let a = run(&["eval", "--id", "sigma(3,2)"]);
    let b = run(&["eval", "--family", "SIGMA", "--s", "3", "--t", "2"]);
    assert_eq!(a.code, 0);
    assert_eq!(a, b);
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--family", "Jbar", "--b", "3"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn eval_and_oracle_agree() {
    for (family, flag, n) in [("J", "--b", "3"), ("h", "--q", "5"), ("Z", "--a", "2")] {
        let e = json(&run(&["eval", "--family", family, flag, n]));
        let o = json(&run(&["oracle", "--family", family, flag, n, "--tol", "1e-15"]));
        let ev: f64 = e["value"].as_str().unwrap().parse().unwrap();
        let ov: f64 = o["value"].as_str().unwrap().parse().unwrap();
        assert!((ev - ov).abs() < 1e-14, "{family}: {ev} vs {ov}");
        assert!(o["terms"].as_u64().unwrap() >= 8);
    }
}

#[test]
fn bits_from_environment() {
    let argv = ["eulersum", "eval", "--family", "J", "--b", "2"];
    let v: Value = serde_json::from_str(&run_with_env(argv, Some("96")).stdout).unwrap();
    assert_eq!(v["bits"], 96);
    let v: Value = serde_json::from_str(&run_with_env(argv, None).stdout).unwrap();
    assert_eq!(v["bits"], 192);
    // an explicit flag wins
    let argv = ["eulersum", "eval", "--family", "J", "--b", "2", "--bits", "80"];
    let v: Value = serde_json::from_str(&run_with_env(argv, Some("96")).stdout).unwrap();
    assert_eq!(v["bits"], 80);
    assert_eq!(run_with_env(["eulersum", "eval", "--family", "J", "--b", "2"], Some("lots")).code, 1);
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["eval", "--family", "K", "--b", "2"][..],
        &["eval", "--family", "J"],
        &["eval", "--family", "J", "--b", "1"],
        &["eval", "--family", "J", "--b", "5"],
        &["eval", "--family", "J", "--b", "2", "--bits", "32"],
        &["oracle", "--family", "J", "--b", "2", "--tol", "0"],
        &["verify", "--weight", "7..3"],
        &["table", "--family", "sigma", "--range", "2..4"],
        &["bogus"],
        &[],
    ] {
        let out = run(args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("solve"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&["oracle", "--family", "J", "--b", "2", "--tol", "1e-40", "--max-terms", "4"]);
    assert_eq!(out.code, 3);
    assert_eq!(json(&out)["error"], "budget_exhausted");
}

#[test]
fn solve_weight_seven() {
    let out = run(&["solve", "--weight", "7", "--bits", "192"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["schema"], "eulersum/1");
    assert_eq!(v["rank"], 2);
    assert_eq!(v["resubstitution_zero"], true);
    assert!(v["solved"]["sigma(4,3)"].is_array());
    assert!(v["solved"]["sigma(3,4)"].is_array());
    for r in v["residual_checks"].as_array().unwrap() {
        let x: f64 = r["residual"].as_str().unwrap().parse().unwrap();
        assert!(x < 1e-9, "{r}");
    }
    let pretty = run(&["solve", "--weight", "7", "--pretty"]).stdout;
    assert!(pretty.contains("sigma(4,3) = "));
}

#[test]
fn verify_weight_range_passes() {
    let out = run(&["verify", "--weight", "3..6", "--tol", "1e-8", "--bits", "192"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["failed"], 0);
    let kinds: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap()).collect();
    for k in ["closed_form", "sum_theorem", "relation"] {
        assert!(kinds.contains(&k), "{k}");
    }
}

#[test]
fn verify_failure_exits_2() {
    // 64 working bits cannot certify 1e-30, so the residuals land above tolerance
    let out = run(&["verify", "--family", "J", "--weight", "3..4", "--tol", "1e-30", "--bits", "64"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["failed"], 2);
}

#[test]
fn verify_budget_exhaustion_exits_3() {
    let out = run(&["verify", "--family", "J", "--weight", "3", "--tol", "1e-12", "--max-terms", "4"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert_eq!(json(&out)["error"], "budget_exhausted");
}

#[test]
fn table_tsv_columns() {
    let out = run(&["table", "--family", "J", "--range", "2..5", "--format", "tsv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "params\tsymbolic\tnumeric\tbound");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("b=2\t7/4*zeta(3)\t2.1035995805"));
    // J(5) has no closed form: the symbolic column is a dash, the value comes from the oracle
    assert!(lines[4].starts_with("b=5\t-\t1.0"));
}

#[test]
fn table_json_sweeps_the_free_parameter() {
    let v = json(&run(&["table", "--family", "sigma", "--s", "2", "--range", "1..3"]));
    let ids: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["sigma(2,1)", "sigma(2,2)", "sigma(2,3)"]);
}
