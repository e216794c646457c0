use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn tltl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tltl"))
        .args(args)
        .env_remove("TLTL_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_motivating_example() {
    let team = data("two_traces.json");
    let o = tltl(&["check", "--team", &team, "--formula", "F p | F p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "true\n");
    let o = tltl(&["check", "--team", &team, "--formula", "F p"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn check_stats_are_key_value_lines() {
    let o = tltl(&["check", "--team", &data("two_traces.json"), "--formula", "F p", "--stats"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("false"));
    for l in lines {
        let (k, v) = l.split_once('=').unwrap();
        assert!(!k.is_empty());
        v.parse::<u64>().unwrap();
    }
}

#[test]
fn check_json_lines() {
    let o = tltl(&["check", "--team", &data("two_traces.json"), "--formula", "F p | F p", "--format", "json-lines"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["result"], true);
}

#[test]
fn formula_may_come_from_a_file() {
    let o = tltl(&["check", "--team", &data("two_traces.json"), "--formula", &data("split.ltl")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn missing_file_is_an_input_error() {
    let o = tltl(&["check", "--team", "does-not-exist.json", "--formula", "F p"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn syntax_error_is_an_input_error() {
    let o = tltl(&["check", "--team", &data("two_traces.json"), "--formula", "F (p"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_error_exits_two() {
    let o = tltl(&["check"]);
    assert_eq!(code(&o), 2);
    let o = tltl(&["frobnicate"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_tltl"))
        .args(["check", "--team", &data("two_traces.json"), "--formula", "F p | F p"])
        .env("TLTL_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = tltl(&["check", "--team", &data("two_traces.json"), "--formula", "F p | F p", "--budget", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn classical_per_trace() {
    let o = tltl(&["classical", "--team", &data("two_traces.json"), "--formula", "X p"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().any(|l| l.ends_with("\ttrue")));
    let o = tltl(&["classical", "--team", &data("two_traces.json"), "--formula", "~p"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stutter_commands() {
    let (a, b, c) = (data("stutter_a.json"), data("stutter_b.json"), data("stutter_c.json"));
    let o = tltl(&["stutter", "equiv", "--team", &a, "--team", &b]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = tltl(&["stutter", "equiv", "--team", &a, "--team", &c]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "false\n"));
    let o = tltl(&["stutter", "equiv", "--team", &a]);
    assert_eq!(code(&o), 2);
    let o = tltl(&["stutter", "canon", "--team", &a]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["traces"][0]["prefix"], serde_json::json!([["p"], ["q"]]));
}

#[test]
fn kripke_commands() {
    let k = data("two_state.json");
    let o = tltl(&["kripke", "validate", &k]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "ok\n"));
    let o = tltl(&["kripke", "validate", &data("broken.json")]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = tltl(&["kripke", "member", "--kripke", &k, "--team", &data("members.json")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let verdicts: Vec<&str> = out.lines().map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(verdicts.iter().filter(|v| **v == "true").count(), 2);

    let o = tltl(&["kripke", "enumerate", "--kripke", &k, "--max-prefix", "1", "--max-loop", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "{p}({q})^w\n");

    let o = tltl(&["kripke", "chi", "--kripke", &k]);
    assert!(stdout(&o).trim_end().ends_with("(X @pw_0 | X @pw_1))"));
    let o = tltl(&["kripke", "countability", "--kripke", &k]);
    assert_eq!(stdout(&o), "Uncountable\n");
}

#[test]
fn arith_commands() {
    let o = tltl(&["arith", "prenex", "(and (exists (x 1) (lt x x)) (true))"]);
    assert_eq!(stdout(&o), "(exists (x 1) (and (lt x x) (true)))\n");
    let o = tltl(&["arith", "shape-check", "(exists (x 1) (eq x x))"]);
    assert_eq!(code(&o), 1);
    let o = tltl(&["arith", "normalize", "(exists (x 1) (eq x x))"]);
    assert_eq!(code(&o), 0);
    let n = stdout(&o);
    let o = tltl(&["arith", "shape-check", n.trim()]);
    assert_eq!(code(&o), 0);
    let o = tltl(&["arith", "emit-rho3", "--formula", "p"]);
    assert_eq!(stdout(&o), "(forall (S1 (2 2)) (implies (member a S1) (holds S1 (zero) (one))))\n");
    let o = tltl(&["arith", "emit-rho2", "--formula", "p", "--wrapper", "mc-ulp"]);
    assert_eq!(code(&o), 2);
    let o = tltl(&["arith", "emit-rho2", "--formula", "p", "--wrapper", "mc-ulp", "--kripke", &data("two_state.json")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn reduce_commands() {
    let o = tltl(&["reduce", "bounded-check", "--arith", &data("lt.sexp"), "--bound", "4"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = tltl(&["reduce", "bounded-check", "--arith", "(exists (x 1) (lt x x))", "--bound", "4"]);
    assert_eq!(code(&o), 1);

    let o = tltl(&["reduce", "arith2mc", "--arith", &data("lt.sexp")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let formula = out.lines().last().unwrap();
    assert!(formula.starts_with("E1[F @x1]"), "{formula}");
    let json_part = &out[..out.len() - formula.len() - 1];
    let v: serde_json::Value = serde_json::from_str(json_part).unwrap();
    assert_eq!(v["states"], 7);

    let k = data("two_state.json");
    for mode in ["withX", "xFree", "ulcXFree", "finiteUlc"] {
        let o = tltl(&["reduce", "mc2sat", "--kripke", &k, "--formula", "F p", "--mode", mode]);
        assert_eq!(code(&o), 0, "{mode}");
    }
    let o = tltl(&["reduce", "mc2sat", "--kripke", &k, "--formula", "X p", "--mode", "xFree"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn props_run_is_deterministic() {
    let a = tltl(&["props", "run", "--suite", "stutter", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert!(stdout(&a).starts_with("PASS stutter"));
    let b = tltl(&["props", "run", "--suite", "stutter", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let o = tltl(&["props", "run", "--suite", "nope"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn props_list_names_every_suite() {
    let o = tltl(&["props", "list"]);
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names.len(), 11);
    assert!(names.contains(&"chi".to_string()));
}

#[test]
fn probes_report_counterexamples() {
    let o = tltl(&["props", "probe", "--kind", "equiv", "--formula", "F p | F p", "--other", "F p", "--samples", "100"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("counterexample"));
    let o = tltl(&["props", "probe", "--kind", "equiv", "--formula", "G p", "--other", "~F ~p", "--samples", "200"]);
    assert_eq!(code(&o), 0);
    let o = tltl(&["props", "probe", "--kind", "downward", "--formula", "F p | G q", "--samples", "200"]);
    assert_eq!(code(&o), 0);
    let o = tltl(&["props", "probe", "--kind", "downward", "--formula", "~p", "--samples", "200"]);
    assert_eq!(code(&o), 1);
    let o = tltl(&["props", "probe", "--kind", "union", "--formula", "F p", "--samples", "300"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn parse_round_trips() {
    let o = tltl(&["parse", "F p | ~G q"]);
    assert_eq!(stdout(&o), "F p | ~G q\n");
    let again = tltl(&["parse", stdout(&o).trim()]);
    assert_eq!(again.stdout, o.stdout);
}
