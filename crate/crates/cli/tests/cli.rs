use std::path::PathBuf;
use std::process::Command;

use quadsg_cli::instance::{emit, parse_str};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn quadsg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_quadsg")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", r.stdout, r.stderr))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn gen_to(name: &str, args: &[&str]) -> String {
    let path = tmp(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &p]);
    let r = quadsg(&all);
    assert_eq!(r.code, 0, "{}", r.stderr);
    p
}

#[test]
fn intro_fixture_verdicts() {
    let r = quadsg(&["member", "--q", "Q3*Q4", "--gens", "Q1,Q2", "fixture:intro", "--expect", "member"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["result"]["k"], 1);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["budget"]["kmax"], 4);
    assert_eq!(v["budget"]["planes"], 50);
    for q in ["Q3", "Q4"] {
        let r = quadsg(&["member", "--q", q, "--gens", "Q1,Q2", "fixture:intro", "--expect", "non-member"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(json(&r)["verdict"], "NonMember");
    }
}

#[test]
fn expect_mismatch_exits_one() {
    let r = quadsg(&["member", "--q", "Q3", "--gens", "Q1,Q2", "fixture:intro", "--expect", "member"]);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r)["verdict"], "NonMember");
    assert!(r.stderr.contains("expected"));
}

#[test]
fn preconditions_exit_two() {
    assert_eq!(quadsg(&["member", "--q", "Q3", "--gens", "Q1,Q1", "fixture:intro"]).code, 2);
    assert_eq!(quadsg(&["member", "--q", "Q9", "--gens", "Q1,Q2", "fixture:intro"]).code, 2);
    assert_eq!(quadsg(&["classify", "--q", "Q3", "--gens", "Q1", "fixture:intro"]).code, 2);
    assert_eq!(quadsg(&["check-sg", "fixture:nope"]).code, 2);
    assert_eq!(quadsg(&["frobnicate"]).code, 2);
    // Q3 = xw has rank 2: neither irreducible nor a square
    assert_eq!(quadsg(&["check-qsg", "fixture:intro"]).code, 2);
}

#[test]
fn floats_are_rejected_with_location() {
    let path = tmp("float.json");
    std::fs::write(
        &path,
        r#"{"format": 1, "nvars": 2, "polynomials": [{"name": "p", "terms": [{"coeff": "0.5", "exp": [1, 1]}]}]}"#,
    )
    .unwrap();
    let r = quadsg(&["check-qsg", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("polynomials[0].terms[0].coeff"), "{}", r.stderr);
    assert!(r.stderr.contains("inexact"), "{}", r.stderr);
}

#[test]
fn classify_generated_case3() {
    for seed in ["1", "2", "3"] {
        let file = gen_to(&format!("case3-{seed}.json"), &["case", "--case", "3", "--seed", seed]);
        let r = quadsg(&["classify", "--q", "Q", "--gens", "Q1,Q2", &file, "--expect", "Codim2"]);
        assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
        assert_eq!(json(&r)["seed"].as_u64(), Some(seed.parse().unwrap()));
    }
    let r = quadsg(&["classify", "--q", "Q", "--gens", "Q1,Q2", "fixture:case3"]);
    assert_eq!(json(&r)["verdict"], "Codim2");
}

#[test]
fn certify_planted_configuration() {
    let file =
        gen_to("planted.json", &["planted-ek", "--sizes", "200,20,20", "--planes", "4", "--n", "10", "--seed", "5"]);
    let r = quadsg(&["certify-ek", "--delta", "1/4", &file]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["result"]["verification"], "ok");
    assert_eq!(v["result"]["span_dim"], 4);
    assert_eq!(v["result"]["within_bound"], true);
    assert_eq!(v["result"]["fallback_extensions"], 0);
    // δ above the configuration's fraction is a precondition violation
    assert_eq!(quadsg(&["certify-ek", "--delta", "1/2", &file]).code, 2);
}

#[test]
fn point_set_checks() {
    let file = gen_to("lines.json", &["three-lines", "--per-line", "20"]);
    let r = quadsg(&["check-sg", &file, "--expect", "19/60"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["result"]["dim"], 3);
    assert_eq!(v["result"]["dim_bound_12_over_delta"], true);

    let r = quadsg(&["check-ek", "fixture:ek-singletons", "--expect", "holds"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["result"]["dim"], 2);
}

#[test]
fn quadratic_hypothesis_checks() {
    let file = gen_to("fermat.json", &["fermat-squares"]);
    let r = quadsg(&["check-qsg", &file, "--expect", "holds"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(json(&r)["result"]["span_dim"].as_u64().unwrap() <= 6);

    let file = gen_to("colored.json", &["colored", "--seed", "4"]);
    let r = quadsg(&["check-qek", &file, "--expect", "holds"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["result"]["span_dim"], 3);

    let r = quadsg(&["check-qsg", "--forms", "Q1,Q2", "fixture:intro", "--expect", "fails"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn resultant_of_linear_polynomials() {
    let path = tmp("lin.json");
    std::fs::write(
        &path,
        r#"{"format": 1, "nvars": 2, "polynomials": [
            {"name": "f", "terms": [{"coeff": "1", "exp": [1, 0]}, {"coeff": "-1", "exp": [0, 1]}]},
            {"name": "g", "terms": [{"coeff": "1", "exp": [1, 0]}, {"coeff": "-2", "exp": [0, 1]}]}]}"#,
    )
    .unwrap();
    let r = quadsg(&["resultant", "--f", "f", "--g", "g", "--var", "x", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["result"]["resultant"], "y");
    let r = quadsg(&["resultant", "--f", "f", "--g", "f*g", "--var", "0", path.to_str().unwrap(), "--expect", "zero"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn reports_are_byte_identical() {
    let file = gen_to("det.json", &["case", "--case", "2", "--nvars", "5", "--seed", "9"]);
    let cmds: Vec<Vec<&str>> = vec![
        vec!["member", "--q", "Q3", "--gens", "Q1,Q2", "fixture:intro", "--seed", "17"],
        vec!["classify", "--q", "Q", "--gens", "Q1,Q2", &file],
        vec!["gen", "planted-ek", "--sizes", "50,10,10", "--n", "8", "--seed", "3"],
    ];
    for c in &cmds {
        let (a, b) = (quadsg(c), quadsg(c));
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
    }
    let out = tmp("det-out.json");
    let mut c = cmds[0].clone();
    c.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let r = quadsg(&c);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), quadsg(&cmds[0]).stdout);
}

#[test]
fn timing_is_opt_in() {
    let r = quadsg(&["member", "--q", "Q3", "--gens", "Q1,Q2", "fixture:intro"]);
    assert!(json(&r).get("timing_ms").is_none());
    let r = quadsg(&["member", "--q", "Q3", "--gens", "Q1,Q2", "fixture:intro", "--timing"]);
    assert!(json(&r)["timing_ms"].is_u64());
}

#[test]
fn generated_instances_round_trip() {
    for args in [
        vec!["case", "--case", "1"],
        vec!["colored"],
        vec!["pencil", "--nvars", "5"],
        vec!["planted-ek", "--sizes", "8,4,4", "--planes", "2", "--n", "5"],
    ] {
        let mut all = vec!["gen"];
        all.extend(args);
        let r = quadsg(&all);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let inst = parse_str(&r.stdout).unwrap();
        assert_eq!(emit(&inst), r.stdout);
        assert_eq!(parse_str(&emit(&inst)).unwrap(), inst);
    }
}

#[test]
fn shipped_fixtures_parse() {
    for f in &quadsg_cli::fixtures::FIXTURES {
        let inst = parse_str(f.text).unwrap();
        assert_eq!(parse_str(&emit(&inst)).unwrap(), inst);
    }
    let intro = parse_str(quadsg_cli::fixtures::get("intro").unwrap().text).unwrap();
    assert_eq!((intro.nvars, intro.quadratics().unwrap().len()), (4, 4));
    let listing = json(&quadsg(&["--fixtures"]));
    assert_eq!(listing["fixtures"].as_array().unwrap().len(), 3);
}
