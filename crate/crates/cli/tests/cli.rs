use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ljmse_core::target::parse_lam;
use serde_json::Value;

fn ljmse(args: &[&str]) -> Output {
    run(args, &[], None)
}

fn run(args: &[&str], env: &[(&str, &str)], stdin: Option<&str>) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ljmse"));
    cmd.args(args).env_remove("LJMSE_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn leftmost_trace_ends_in_the_normal_form() {
    let o = ljmse(&["reduce", "--calculus", "ljmse", "-e", "{(\\x.x) y::[]}", "--strategy", "leftmost"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4, "{out}");
    assert!(lines.last().unwrap().ends_with(": y"), "{out}");
    let rules: Vec<&str> = lines[1..].iter().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(rules, ["beta", "sigma", "eps"]);
}

#[test]
fn trace_json_matches_fixture() {
    let o = ljmse(&["reduce", "--json", "--strategy", "leftmost", "-e", "{(\\x.x) y::[]}"]);
    let want = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/trace_beta_eps.json")).unwrap();
    assert_eq!(stdout(&o), want);
}

#[test]
fn cgps_of_a_variable() {
    let o = ljmse(&["translate", "--kind", "cgps", "-e", "y"]);
    assert_eq!(o.status.code(), Some(0));
    let got = parse_lam(stdout(&o).trim()).unwrap();
    // \g.\k. y (s g) k with s = \x.[x; \z.z]
    let want = parse_lam("\\g.\\k. y ((\\x.(\\v.x) (\\z.z)) g) k").unwrap();
    assert!(got.alpha_eq(&want), "{got}");
}

#[test]
fn translate_emits_types() {
    let o = ljmse(&["translate", "--kind", "cps", "-e", "\\x.x", "--emit", "type", "--json"]);
    assert_eq!(json(&o)["type"], "(((((A->Bot)->Bot)->Bot)->((A->Bot)->Bot)->Bot)->Bot)->Bot");
    let o = ljmse(&["translate", "--kind", "cgps-lj", "-e", "\\x.x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not apply"));
}

#[test]
fn check_json_shapes() {
    let o = ljmse(&["check", "--json", "-e", "\\x.x"]);
    assert_eq!(stdout(&o), "{\"type\":\"A->A\"}\n");
    let o = ljmse(&["check", "--json", "-e", "\\x.x", "--type", "A"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"]["reason"], "clash");
    assert!(v["error"]["pos"].is_array());
    let o = ljmse(&["check", "--json", "-e", "y::[]", "--ctx", "y:X"]);
    assert_eq!(json(&o), serde_json::json!({"in": "X->A", "type": "A"}));
}

#[test]
fn subsystem_check_and_reduce() {
    let o = ljmse(&["check", "--calculus", "lj", "-e", "f(y, z.z)", "--ctx", "f:A->B, y:A"]);
    assert_eq!(stdout(&o).trim(), "f(y, z.z) : B");
    let o = ljmse(&["normalize", "--calculus", "lambda", "-e", "(\\x.x) y"]);
    assert_eq!(stdout(&o).trim(), "y");
}

#[test]
fn embeddings_follow_the_spectrum() {
    let mut term = "\\x.x y".to_string();
    for (from, to) in [("lambda", "lj"), ("lj", "ljm"), ("ljm", "ljms"), ("ljms", "ljmse")] {
        let o = ljmse(&["embed", "--from", from, "-e", &term]);
        assert_eq!(o.status.code(), Some(0), "{from}: {}", stderr(&o));
        let next = stdout(&o).trim().to_string();
        let back = ljmse(&["parse", "--calculus", to, "-e", &next]);
        assert_eq!(back.status.code(), Some(0), "{to} does not parse {next}");
        term = next;
    }
    let direct = ljmse(&["embed", "--from", "lambda", "--to", "ljmse", "-e", "\\x.x y"]);
    assert_eq!(stdout(&direct).trim(), term);
    let o = ljmse(&["embed", "--from", "ljmse", "-e", "y"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.txt");
    std::fs::write(&f, "\\x.x\n").unwrap();
    let o = ljmse(&["parse", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "\\x.x");
    let o = run(&["parse"], &[], Some("{x y::[]}"));
    assert_eq!(stdout(&o).trim(), "{x y::[]}");
}

#[test]
fn errors_are_one_line_with_codes() {
    let cases: [(&[&str], i32); 5] = [
        (&["parse", "-e", "x y::"], 1),
        (&["check", "-e", "\\x.{x x::[]}"], 1),
        (&["bogus"], 3),
        (&["reduce", "--strategy", "sideways", "-e", "x"], 3),
        (&["parse", "/no/such/file"], 3),
    ];
    for (args, code) in cases {
        let o = ljmse(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "), "{err}");
    }
    let o = ljmse(&["parse", "--json", "-e", "x y::"]);
    assert_eq!(json(&o)["error"]["reason"], "parse");
    assert_eq!(ljmse(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_all_passes() {
    let o = ljmse(&["verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["verify", "--suite", "embeddings", "--count", "40", "--json"];
    let a = ljmse(&args);
    let b = ljmse(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}

#[test]
fn golden_reports_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["negative", "confluence"] {
        let o = ljmse(&["verify", "--suite", suite, "--seed", "7", "--golden", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let rel = format!("{suite}/7.json");
        let got = std::fs::read_to_string(dir.path().join(&rel)).unwrap();
        let want = std::fs::read_to_string(golden_dir().join(&rel)).unwrap();
        assert_eq!(got, want, "{rel}");
    }
}

#[test]
fn seed_precedence() {
    let seeded = |extra: &[&str], env: &[(&str, &str)], cfg: Option<&str>| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ljmse.conf");
        let mut args = vec!["peaks", "--json", "--depth", "2"];
        args.extend_from_slice(extra);
        if let Some(c) = cfg {
            std::fs::write(&path, c).unwrap();
            args.extend(["--config", path.to_str().unwrap()]);
        }
        stdout(&run(&args, env, None))
    };
    let s3 = seeded(&["--seed", "3"], &[], None);
    let s7 = seeded(&[], &[], None);
    assert_ne!(s3, s7);
    assert_eq!(seeded(&[], &[("LJMSE_SEED", "3")], None), s3);
    assert_eq!(seeded(&[], &[], Some("seed = 3\n")), s3);
    assert_eq!(seeded(&[], &[("LJMSE_SEED", "7")], Some("seed = 3\n")), s7);
    assert_eq!(seeded(&["--seed", "7"], &[("LJMSE_SEED", "3")], None), s7);
}

#[test]
fn config_supplies_defaults_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ljmse.conf");
    std::fs::write(&path, "kind = cps\nstrategy = leftmost\n").unwrap();
    let p = path.to_str().unwrap();
    let cps = ljmse(&["translate", "--config", p, "-e", "y"]);
    assert_eq!(stdout(&cps).trim(), "\\k.y k");
    let cgps = ljmse(&["translate", "--config", p, "--kind", "cgps", "-e", "y"]);
    assert!(stdout(&cgps).starts_with("\\g."));
    let tr = ljmse(&["reduce", "--config", p, "-e", "{(\\x.x) y::[]}"]);
    assert!(stdout(&tr).trim_end().ends_with(": y"));
    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(ljmse(&["parse", "--config", p, "-e", "x"]).status.code(), Some(3));
}

#[test]
fn peaks_all_join() {
    let o = ljmse(&["peaks", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 7);
    assert!(rows.iter().all(|r| r["joined"] == true));
}
