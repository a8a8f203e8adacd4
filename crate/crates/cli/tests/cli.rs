use std::path::PathBuf;
use std::process::Command;

fn file(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ludics")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn run_path(cmd: &str, p: &PathBuf) -> (i32, String) {
    run(&[cmd, p.to_str().unwrap()])
}

#[test]
fn orthogonal_pair() {
    let p = file("sep_p.d", "x0 | down<{ up(y) => daimon }>");
    let n = file("sep_n.d", "{ up(z) => z | down<{}> }");
    let (code, out) = run(&["orthogonal", p.to_str().unwrap(), n.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("daimon"));
    let empty = file("sep_empty.d", "{}");
    let (code, out) = run(&["orthogonal", p.to_str().unwrap(), empty.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("omega"));
}

#[test]
fn stuck_proof_and_countermodel() {
    let s = file("stuck.seq", "x0 | b |- x0: one");
    let (code, out) = run_path("prove", &s);
    assert_eq!(code, 1);
    assert!(out.contains("stuck: `b` is not an action of one on x0"));
    let (code, out) = run_path("countermodel", &s);
    assert_eq!(code, 0);
    assert!(out.starts_with("M(x0) = { * => daimon }\n"));
    assert!(out.contains("membership: pass"));
}

#[test]
fn derivable_sequent() {
    let s = file("ok.seq", "x0 | * |- x0: one");
    assert_eq!(run_path("prove", &s).0, 0);
    assert_eq!(run_path("countermodel", &s).0, 1);
}

#[test]
fn periodic_countermodel() {
    let s = file("inf.seq", "def inf(x) = x | down<{ up(y) => inf(x) }>\ninf(x0) |- x0: down(up(one))");
    let (code, out) = run(&["--fuel", "50", "--format", "report", "countermodel", s.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("model_kind: periodic"));
    assert!(out.contains("defeat: omega (cycle"));
}

#[test]
fn normalize_verdicts() {
    assert_eq!(run_path("normalize", &file("conv.d", "{ a => daimon } | a")).0, 0);
    assert_eq!(run_path("normalize", &file("div.d", "{ a => daimon } | b")).0, 1);
    let looping = file("loop.d", "def d() = { a => d() | a }\nd() | a");
    let (code, out) = run_path("normalize", &looping);
    assert_eq!(code, 1);
    assert!(out.contains("cycle"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["nonsense"]).0, 3);
    assert_eq!(run(&["--fuel", "0", "normalize", "x"]).0, 3);
    assert_eq!(run(&["normalize", "/nonexistent/file.d"]).0, 3);
    assert_eq!(run_path("prove", &file("bad.seq", "x0 | |-")).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn llp_commands() {
    assert_eq!(run(&["llp", "check", "1"]).0, 0);
    assert_eq!(run(&["llp", "check", "B | T"]).0, 0);
    assert_eq!(run(&["llp", "check", "0"]).0, 1);
    let (code, out) = run(&["llp", "roundtrip", "1 * (!B * (!T + !(B | T)))"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("isomorphic\n"));
    let (code, out) = run(&["llp", "translate", "!?1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "down(up(one))\n");
    assert_eq!(run(&["llp", "check", "1 *"]).0, 3);
}

#[test]
fn enumerate_and_determinism() {
    let (code, out) = run(&["enumerate", "x0: one", "--size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x0 | *\ncount: 1\n");
    let (_, positive) = run(&["enumerate", "down(up(one))", "--size", "4", "--models"]);
    assert!(positive.contains("count: "));
    let s = file("det.seq", "x | down<{ up(y) => z | b }> |- x: down(up(one)), z: one");
    assert_eq!(run_path("countermodel", &s), run_path("countermodel", &s));
}
