use std::io::Write;
use std::process::{Command, Output, Stdio};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE1: &str = "\
# running example
var x1 a b
var x2 a b
var x3 a b
var x4 b c
";

fn example1(z: &str) -> String {
    format!("{EXAMPLE1}z {z}\n")
}

fn softalldiff(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_softalldiff"))
        .args(args)
        .arg("-")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn softalldiff");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn filter_removes_b_from_x4() {
    let out = softalldiff(&["filter"], &example1("1 1"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "x1: {a, b}\nx2: {a, b}\nx3: {a, b}\nx4: {c}\nz=[1,1]\n"
    );
}

#[test]
fn filter_raises_z_min() {
    let out = softalldiff(&["filter"], &example1("0 6"));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("x4: {b, c}\nz=[1,6]\n"));
}

#[test]
fn filter_json_has_fixed_key_order() {
    let out = softalldiff(&["filter", "--format", "json"], &example1("1 1"));
    assert_eq!(
        stdout(&out),
        concat!(
            r#"{"consistent":true,"min_violation":1,"#,
            r#""domains":{"x1":["a","b"],"x2":["a","b"],"x3":["a","b"],"x4":["c"]},"#,
            r#""z":[1,1],"removed":[["x4","b"]]}"#,
            "\n"
        )
    );
}

#[test]
fn check_reports_inconsistency() {
    let out = softalldiff(&["check"], &example1("0 0"));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "inconsistent\n");

    let out = softalldiff(&["check"], &example1("0 6"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "consistent min_violation=1\n");
}

#[test]
fn filter_inconsistent_exits_one() {
    let out = softalldiff(&["filter", "--format", "json"], &example1("0 0"));
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["consistent"], false);
    assert_eq!(v["removed"], serde_json::json!([]));
}

#[test]
fn solve_finds_one_violation() {
    let out = softalldiff(&["solve"], &example1("0 6"));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("z=1\n"));
}

#[test]
fn solve_without_solution_under_bound() {
    let out = softalldiff(&["solve"], "var x a\nvar y a\nz 0 0\n");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "inconsistent\n");
}

#[test]
fn parse_errors_exit_two() {
    for bad in [
        "# only comments\n",
        "var x a\n",
        "var x a\nz 0 1\nz 0 1\n",
        "var x\nz 0 0\n",
        "var x a\nz 0 x\n",
    ] {
        let out = softalldiff(&["check"], bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let out = softalldiff(&["check"], "var x a\nz 0 x\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_softalldiff"))
        .args(["check", "/nonexistent/instance.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stats_go_to_stderr_in_text_mode() {
    let out = softalldiff(&["filter", "--stats"], &example1("1 1"));
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("stats: augmentations=4 "), "{err}");
    let out = softalldiff(&["filter", "--stats", "--format", "json"], &example1("1 1"));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stats"]["augmentations"], 4);
}

#[test]
fn oracle_refuses_large_instances() {
    let mut text = String::new();
    for i in 0..7 {
        text.push_str(&format!("var x{i} 0 1 2 3 4 5 6 7 8 9\n"));
    }
    text.push_str("z 0 21\n");
    let out = softalldiff(&["filter", "--oracle"], &text);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration cap"));
}

fn random_file(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(1..=5);
    let universe = rng.gen_range(1..=6usize);
    let mut text = String::new();
    for i in 0..n {
        let size = rng.gen_range(1..=universe.min(4));
        let toks: Vec<String> = sample(rng, universe, size)
            .into_iter()
            .map(|v| format!("v{v}"))
            .collect();
        text.push_str(&format!("var x{i} {}\n", toks.join(" ")));
    }
    let z_max = rng.gen_range(0..=3);
    text.push_str(&format!("z {} {z_max}\n", rng.gen_range(0..=z_max)));
    text
}

#[test]
fn oracle_agrees_on_random_files_and_output_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..60 {
        let text = random_file(&mut rng);
        for cmd in ["check", "filter", "solve"] {
            let first = softalldiff(&[cmd, "--oracle", "--format", "json"], &text);
            assert!(
                matches!(first.status.code(), Some(0 | 1)),
                "{cmd} on\n{text}"
            );
            let again = softalldiff(&[cmd, "--oracle", "--format", "json"], &text);
            assert_eq!(first.stdout, again.stdout);
        }
    }
}
