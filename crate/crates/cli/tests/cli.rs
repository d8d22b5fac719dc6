use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ac-workbench"));
    c.env_remove("AC_WORKBENCH_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn reduce_examples() {
    let o = run(&["reduce", "abBA"]);
    assert_eq!((code(&o), stdout(&o)), (0, "\n".to_string()));
    let o = run(&["reduce", "aaB"]);
    assert_eq!(stdout(&o), "aaB\n");
    let o = run(&["reduce", "a1A"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 1"));
}

#[test]
fn apply_examples_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t", "2 2\na\nb\n");
    let m = write(&dir, "m", "R 1 2 +\n");
    let out = dir.path().join("out");
    let o = run(&["apply", &t, &m, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), "2 2\nab\nb\n");

    let empty = write(&dir, "e", "");
    let o = run(&["apply", &t, &empty]);
    assert_eq!(stdout(&o), "2 2\na\nb\n");

    let bad = write(&dir, "bad", "R 1 3 +\n");
    assert_eq!(code(&run(&["apply", &t, &bad])), 3);

    // output re-parses into the same tuple
    let o = run(&["apply", out.to_str().unwrap(), &empty]);
    assert_eq!(stdout(&o), "2 2\nab\nb\n");
}

#[test]
fn search_and_verify() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert");
    let o = run(&[
        "search",
        "(ab, b)",
        "--cap",
        "6",
        "--seed",
        "17",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# seed: 17 "));
    assert!(stdout(&o).contains("result: found length 1"));
    let o = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trivializes: yes"));

    let tampered = fs::read_to_string(&cert).unwrap().replace("R 1 2 -", "R 1 2 +");
    let t = write(&dir, "tampered", &tampered);
    assert_eq!(code(&run(&["verify", &t])), 1);
}

#[test]
fn search_exit_codes() {
    // determinant 2: never reaches (a, b)
    assert_eq!(code(&run(&["search", "(aab, b)", "--cap", "4"])), 1);
    let o = run(&["search", "(aaaBBBB, abaBAB)", "--cap", "15", "--budget", "200"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("budget-exhausted"));
    assert_eq!(code(&run(&["search", "(ab, b)", "--strategy", "sideways"])), 3);
    assert_eq!(code(&run(&["search", "(ab, b)", "--cap", "1"])), 3);
    for strategy in ["bfs", "iddfs", "bidirectional"] {
        for dedup in ["exact", "orbit"] {
            let o = run(&[
                "search",
                "(aba, ab)",
                "--cap",
                "8",
                "--strategy",
                strategy,
                "--dedup",
                dedup,
            ]);
            assert_eq!(code(&o), 0, "{strategy} {dedup}: {}", stdout(&o));
            // abelianization has determinant -2
            let o = run(&[
                "search",
                "(abA, aab)",
                "--cap",
                "7",
                "--strategy",
                strategy,
                "--dedup",
                dedup,
            ]);
            assert_eq!(code(&o), 1, "{strategy} {dedup}: {}", stdout(&o));
        }
    }
}

#[test]
fn ak_identity_witness() {
    let o = run(&["ak", "3"]);
    assert_eq!((code(&o), stdout(&o)), (0, "2 2\naaaBBBB\nabaBAB\n".to_string()));
    assert_eq!(code(&run(&["ak", "1"])), 3);

    let dir = TempDir::new().unwrap();
    let ii = write(&dir, "ii", "I 1\nI 1\n");
    assert_eq!(code(&run(&["identity", &ii])), 0);
    let r = write(&dir, "r", "R 1 2 +\n");
    assert_eq!(code(&run(&["identity", &r])), 1);

    let o = run(&["witness", &r]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(a, b) -> (ab, b)"));
    let cb = write(&dir, "cb", "C 1 b\n");
    let o = run(&["witness", &cb]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("-> (Bab, b)"));
    assert_eq!(code(&run(&["witness", &ii])), 1);
}

#[test]
fn equation_command() {
    let o = run(&["equation", "x1 a x1' A"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("trivial: no"));
    assert_eq!(code(&run(&["equation", "x1 x1'"])), 1);
}

#[test]
fn finite_reports() {
    let dir = TempDir::new().unwrap();
    let z2 = write(&dir, "z2", "order 2\n0 1\n1 0\n");
    let o = run(&["finite", &z2, "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fac_order=6 ac_order=6 kernel_order=1 transitive_on_N=yes"));
    let s3 = write(&dir, "s3", "1 0 2\n1 2 0\n");
    let o = run(&["finite", &s3, "--kernel-generators"]);
    assert!(stdout(&o).contains("kernel_order=24"));
    assert!(stdout(&o).lines().any(|l| l.starts_with("kernel ")));
    let broken = write(&dir, "broken", "order 3\n0 1 2\n1 0 2\n2 2 0\n");
    assert_eq!(code(&run(&["finite", &broken])), 3);
    assert_eq!(
        code(&run(&["finite", Path::new("/nonexistent/group").to_str().unwrap()])),
        3
    );
}

#[test]
fn classify_is_independent_of_threads() {
    let args = ["classify", "--enum-cap", "4", "--cap", "6", "--seed", "5"];
    let one = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let four = bin().args(args).env("AC_WORKBENCH_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(stdout(&one), stdout(&four));
    assert!(stdout(&one).starts_with("# seed: 5\n"));
    let o = run(&["classify", "--enum-cap", "4", "--cap", "6", "--budget", "10"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn help_is_not_an_error() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 3);
}
