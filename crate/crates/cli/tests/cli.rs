use std::io::Write;
use std::process::{Command, Output, Stdio};

use cfcolor_cli::{cmd_construct, cmd_verify, Cli, Command as Sub, EXIT_OK};
use clap::Parser;

fn cfcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfcolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cfcolor_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfcolor"))
        .args(args)
        .env("CFCOLOR_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_examples() {
    let o = cfcolor(&["construct", "--mode", "kscf", "--k", "2", "--n", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1,2,3,1,4,2,1,5,2,3,1,2"));

    let o = cfcolor(&["construct", "--mode", "kcf", "--k", "3", "--n", "15"]);
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    let distinct: std::collections::BTreeSet<&str> = first.split(',').collect();
    assert_eq!(distinct.len(), 2);
    assert!(text.lines().nth(1).unwrap().contains("\"colors_used\":2"));

    let o = cfcolor(&["construct", "--mode", "kscf", "--k", "1", "--n", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("1"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        cfcolor(&["verify", "--mode", "kscf", "--k", "3", "1,2,3,4,1,5,3"])
            .status
            .code(),
        Some(0)
    );
    let o = cfcolor(&["verify", "--mode", "kcf", "--k", "1", "1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "{\"ok\":false,\"violation\":[1,2],\"colors_used\":1}\n");
    assert_eq!(
        cfcolor(&["verify", "--mode", "kcf", "--k", "1", "1,,2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cfcolor(&["verify", "--mode", "kcf", "--k", "0", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(cfcolor(&["construct", "--k", "2"]).status.code(), Some(2));
    assert_eq!(cfcolor(&["construct", "--k", "2", "--n", "0"]).status.code(), Some(2));
    assert_eq!(cfcolor(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cfcolor(&["--help"]).status.code(), Some(0));
    assert_eq!(
        cfcolor_threads(&["formulas", "--chi-kcf", "--n", "4", "--k", "1"], "x")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn pipe_construct_into_verify() {
    for (mode, k, n) in [
        ("kscf", "2", "100"),
        ("kscf", "5", "200"),
        ("kcf", "3", "150"),
        ("kscf", "1", "77"),
    ] {
        let built = cfcolor(&["construct", "--mode", mode, "--k", k, "--n", n]);
        assert_eq!(built.status.code(), Some(0));
        let mut child = Command::new(env!("CARGO_BIN_EXE_cfcolor"))
            .args(["verify", "--mode", mode, "--k", k, "--input", "-"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(&built.stdout).unwrap();
        let out = child.wait_with_output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{mode} k={k} n={n}: {}", stdout(&out));
    }
}

#[test]
fn verify_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let built = cfcolor(&[
        "construct",
        "--mode",
        "kscf",
        "--k",
        "3",
        "--n",
        "40",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(built.status.code(), Some(0));
    assert!(built.stdout.is_empty());
    let o = cfcolor(&[
        "verify",
        "--mode",
        "kscf",
        "--k",
        "3",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // a 3-SCF coloring need not be 4-SCF
    let o = cfcolor(&[
        "verify",
        "--mode",
        "kscf",
        "--k",
        "4",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        cfcolor(&["verify", "--k", "1", "--input", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

/// Every (mode, k <= 5, n <= 200) construction verifies, in process.
#[test]
fn round_trip_matrix() {
    for mode in ["kscf", "kcf"] {
        for k in 1..=5 {
            for n in 1..=200 {
                let (k, n) = (k.to_string(), n.to_string());
                let built =
                    match Cli::parse_from(["cfcolor", "construct", "--mode", mode, "--k", &k, "--n", &n]).command {
                        Sub::Construct(a) => cmd_construct(&a).unwrap(),
                        _ => unreachable!(),
                    };
                let line = built.text.lines().next().unwrap().to_string();
                let verdict = match Cli::parse_from(["cfcolor", "verify", "--mode", mode, "--k", &k, &line]).command {
                    Sub::Verify(a) => cmd_verify(&a).unwrap(),
                    _ => unreachable!(),
                };
                assert_eq!(verdict.code, EXIT_OK, "{mode} k={k} n={n}");
            }
        }
    }
}

#[test]
fn oracle_and_formulas() {
    let o = cfcolor(&["oracle", "--mode", "kscf", "--k", "2", "--m", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 12);
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["witness_verified"], true);

    let capped = cfcolor(&["oracle", "--mode", "kscf", "--k", "2", "--m", "6", "--max-nodes", "50"]);
    assert_eq!(capped.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&capped)).unwrap();
    assert_eq!(v["exhausted"], false);
    assert!(v["value"].is_null());

    let o = cfcolor(&["formulas", "--chi-kcf", "--n", "16", "--k", "3"]);
    assert_eq!(stdout(&o), "3\n");
    assert_eq!(
        cfcolor(&["formulas", "--f-scf", "--n", "5", "--k", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn online_report_rows() {
    let args = [
        "online",
        "--n",
        "64",
        "--k",
        "1",
        "--order",
        "random",
        "--strategy",
        "random-fit",
        "--trials",
        "10",
        "--seed",
        "7",
    ];
    let o = cfcolor(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().skip(1).all(|l| l.starts_with("1,7,0,")));
}

#[test]
fn degeneracy_exit_codes() {
    assert_eq!(
        cfcolor(&["degeneracy", "--n", "6", "--k", "2", "--q", "3"])
            .status
            .code(),
        Some(0)
    );
    let o = cfcolor(&["degeneracy", "--n", "6", "--k", "1", "--q", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["witness"]["arrival"].is_array());
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["construct", "--mode", "kscf", "--k", "5", "--n", "200"],
        vec!["oracle", "--mode", "kscf", "--k", "2", "--m", "6"],
        vec!["oracle", "--mode", "kscf", "--k", "3", "--n", "15", "--format", "csv"],
        vec![
            "oracle",
            "--mode",
            "kscf",
            "--k",
            "2",
            "--m",
            "6",
            "--max-nodes",
            "5000",
        ],
        vec!["audit", "--k", "4", "--m-max", "7"],
        vec!["audit", "--k", "5", "--m-max", "8", "--format", "json"],
        vec![
            "online",
            "--n",
            "16,64",
            "--k",
            "2",
            "--order",
            "random",
            "--order",
            "midpoint-first",
            "--strategy",
            "first-fit,random-fit",
            "--trials",
            "5",
            "--seed",
            "11",
            "--format",
            "json",
        ],
        vec!["degeneracy", "--n", "7", "--k", "1", "--q", "1"],
    ];
    for args in &invocations {
        let a = cfcolor_threads(args, "1");
        let b = cfcolor_threads(args, "1");
        let c = cfcolor_threads(args, "8");
        assert!(a.status.success() || a.status.code() == Some(1), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} under 8 workers");
        assert_eq!(a.status.code(), c.status.code());
    }
}
