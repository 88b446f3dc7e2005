//! End-to-end tests against the built binary: file round trips, the
//! verdict line format, exit-code contract, and CSV shapes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cowkit-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn cowkit(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cowkit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn cowkit")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = workdir("roundtrip");
    let out = cowkit(&dir, &["construct", "builtin", "C4x5", "--out", "c4"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("C4x5 4x5 pm1"));

    let out = cowkit(&dir, &["verify", "c4.mat", "--method", "fast"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).trim(), "verdict cow method fast work 1");

    let out = cowkit(&dir, &["verify", "c4.desc", "--method", "naive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).trim(), "verdict cow method naive work 121");

    // the emitted matrix file re-reads bit-exactly
    let text = fs::read_to_string(dir.join("c4.mat")).unwrap();
    let reparsed = cowkit_core::matrix::CodeMatrix::from_text(&text).unwrap();
    assert_eq!(reparsed.to_text(), text);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    let dir = workdir("exits");
    // negative verdict with a witness line -> exit 1
    fs::write(
        dir.join("dup.mat"),
        "4 6 pm1\n+1 +1 +1 +1 +1 +1\n+1 -1 +1 -1 +1 +1\n+1 +1 -1 -1 +1 +1\n+1 -1 -1 +1 -1 -1\n",
    )
    .unwrap();
    let out = cowkit(&dir, &["verify", "dup.mat"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.starts_with("verdict not-errorless"));
    assert!(text.contains("witness"));

    // parse failure -> exit 2
    fs::write(dir.join("bad.mat"), "garbage\n").unwrap();
    assert_eq!(cowkit(&dir, &["verify", "bad.mat"]).status.code(), Some(2));

    // infeasible fast search on the 64x104 expansion -> exit 3,
    // structural certificate -> exit 0
    let out = cowkit(
        &dir,
        &[
            "construct",
            "kron",
            "--p",
            "H8",
            "--c",
            "C8x13",
            "--out",
            "d64",
        ],
    );
    assert!(out.status.success());
    assert_eq!(
        cowkit(&dir, &["verify", "d64.mat", "--method", "fast"])
            .status
            .code(),
        Some(3)
    );
    let out = cowkit(&dir, &["verify", "d64.desc", "--method", "structural"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out).trim(),
        "verdict cow method structural work 121"
    );
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bounds_single_values_and_sweeps() {
    let dir = workdir("bounds");
    let out = cowkit(&dir, &["bounds", "--m", "4", "--n", "5", "--bound", "thm7"]);
    assert!(out.status.success());
    let v: f64 = stdout_of(&out).trim().parse().unwrap();
    assert!((v - 4.2143).abs() < 0.001);

    let out = cowkit(&dir, &["bounds", "--m", "1", "--bound", "thm6"]);
    assert_eq!(stdout_of(&out).trim(), "1");

    let out = cowkit(
        &dir,
        &[
            "bounds",
            "--m",
            "8",
            "--n",
            "8:1:16",
            "--bound",
            "thm7,thm8",
        ],
    );
    assert!(out.status.success());
    let csv = stdout_of(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "m,n,bound,value_bits,aux");
    assert_eq!(lines.clone().count(), 18); // 9 grid points x 2 bounds
    assert!(lines.all(|l| l.starts_with("8,")));

    // lemma3 rows appear only where m divides n
    let out = cowkit(
        &dir,
        &["bounds", "--m", "4", "--n", "4:1:12", "--bound", "lemma3"],
    );
    let csv = stdout_of(&out);
    assert_eq!(csv.lines().count(), 1 + 3); // header + n in {4, 8, 12}
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decode_reads_vector_files() {
    let dir = workdir("decode");
    cowkit(&dir, &["construct", "builtin", "C8x13", "--out", "c8"]);
    // noiseless received vector for the all-ones word
    let c8 = cowkit_core::construct::builtin("C8x13").unwrap();
    let all_ones = c8.matrix.as_int().mul_ivec(&[1i64; 13]);
    let line: Vec<String> = all_ones.iter().map(|v| v.to_string()).collect();
    fs::write(
        dir.join("y.txt"),
        format!("# received\n{}\n", line.join(" ")),
    )
    .unwrap();

    let out = cowkit(&dir, &["decode", "--code", "c8.desc", "--in", "y.txt"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let word_line = text.lines().next().unwrap();
    assert_eq!(word_line, format!("word{}", " +1".repeat(13)));
    assert!(text.lines().nth(1).unwrap().starts_with("score 0.0000"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simulate_csv_and_thread_determinism() {
    let dir = workdir("simulate");
    let args = [
        "simulate",
        "--code",
        "H16",
        "--decoder",
        "hadamard",
        "--ebn0",
        "0:2:4",
        "--max-trials",
        "4000",
        "--min-errors",
        "150",
        "--seed",
        "11",
    ];
    let a = cowkit(&dir, &{
        let mut v = args.to_vec();
        v.extend(["--threads", "1"]);
        v
    });
    let b = cowkit(&dir, &{
        let mut v = args.to_vec();
        v.extend(["--threads", "4"]);
        v
    });
    assert!(a.status.success() && b.status.success());
    let strip_seconds = |csv: &str| -> Vec<String> {
        csv.lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(head, _)| head.to_string())
                    .unwrap_or_default()
            })
            .collect()
    };
    assert_eq!(strip_seconds(&stdout_of(&a)), strip_seconds(&stdout_of(&b)));
    let csv = stdout_of(&a);
    assert!(csv.starts_with("code,decoder,ebn0_db,trials,bits,bit_errors,ber,seconds"));
    assert_eq!(csv.lines().count(), 4); // header + 3 points

    // config file drives the same run; flags override
    fs::write(
        dir.join("run.cfg"),
        "code H16\ndecoder hadamard\nebn0 0:2:4\nmax-trials 4000\nmin-errors 150\nseed 11\n",
    )
    .unwrap();
    let c = cowkit(&dir, &["simulate", "--config", "run.cfg"]);
    assert!(c.status.success());
    assert_eq!(strip_seconds(&stdout_of(&c)), strip_seconds(&stdout_of(&a)));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_exits_clean() {
    let dir = workdir("selftest");
    let out = cowkit(&dir, &["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("selftest passed"));
    fs::remove_dir_all(&dir).unwrap();
}
