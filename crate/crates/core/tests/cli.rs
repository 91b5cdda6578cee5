use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use mapda::cli::dispatch;
use mapda::fixtures;
use mapda::validate::validate_mapda;
use mapda::CodedArray;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mapda").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ex1() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/ex1.pda")
}

#[test]
fn construct_mn_pda_emits_fixture() {
    let (code, out, _) = run(&["construct", "mn-pda", "--users", "4", "--t", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, fixtures::mn_pda_4_2().to_text());
}

#[test]
fn validate_reports_parameters() {
    let path = ex1();
    let (code, out, _) = run(&["validate", path.to_str().unwrap(), "--antennas", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "MAPDA(L=3,K=4,F=4,Z=1,S=3) g=4\n");

    let (code, _, err) = run(&["validate", path.to_str().unwrap(), "--antennas", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("row 1"), "{err}");
}

#[test]
fn validate_pda_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.pda");
    fs::write(&path, fixtures::mn_pda_4_2().to_text()).unwrap();
    let (code, out, _) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PDA("), "{out}");
    assert!(out.trim_end().ends_with("g=3"), "{out}");
}

#[test]
fn compare_prints_table_rows() {
    let (code, out, _) = run(&[
        "compare",
        "--users",
        "100",
        "--antennas",
        "7",
        "--t",
        "5",
        "--m",
        "5",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("thm5 = 240"), "{out}");
    assert!(out.contains("mb = 75287520"), "{out}");
    assert!(out.contains("ep inapplicable"), "{out}");
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn compare_sweep_is_csv() {
    let (code, out, _) = run(&[
        "compare",
        "--users",
        "8",
        "--antennas",
        "3",
        "--m",
        "2",
        "--sweep-t",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,scheme,subpacketization"));
    assert!(out.contains("\n4,thm5,42\n"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "{line}");
        assert!(fields[2].chars().all(|c| c.is_ascii_digit() || c == '/'));
    }
}

#[test]
fn construct_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<&str>, Option<&str>)> = vec![
        (vec!["mn-pda", "--users", "5", "--t", "2"], None),
        (vec!["latin", "--order", "5"], Some("5")),
        (
            vec!["latin-mapda", "--users", "6", "--antennas", "4"],
            Some("4"),
        ),
        (
            vec![
                "mn-mapda",
                "--users",
                "4",
                "--t",
                "2",
                "--m",
                "2",
                "--antennas",
                "3",
            ],
            Some("3"),
        ),
        (
            vec![
                "mn-mapda",
                "--users",
                "5",
                "--t",
                "2",
                "--m",
                "2",
                "--antennas",
                "5",
            ],
            Some("5"),
        ),
    ];
    for (i, (args, antennas)) in cases.into_iter().enumerate() {
        let mut argv = vec!["construct"];
        argv.extend(args);
        let (code, out, err) = run(&argv);
        assert_eq!(code, 0, "{err}");
        let path = dir.path().join(format!("a{i}.pda"));
        fs::write(&path, &out).unwrap();
        let mut check = vec!["validate", path.to_str().unwrap()];
        if let Some(l) = antennas {
            check.extend(["--antennas", l]);
        }
        let (code, _, err) = run(&check);
        assert_eq!(code, 0, "{argv:?}: {err}");
    }
}

#[test]
fn lift_from_file_with_trace_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("q.pda");
    fs::write(&input, fixtures::mn_pda_4_2().to_text()).unwrap();
    let prefix = dir.path().join("ex3");
    let (code, out, err) = run(&[
        "construct",
        "lift",
        "--input",
        input.to_str().unwrap(),
        "--m",
        "2",
        "--antennas",
        "3",
        "--trace",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let p = CodedArray::from_text(&out).unwrap();
    assert_eq!(validate_mapda(&p, 3).unwrap().f, 42);

    for suffix in ["q0", "p1", "u", "u0", "p2", "p"] {
        assert!(
            dir.path().join(format!("ex3.{suffix}")).exists(),
            "{suffix}"
        );
    }
    let u = fs::read_to_string(dir.path().join("ex3.u")).unwrap();
    assert_eq!(u, fixtures::lift_u().to_text());

    let p_path = dir.path().join("ex3.p");
    let (code, out, err) = run(&[
        "audit",
        p_path.to_str().unwrap(),
        "--antennas",
        "3",
        "--trace",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("sum-dof 7 <= 7 (equality)"), "{out}");
    assert!(
        out.contains("lift pass: 24 integers in 7 columns each"),
        "{out}"
    );
}

#[test]
fn audit_without_trace_files() {
    let path = ex1();
    let missing = std::env::temp_dir().join("mapda-no-such-trace");
    let (code, out, _) = run(&[
        "audit",
        path.to_str().unwrap(),
        "--antennas",
        "3",
        "--trace",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("M 12 <= M' 12"), "{out}");
    assert!(out.contains("S 3 >= 3"), "{out}");
    assert!(out.contains("lift skipped"), "{out}");
}

#[test]
fn plan_and_simulate() {
    let path = ex1();
    let file = path.to_str().unwrap();
    let (code, out, _) = run(&["plan", file, "--demands", "1,2,3,4", "--files", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("packets W(1,2) W(2,1) W(3,4) W(4,3)"), "{out}");
    assert!(
        out.contains("interference {1,3,4} {2,3,4} {1,2,3} {1,2,4}"),
        "{out}"
    );

    let (code, out, _) = run(&["simulate", file, "--demands", "1,2,3,4", "--files", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("mode exact\n"));
    assert!(out.contains("served 12\nsum-dof 4\n"), "{out}");

    let (code, out, _) = run(&[
        "simulate",
        file,
        "--demands",
        "1,1,2,2",
        "--files",
        "2",
        "--channel",
        "gaussian",
        "--mode",
        "float",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("channel gaussian seed 3"));

    let (code, _, err) = run(&[
        "simulate",
        file,
        "--demands",
        "1,2,3,4",
        "--files",
        "4",
        "--channel",
        "gaussian",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("float mode"), "{err}");
}

#[test]
fn errors_exit_nonzero() {
    let (code, _, err) = run(&["construct", "mn-pda", "--users", "4", "--t", "4"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");

    let (code, _, err) = run(&["validate", "/nonexistent/array.pda"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/array.pda"));

    let path = ex1();
    let (code, _, err) = run(&[
        "plan",
        path.to_str().unwrap(),
        "--demands",
        "1,2,9,4",
        "--files",
        "4",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("9"), "{err}");
}

#[test]
fn usage_errors_list_flags() {
    let (code, _, err) = run(&["construct", "lift", "--m", "2"]);
    assert_ne!(code, 0);
    assert!(err.contains("--input"));
    assert!(err.contains("--trace <PREFIX>"), "{err}");

    let (code, _, err) = run(&["compare", "--users", "8", "--antennas", "3"]);
    assert_ne!(code, 0);
    assert!(err.contains("--sweep-t"), "{err}");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_mapda");
    let ok = Command::new(bin)
        .args(["validate", ex1().to_str().unwrap(), "--antennas", "3"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert_eq!(
        String::from_utf8_lossy(&ok.stdout),
        "MAPDA(L=3,K=4,F=4,Z=1,S=3) g=4\n"
    );
    let bad = Command::new(bin)
        .args(["validate", ex1().to_str().unwrap(), "--antennas", "1"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(!bad.stderr.is_empty());
}
