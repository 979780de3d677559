use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn samples() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn kfiltr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfiltr")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn df_of_beta_on_p2_is_zero() {
    let p2 = data("p2.json");
    let o = kfiltr(&["df", "--filtration", "beta", "--format", "csv", p2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\ndf,0,0\n"), "{}", stdout(&o));
}

#[test]
fn df_of_tent_is_not_good() {
    let f = data("p1_tent.json");
    let o = kfiltr(&["df", "--filtration", "tent", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("df: NotGood: weight quasipolynomial period 2"), "{err}");
    assert!(err.contains("requires"));
}

#[test]
fn check_passes_on_bundled_samples() {
    for f in samples() {
        let o = kfiltr(&["check", f.to_str().unwrap()]);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{}: {}{}", f.display(), out, stderr(&o));
        assert!(!out.contains("FAIL"), "{out}");
        assert!(out.contains("PASS"));
    }
}

#[test]
fn every_sample_runs_its_tasks() {
    for f in samples() {
        let o = kfiltr(&["run", "--format", "csv", f.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", f.display(), stderr(&o));
        assert!(stdout(&o).starts_with("# "));
    }
}

#[test]
fn csv_is_stable_across_thread_counts() {
    for f in samples() {
        let run = |threads: &str| {
            let o = Command::new(env!("CARGO_BIN_EXE_kfiltr"))
                .args(["run", "--format", "csv", f.to_str().unwrap()])
                .env("KFILTR_THREADS", threads)
                .output()
                .unwrap();
            assert!(o.status.success());
            o.stdout
        };
        let one = run("1");
        assert_eq!(one, run("4"));
        assert_eq!(one, run("1"));
    }
}

#[test]
fn parse_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"polytope\": { \"dim\": 1 \"vertices\": [[0], [1]] }\n}\n").unwrap();
    let o = kfiltr(&["hilbert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column 26"), "{}", stderr(&o));
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frac.json");
    std::fs::write(&path, r#"{ "polytope": { "dim": 1, "vertices": [[0], [0.5]] } }"#).unwrap();
    let o = kfiltr(&["hilbert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ValidationError"));
}

#[test]
fn usage_errors_exit_one() {
    let f = data("p1_tent.json");
    assert_eq!(kfiltr(&["chow", "--filtration", "tent", f.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(kfiltr(&["df", "--filtration", "nope", f.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(kfiltr(&["bogus", f.to_str().unwrap()]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_kfiltr"))
        .args(["hilbert", f.to_str().unwrap()])
        .env("KFILTR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_flag_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chow.csv");
    let f = data("p1_tent.json");
    let o = kfiltr(&[
        "chow",
        "--filtration",
        "tent",
        "--r",
        "2",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text, "# chow tent r=2\nquantity,value,value_decimal\nchow,1/6,0.166666666666666\n");
}

#[test]
fn non_smooth_blowup_names_the_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wedge.json");
    std::fs::write(
        &path,
        r#"{
  "polytope": { "dim": 2, "vertices": [[0, 0], [2, 1], [1, 2]] },
  "filtrations": { "x": { "type": "min_affine", "forms": [{ "u": [1, 0], "c": 0 }] } }
}"#,
    )
    .unwrap();
    let o = kfiltr(&["blowup", "--filtration", "x", "--vertex", "0", "--m", "2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NonSmoothCorner"), "{}", stderr(&o));
}
