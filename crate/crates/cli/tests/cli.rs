use std::fs;
use std::process::{Command, Output};

fn hssor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hssor"))
        .args(args)
        .output()
        .expect("spawn cli")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_converged_exits_zero() {
    let o = hssor(&[
        "solve",
        "--problem",
        "iso2d",
        "--n",
        "15",
        "--precond",
        "hssor",
        "--out",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.split("\r\n");
    assert_eq!(
        lines.next(),
        Some("problem,n,1/h,precond,status,its,time,relres")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..5], &["iso2d", "15", "16", "hssor", "its"]);
}

#[test]
fn solve_not_converged_exits_two() {
    let o = hssor(&[
        "solve",
        "--problem",
        "iso2d",
        "--n",
        "31",
        "--precond",
        "none",
        "--maxit",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("| NC |"));
}

#[test]
fn solve_memory_guard_exits_three() {
    let o = hssor(&[
        "solve",
        "--problem",
        "iso3d",
        "--n",
        "20",
        "--precond",
        "bssor",
        "--memory-limit-mb",
        "1",
        "--out",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cell"]["status"], "ME");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        hssor(&[
            "solve",
            "--problem",
            "nope",
            "--n",
            "4",
            "--precond",
            "ssor"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        hssor(&[
            "solve",
            "--problem",
            "iso2d",
            "--n",
            "0",
            "--precond",
            "ssor"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(hssor(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn analyze_is_deterministic_without_timestamp() {
    let args = ["analyze", "--n", "6", "--no-timestamp"];
    let a = hssor(&args);
    let b = hssor(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("s,t,r,theta,phi,xi,lamA"));
    assert_eq!(text.lines().count(), 1 + 6 * 6 * 6);
    assert!(!text.contains("generated"));
}

#[test]
fn analyze_writes_csv_and_reports_bound_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sym.csv");
    let o = hssor(&["analyze", "--n", "16", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("# generated:"));
    let summary = stdout(&o);
    assert!(summary.contains("95/36"));
}

#[test]
fn analyze_circulant_runs_operator_check() {
    let o = hssor(&[
        "analyze",
        "--n",
        "4",
        "--convention",
        "circulant",
        "--mode",
        "exact",
        "--no-timestamp",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verify modes=64"));
}

#[test]
fn generate_round_trips_through_spec() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let o = hssor(&[
        "generate",
        "--problem",
        "dc1-2d",
        "--n",
        "7",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let second = dir.path().join("b");
    let spec = first.with_extension("json");
    let o = hssor(&[
        "generate",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let a = fs::read(first.with_extension("mtx")).unwrap();
    let b = fs::read(second.with_extension("mtx")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bench_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = hssor(&[
        "bench",
        "--rows",
        "2:15",
        "--methods",
        "hssor,ssor",
        "--quiet",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("matrix,1/h,HSSOR its,HSSOR time,SSOR its,SSOR time\r\n"));
    assert!(text.contains("2D,16,"));
    assert!(stdout(&o).contains("| 2D | 16 |"));
}
