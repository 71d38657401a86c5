use std::fs;
use std::process::{Command, Output};

fn ekq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekq")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_small_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let o = ekq(&["compute", "--min", "3", "--max", "13", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,kappa,r,delta,gamma_plus,gamma,sg2p,sg2m,sg4p,sg4m");
    let qs: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(qs, ["3", "5", "7", "11", "13"]);
    assert!(!text.contains('\r'));
}

#[test]
fn compute_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let o = ekq(&["compute", "--min", "50", "--max", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("error"));
    let o = ekq(&["compute", "--min", "3", "--max", "10", "--out", "/nonexistent/dir/k.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ekq(&["compute", "--min", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ekq(&["compute", "--min", "3", "--max", "9", "--out", "x", "--precision", "quad"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_table2_tolerances() {
    let o = ekq(&["verify-table2", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = ekq(&["verify-table2", "--tol", "1e-14", "--precision", "dd"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = ekq(&["verify-table2", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("q=3 "));
}

#[test]
fn analyze_table2_range() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let prefix = dir.path().join("t");
    let o = ekq(&["compute", "--min", "3", "--max", "999", "--threads", "2", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = ekq(&[
        "analyze",
        "--in",
        csv.to_str().unwrap(),
        "--spike",
        "2:+1",
        "--bins",
        "0.01",
        "--range",
        "-0.5:0.5",
        "--out-prefix",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let spikes = fs::read_to_string(dir.path().join("t_spikes.csv")).unwrap();
    assert_eq!(spikes.lines().nth(1).unwrap().split(',').nth(3), Some("36"));
    let hist = fs::read_to_string(dir.path().join("t_hist.csv")).unwrap();
    assert_eq!(hist.lines().count(), 1 + 100 + 2);
    let counted: u64 = hist.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(counted, 167);
    for suffix in ["_delta.csv", "_anomalies.csv"] {
        assert!(dir.path().join(format!("t{suffix}")).exists());
    }
}

#[test]
fn analyze_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let prefix = dir.path().join("p");
    let o = ekq(&["analyze", "--in", empty.to_str().unwrap(), "--out-prefix", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "q,kappa,r,delta,gamma_plus,gamma,sg2p,sg2m,sg4p,sg4m\n3,0.1,0.1,0,0,0,0,1,0,1\n5,zz,0,0,0,0,0,0,0,0\n",
    )
    .unwrap();
    let o = ekq(&["analyze", "--in", bad.to_str().unwrap(), "--out-prefix", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));

    let o = ekq(&["analyze", "--in", bad.to_str().unwrap(), "--out-prefix", "x", "--spike", "3:+1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_listing() {
    let o = ekq(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1.64330582"));
    assert!(text.contains("3.279577"));
    assert!(text.contains("c2(55)"));
}
