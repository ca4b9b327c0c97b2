use std::path::Path;
use std::process::{Command, Output};

fn bdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdlab")).args(args).output().expect("binary runs")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn hk_csv_starts_at_minus_log_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h2.csv");
    let o = bdlab(&["hk", "--k", "2", "--N", "1024", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1025);
    assert_eq!(lines[0], "index,value");
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v + 2f64.ln()).abs() < 1e-15);

    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("h2.csv.meta.json"))).unwrap();
    assert_eq!(meta["command"], "hk");
    assert_eq!(meta["N"], 1024);
    assert_eq!(meta["seed"], 0);
}

#[test]
fn moebius_rows_decrease() {
    let o = bdlab(&["moebius", "--n", "10,100,1000", "--N", "65536"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let norms: Vec<f64> =
        text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(norms.len(), 3);
    assert!(norms.windows(2).all(|w| w[1] < w[0]), "{norms:?}");
}

#[test]
fn verify_all_passes_as_json() {
    let o = bdlab(&["verify", "--all", "--N", "4096", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bdlab(&["hk", "--k", "2", "--N", "8"]).status.code(), Some(2));
    assert_eq!(bdlab(&["hk", "--k", "1", "--N", "64"]).status.code(), Some(2));
    assert_eq!(bdlab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bdlab(&["verify", "--N", "64"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_four() {
    let o = bdlab(&["hk", "--k", "2", "--N", "64", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "distance".to_string(),
            "--K".into(),
            "2,4,8".into(),
            "--N".into(),
            "4096".into(),
            "--threads".into(),
            "2".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    for p in [&a, &b] {
        let v = args(p);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert!(bdlab(&refs).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn pdcp_samples_are_odd() {
    let o = bdlab(&["pdcp", "--grid", "8", "--N", "1000"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let vals: Vec<f64> =
        text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 8);
    for i in 0..4 {
        assert!((vals[i] + vals[7 - i]).abs() < 1e-12);
    }
}
