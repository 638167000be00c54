use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwbound"))
        .args(args)
        .env("GWBOUND_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_small_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--r-max", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let ledger = fs::read_to_string(dir.path().join("verify_ledger.jsonl")).unwrap();
    let mut lines = ledger.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["config"]["command"]["verify"]["r_max"], 2);
    assert!(header["config"]["version"].is_string());
    let mut n = 0;
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["id", "r", "k", "n", "status"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
        assert_ne!(v["status"], "fail");
        n += 1;
    }
    assert!(n > 10);
}

#[test]
fn verify_rejects_r_max_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["verify", "--r-max", "1"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["scan", "--r", "2", "--zeta", "1.5"][..],
        &["scan", "--r", "2", "--zeta", "0.5", "--mode", "exact"],
        &["scan", "--r", "1", "--zeta", "1/2"],
        &["scan", "--r", "2"],
        &["extinct", "--r", "2", "--zeta", "3/2"],
        &["iterate", "--r", "2", "--zeta", "1/2", "--n", "0"],
        &["simulate", "--r", "2", "--zeta", "0.5", "--reps", "0"],
        &["simulate", "--r", "2", "--zeta", "0.5", "--cap", "10000000000000"],
        &["frobnicate"],
    ] {
        assert_eq!(run(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exact_scan_reports_both_equality_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["scan", "--r", "2", "--zeta", "1/2", "--grid", "1000", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality at: 1/4, 1"));
    let csv = fs::read_to_string(dir.path().join("scan_r2_z1-2.csv")).unwrap();
    let mut data = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(data.next(), Some("x,phi_nb,phi_fl,gap"));
    assert_eq!(data.count(), 1001);
    assert!(csv.starts_with("# config: {"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("scan_r2_z1-2.json")).unwrap()).unwrap();
    assert_eq!(json["result"]["equality_points"].as_array().unwrap().len(), 2);
}

#[test]
fn float_scan_large_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["scan", "--r", "12", "--zeta", "0.95", "--grid", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations: 0"));
}

#[test]
fn extinct_prints_zeta_power() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["extinct", "--r", "3", "--zeta", "0.9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0.729000000000"));
}

#[test]
fn iterate_writes_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["iterate", "--r", "2", "--zeta", "1/2", "--n", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("identical"));
    let csv = fs::read_to_string(dir.path().join("iterate_r2_z1-2.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,fl_at_0,nb_at_0,limit");
    assert_eq!(rows.len(), 51);
    let first: Vec<f64> = rows[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!((first[1] - 2.0 / 11.0).abs() < 1e-15);
    assert!((first[2] - 9.0 / 49.0).abs() < 1e-15);
    assert_eq!(first[3], 0.25);
}

#[test]
fn simulate_is_byte_identical_without_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["simulate", "--r", "2", "--zeta", "0.5", "--reps", "20000", "--seed", "42"];
    let oa = run(a.path(), &args);
    let ob = run(b.path(), &args);
    assert_eq!(oa.status.code(), Some(0), "{}", stdout(&oa));
    assert_eq!(ob.status.code(), Some(0));
    for name in ["simulate_r2_z0.5.json", "simulate_r2_z0.5.csv"] {
        let fa = fs::read(a.path().join(name)).unwrap();
        let fb = fs::read(b.path().join(name)).unwrap();
        assert_eq!(fa, fb, "{name}");
    }
    let csv = fs::read_to_string(a.path().join("simulate_r2_z0.5.csv")).unwrap();
    assert!(csv
        .lines()
        .any(|l| l == "generation,alive_fraction,cum_extinct_fraction"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("simulate_r2_z0.5.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 42);
    assert_eq!(json["result"]["report"]["seed"], 42);
}

#[test]
fn timestamp_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["extinct", "--r", "2", "--zeta", "1/2"]);
    let plain = fs::read_to_string(dir.path().join("extinct_r2_z1-2.json")).unwrap();
    assert!(!plain.contains("timestamp"));
    run(dir.path(), &["--timestamp", "extinct", "--r", "2", "--zeta", "1/2"]);
    let stamped = fs::read_to_string(dir.path().join("extinct_r2_z1-2.json")).unwrap();
    assert!(stamped.contains("\"timestamp\""));
}

#[test]
fn out_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = run(
        env_dir.path(),
        &["--out", flag_dir.path().to_str().unwrap(), "extinct", "--r", "2", "--zeta", "0.5"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.path().join("extinct_r2_z0.5.json").exists());
    assert!(!env_dir.path().join("extinct_r2_z0.5.json").exists());
}
