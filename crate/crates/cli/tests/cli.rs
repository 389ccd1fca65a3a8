use std::process::{Command, Output};

fn secres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secres"))
        .args(args)
        .env_remove("SECRES_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_of(csv: &str, name: &str) -> String {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{name},")))
        .and_then(|rest| rest.split(',').next())
        .unwrap_or_else(|| panic!("no `{name}` row"))
        .to_string()
}

#[test]
fn alpha_line_reads_nominal_ratio() {
    let o = secres(&["constants"]);
    assert!(o.status.success());
    assert!(value_of(&stdout(&o), "alpha").starts_with("0.077003"));
}

#[test]
fn config_file_overrides_j2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("consts.cfg");
    std::fs::write(&path, "# stronger oblateness\nJ2 = 2.0e-3\n").unwrap();
    let o = secres(&["--config", path.to_str().unwrap(), "constants"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value_of(&out, "J2"), "0.002");
    assert!(!out.contains("config_sha256: e3b0c442"), "hash of an empty config");
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("consts.cfg");
    std::fs::write(&path, "e_M = 0.0054\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_secres"))
        .arg("constants")
        .env("SECRES_CONFIG", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(value_of(&stdout(&o), "e_M"), "0.0054");
}

#[test]
fn unknown_config_key_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "J3 = 1\n").unwrap();
    let o = secres(&["--config", path.to_str().unwrap(), "constants"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("J3"));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_config_file_exits_with_config_status() {
    let o = secres(&["--config", "/nonexistent/secres.cfg", "constants"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inverted_grid_is_rejected() {
    let o = secres(&["periodic", "--emin", "1e-6", "--emax", "1e-7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_point_periodic_grid() {
    let o = secres(&["periodic", "--emin", "3e-7", "--emax", "3e-7", "--n", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("E,J,Gam0,T0"));
    assert!(rows[1].starts_with("3e-7,") && rows[1].ends_with(",ok"));
}

#[test]
fn periodic_period_is_monotone_and_flags_resonance() {
    let o = secres(&["periodic", "--n", "12"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("E,"))
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 13);
    let t0: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(t0.windows(2).all(|w| w[1] > w[0]));
    let flagged: Vec<_> = rows.iter().filter(|r| r[9] == "1").collect();
    assert_eq!(flagged.len(), 1);
    let n_t0: f64 = flagged[0][5].parse().unwrap();
    assert!((n_t0 - 4.0).abs() < 1e-9);
}

#[test]
fn every_table_cites_its_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = secres(&["--out", dir.path().to_str().unwrap(), "constants"]);
    assert!(o.status.success());
    for name in ["constants_constants.csv", "constants_giacaglia.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        for key in ["# secres ", "# command: ", "# config_sha256: ", "# grid: ", "# outputs: "] {
            assert!(text.contains(key), "{name} lacks {key}");
        }
        assert!(text.contains(name));
    }
}

#[test]
fn json_mirror_carries_tables() {
    let o = secres(&["--json", "constants"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let alpha = v["tables"]["constants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "alpha")
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((alpha - 29_600.0 / 384_400.0).abs() < 1e-15);
    assert!(v["manifest"]["wall_time_s"].is_number());
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["--threads", "3", "periodic", "--n", "9"];
    let a = secres(&args);
    let b = secres(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn manifolds_depth_zero_is_the_fixed_point() {
    let o = secres(&["manifolds", "--e", "3e-7", "--depth", "0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let poly: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.starts_with("E,branch"))
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(poly.len(), 1);
    assert!(poly[0].contains(",fixed,"));
}

#[test]
fn zero_inclination_gives_zero_drift() {
    let o = secres(&["diffuse", "--im", "0", "--tables-n", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(value_of(&out, "steps"), "0");
    assert_eq!(value_of(&out, "E_start"), value_of(&out, "E_end"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let o = secres(&["orbit"]);
    assert_eq!(o.status.code(), Some(2));
}
