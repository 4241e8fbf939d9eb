use std::process::{Command, Output};

fn grig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grig")).args(args).env_remove("GRIG_MAX_LEVEL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn element_queries() {
    let o = grig(&["reduce", "bcd"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "\n");
    assert_eq!(stdout(&grig(&["reduce", "abba"])), "\n");
    assert_eq!(stdout(&grig(&["reduce", "acab"])), "acab\n");
    assert_eq!(stdout(&grig(&["equal", "abab", "baba"])), "false\n");
    assert_eq!(stdout(&grig(&["equal", "bc", "d"])), "true\n");
    assert_eq!(stdout(&grig(&["act", "a", "0"])), "1\n");
    assert_eq!(stdout(&grig(&["act", "abab", "00"])), "01\n");
    let s: serde_json::Value = serde_json::from_str(&stdout(&grig(&["sections", "b"]))).unwrap();
    assert_eq!(s["swap"], false);
    assert_eq!(s["left"], "a");
    assert_eq!(s["right"], "c");
    assert_eq!(stdout(&grig(&["sections", "u", "--vertex", "0"])), "abab\n");
    let p: serde_json::Value = serde_json::from_str(&stdout(&grig(&["portrait", "a", "--depth", "1"]))).unwrap();
    assert_eq!(p["activity"][0], "1");
}

#[test]
fn quotient_orders_are_exact() {
    assert_eq!(stdout(&grig(&["quotient", "--level", "8", "--order"])), format!("{}\n", num_bigint::BigUint::from(1u8) << 162usize));
    let table = stdout(&grig(&["quotient", "--level", "4", "--table"]));
    assert!(table.contains("\n3,128,7,7\n"));
    let text = stdout(&grig(&["quotient", "--level", "2"]));
    assert!(text.starts_with("level 2\n"));
}

#[test]
fn rank_and_tables() {
    let w: serde_json::Value = serde_json::from_str(&stdout(&grig(&["rank", "--subgroup", "P", "--n", "2"]))).unwrap();
    assert_eq!(w["lower_bound"], 6);
    assert_eq!(w["certified"], true);
    let a = grig(&["rg-table", "--chain", "P", "--max", "6", "--format", "csv"]);
    assert!(a.status.success());
    let csv = stdout(&a);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for r in &rows[1..] {
        let n: u32 = r[0].parse().unwrap();
        let (num, den): (u64, u64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        // (n+3)/2^n in lowest terms
        assert_eq!(num * (1u64 << n), (n as u64 + 3) * den, "row {n}");
    }
    assert_eq!(csv, stdout(&grig(&["rg-table", "--chain", "P", "--max", "6", "--format", "csv"])));
    let md = stdout(&grig(&["rg-table", "--chain", "st", "--max", "3", "--budget", "6", "--format", "md"]));
    assert!(md.starts_with("| n | d |"));
    let r: serde_json::Value = serde_json::from_str(&stdout(&grig(&["rigidity-report", "--max", "8"]))).unwrap();
    assert!(r["d_min"].as_f64().unwrap() <= 4.0);
    assert_eq!(r["excluded_rows"], serde_json::json!([1]));
    assert_eq!(r["all_rows_certified"], false);
}

#[test]
fn probe_is_reproducible() {
    let args = ["probe", "--level", "4", "--samples", "6", "--seed", "9"];
    let a = stdout(&grig(&args));
    assert_eq!(a, stdout(&grig(&args)));
    let rows: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert_eq!(grig(&["probe", "--level", "8"]).status.code(), Some(2));
}

#[test]
fn verification_exit_codes() {
    for suite in ["conjugation", "branching", "orders", "nilpotent-bound"] {
        let o = grig(&["verify", suite, "--max-m", "8", "--level", "6"]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
    }
    let o = grig(&["verify", "sandwich"]);
    assert_eq!(o.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["skipped"].as_array().unwrap().len(), 1);
    // the stated ranks of Q3 and the stabilizer lists fail
    let o = grig(&["verify", "all", "--max-m", "8", "--level", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = s["failures"].as_array().unwrap().iter().map(|f| f["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["d(Q3)=7", "<P2 list>=st(1^2)", "<P3 list>=st(1^3)", "<P4 list>=st(1^4)", "<P5 list>=st(1^5)"]);
}

#[test]
fn usage_errors() {
    assert_eq!(grig(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(grig(&["reduce", "abz"]).status.code(), Some(2));
    assert_eq!(grig(&["rank", "--subgroup", "st", "--n", "2"]).status.code(), Some(2));
    assert_eq!(grig(&["quotient", "--level", "12", "--order"]).status.code(), Some(2));
    assert_eq!(grig(&["verify", "all", "--bogus"]).status.code(), Some(2));
}

#[test]
fn level_guard_from_config_and_environment() {
    let dir = std::env::temp_dir().join(format!("grig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grig.conf");
    std::fs::write(&path, "# guard\nmax_level = 3\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(grig(&["--config", p, "quotient", "--level", "4", "--order"]).status.code(), Some(2));
    assert_eq!(stdout(&grig(&["--config", p, "quotient", "--level", "3", "--order"])), "128\n");
    let o = Command::new(env!("CARGO_BIN_EXE_grig")).args(["quotient", "--level", "11", "--order"]).env("GRIG_MAX_LEVEL", "11").output().unwrap();
    assert!(o.status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}
