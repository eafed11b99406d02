use std::process::{Command, Output};

fn quasimap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasimap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn local_mirror_series() {
    let o = quasimap(&["series", "--geometry", "local-p1p1", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "L: 1, 4, 40, 480"));
}

#[test]
fn hypersurface_series_csv() {
    let o = quasimap(&["series", "--geometry", "hypersurface", "--m", "2", "--n", "3", "--order", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "I0").unwrap();
    let i0: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap()).collect();
    assert_eq!(i0, ["1", "2", "6"]);
}

#[test]
fn order_zero_keeps_constant_terms() {
    let o = quasimap(&["series", "--order", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for (name, coeffs) in v.as_object().unwrap() {
        let c = coeffs.as_array().unwrap();
        assert_eq!(c.len(), 1, "{name}");
    }
    assert_eq!(v["L"][0], "1");
    assert_eq!(v["I1"][0], "0");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(quasimap(&["series", "--geometry", "p5"]).status.code(), Some(2));
    assert_eq!(quasimap(&["series", "--regulator", "1,1"]).status.code(), Some(2));
    assert_eq!(quasimap(&["series", "--regulator", "1,x"]).status.code(), Some(2));
    assert_eq!(quasimap(&["verify", "pf", "--order", "0"]).status.code(), Some(2));
    assert_eq!(quasimap(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn pf_suite_passes() {
    let o = quasimap(&["verify", "pf", "--geometry", "twisted-p3", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result: pass\n"));
}

#[test]
fn genus_one_records_offset() {
    let o = quasimap(&["verify", "genus1", "--m", "2", "--n", "4", "--order", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["note"].as_str().is_some_and(|n| n.starts_with("constant offset"))));
}

#[test]
fn anomaly_without_table_is_missing_data() {
    let o = quasimap(&["verify", "anomaly", "--order", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hodge-table"));
    let missing = quasimap(&["verify", "anomaly", "--hodge-table", "/nonexistent/hodge.txt"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn export_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = || {
        let o = quasimap(&["export", "--geometry", "local-p1p1", "--order", "2", "--out", out]);
        assert_eq!(o.status.code(), Some(0));
        (std::fs::read(dir.path().join("local-p1p1.json")).unwrap(), std::fs::read(dir.path().join("local-p1p1.csv")).unwrap())
    };
    let (json, csv) = run();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v["A2"][0], "1/4");
    assert_eq!(String::from_utf8(csv.clone()).unwrap().lines().count(), 1 + 3);
    assert_eq!(run(), (json, csv));
}

#[test]
fn unwritable_export_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "").unwrap();
    let o = quasimap(&["export", "--order", "1", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}
