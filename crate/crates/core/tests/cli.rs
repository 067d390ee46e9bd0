use std::process::{Command, Output};

fn paircorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paircorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zeros_compute_reports_count() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("z.txt");
    let o = paircorr(&["zeros", "--compute", "10", "--export", export.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# schema paircorr-zeros v1\n"));
    assert!(s.lines().nth(2).unwrap().starts_with("computed,"));
    let written = std::fs::read_to_string(&export).unwrap();
    assert_eq!(written.lines().filter(|l| !l.starts_with('#')).count(), 10);

    // the exported file loads back
    let o = paircorr(&["zeros", "--zeros", export.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["count"], 10);
}

#[test]
fn missing_file_exits_two() {
    let o = paircorr(&["fh", "--zeros", "/no/such/file", "--x", "2", "--h", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fh_rows_are_symmetric_and_reproducible() {
    let args = ["fh", "--compute", "300", "--alpha", "0.5", "--h=-2,0,2"];
    let a = paircorr(&args);
    let b = paircorr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("# schema paircorr-fh v1"));
    assert_eq!(
        lines.next(),
        Some("h,x,T,empirical_value,pairs_used,truncation_bound,theorem_id,prediction,rel_dev,error_envelope")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1..], rows[2][1..]);
    assert_eq!(rows[1][6], "T1");
}

#[test]
fn fh_at_x_one_is_nonnegative() {
    let o = paircorr(&["fh", "--compute", "200", "--x", "1", "--h", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v[0]["empirical_value"].as_f64().unwrap() >= 0.0);
    assert_eq!(v[0]["theorem_id"], "T1");
}

#[test]
fn fh_beyond_all_ranges_leaves_prediction_empty() {
    let o = paircorr(&["fh", "--compute", "100", "--alpha", "2.5", "--h", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(2).unwrap().to_string();
    assert!(row.ends_with(",,,,"), "{row}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn spacing_emits_one_row_per_bin() {
    let o = paircorr(&["spacing", "--compute", "500", "--h", "0,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2 + 16);
}

#[test]
fn verify_single_check_and_forced_failure() {
    let ok = paircorr(&["verify", "--check", "sine_power_integral", "--k-cap", "1000"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("sine_power_integral,true,6,"));

    let forced = paircorr(&["verify", "--check", "sine_power_integral", "--k-cap", "1000", "--tolerance", "0"]);
    assert_eq!(forced.status.code(), Some(1));

    let bad = paircorr(&["verify", "--check", "no_such_check"]);
    assert_eq!(bad.status.code(), Some(2));
}
