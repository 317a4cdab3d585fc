use std::process::{Command, Output};

fn relay_sweep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relay-sweep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let at = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(at).unwrap().parse().unwrap()).collect()
}

fn statuses(csv: &str) -> Vec<String> {
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let at = header.iter().position(|h| *h == "status").unwrap();
    csv.lines().skip(1).map(|l| l.split(',').nth(at).unwrap().to_string()).collect()
}

fn value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from report"))
        .to_string()
}

#[test]
fn eval_report_has_every_quantity() {
    let o = relay_sweep(&["eval", "--mode", "full", "--d", "0.5", "--power", "1"]);
    assert!(o.status.success());
    let r = stdout(&o);
    for key in ["cf_rate", "ts_rate", "cutset", "ebn0_lower", "ebn0_upper", "ebn0_traditional"] {
        value(&r, key).parse::<f64>().unwrap();
    }
    let cf: f64 = value(&r, "cf_rate").parse().unwrap();
    let ts: f64 = value(&r, "ts_rate").parse().unwrap();
    let cut: f64 = value(&r, "cutset").parse().unwrap();
    assert!(cf <= ts && ts <= cut);
}

#[test]
fn eval_half_reports_lower_branch() {
    let o = relay_sweep(&["eval", "--mode", "half", "--d", "0.25", "--lambda", "0.5"]);
    assert!(o.status.success());
    let branch = value(&stdout(&o), "ebn0_lower_branch");
    let known = [
        "small-lambda-closed-form",
        "small-lambda-boundary",
        "large-lambda-b2",
        "large-lambda-b2star-vs-b3star",
        "large-lambda-b2-clamped",
        "large-lambda-b3star",
    ];
    assert!(known.contains(&branch.as_str()), "{branch}");
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["eval", "--d", "1.2"],
        vec!["eval", "--d", "0.1:0.5:3"],
        vec!["rate-sweep", "--beta", "2"],
        vec!["rate-sweep", "--mode", "triple"],
        vec!["rate-sweep", "--power", "1:0.1:4"],
        vec!["rate-sweep", "--unknown-flag"],
    ] {
        let o = relay_sweep(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = relay_sweep(&["eval", "--d", "1.2"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("invalid d"), "{err}");
}

#[test]
fn full_rate_sweep_shape_and_asymptote() {
    let o = relay_sweep(&["rate-sweep", "--mode", "full", "--d", "0.5"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
    assert_eq!(csv.lines().next().unwrap(), "d,P,R_cf,R_ts,alpha_opt,relative_improvement,status");
    assert_eq!(csv.lines().count(), 61);
    let p = column(&csv, "P");
    assert_eq!((p[0], p[59]), (1e-4, 10.0));
    let rel = column(&csv, "relative_improvement");
    assert!((rel[0] - 0.75).abs() <= 0.05, "{}", rel[0]);
    assert!(rel[59].abs() < 1e-6);
    assert!(statuses(&csv).iter().all(|s| s == "ok"));
}

#[test]
fn full_duplex_improvement_is_symmetric_in_distance() {
    let a = stdout(&relay_sweep(&["rate-sweep", "--d", "0.25", "--power", "1e-4:1:12"]));
    let b = stdout(&relay_sweep(&["rate-sweep", "--d", "0.75", "--power", "1e-4:1:12"]));
    for (x, y) in column(&a, "relative_improvement").iter().zip(column(&b, "relative_improvement")) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn half_rate_sweep_low_power_gain() {
    let o = relay_sweep(&["rate-sweep", "--mode", "half", "--d", "0.75", "--power", "1e-4:1e-2:3"]);
    assert!(o.status.success());
    let rel = column(&stdout(&o), "relative_improvement");
    assert!((rel[0] - 0.49).abs() <= 0.07, "{}", rel[0]);
}

#[test]
fn ebn0_sweeps_tighten_where_expected() {
    let csv = stdout(&relay_sweep(&["ebn0-sweep", "--mode", "full", "--d", "0.6:0.99:6"]));
    let up = column(&csv, "upper_ts");
    let trad = column(&csv, "upper_traditional");
    let low = column(&csv, "lower");
    for i in 0..up.len() {
        assert!(up[i] < trad[i] && low[i] <= up[i]);
    }

    let csv = stdout(&relay_sweep(&["ebn0-sweep", "--mode", "half", "--d", "0.5:0.85:2"]));
    let up = column(&csv, "upper_ts");
    let trad = column(&csv, "upper_traditional");
    assert!((up[0] / trad[0] - 1.0).abs() < 1e-9);
    assert!(up[1] < trad[1] * (1.0 - 1e-3));
    assert!(statuses(&csv).iter().all(|s| s == "ok"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    std::fs::write(&cfg, "# settings\nmode = half\nd = 0.3\npower = 0.01\n").unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = stdout(&relay_sweep(&["eval", "--config", path]));
    assert_eq!(value(&from_file, "mode"), "half");
    assert_eq!(value(&from_file, "d"), "0.3");
    let overridden = stdout(&relay_sweep(&["eval", "--config", path, "--mode", "full"]));
    assert_eq!(value(&overridden, "mode"), "full");
    assert_eq!(value(&overridden, "P"), "0.01");

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(relay_sweep(&["eval", "--config", path]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = relay_sweep(&["ebn0-sweep", "--d", "0.2:0.8:3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "d,lower,upper_ts,upper_traditional,status");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn strict_mode_flags_non_convergence() {
    let args = ["rate-sweep", "--d", "0.5", "--power", "0.01", "--tol", "1e-300"];
    let o = relay_sweep(&args);
    assert!(o.status.success());
    assert!(statuses(&stdout(&o)).iter().all(|s| s == "unconverged"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(relay_sweep(&strict).status.code(), Some(3));
    let o = relay_sweep(&["rate-sweep", "--d", "0.5", "--power", "0.01", "--strict"]);
    assert!(o.status.success());
}

#[test]
fn oracle_columns() {
    let o = relay_sweep(&["rate-sweep", "--mode", "half", "--d", "0.6", "--power", "1e-3:1:3", "--oracle"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.lines().next().unwrap().ends_with(",oracle_R_ts,oracle_alpha"));
    assert!(statuses(&csv).iter().all(|s| s == "ok"), "{csv}");

    let o = relay_sweep(&[
        "ebn0-sweep", "--mode", "half", "--d", "0.3:0.8:2", "--oracle", "--oracle-grid", "60",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let ours = column(&csv, "upper_ts");
    let grid = column(&csv, "oracle_upper");
    assert!(ours.iter().zip(&grid).all(|(a, b)| a <= b));
    assert!(statuses(&csv).iter().all(|s| s == "ok"), "{csv}");
}
