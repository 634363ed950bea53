use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_creditcurve")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn universe_args() -> Vec<String> {
    ["riskfree", "bonds", "cds", "sovereign", "config"]
        .iter()
        .zip(["riskfree.csv", "bonds.csv", "cds.csv", "sovereign.csv", "config.toml"])
        .flat_map(|(flag, file)| [format!("--{flag}"), path(&data(&format!("universe/{file}"))).to_string()])
        .collect()
}

#[test]
fn fit_grid_writes_outputs_and_recovers_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["fit-grid".into()];
    args.extend(universe_args());
    args.extend(["--out".into(), path(dir.path()).into()]);
    let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(o.status.success(), "{}", stderr(&o));
    let params = std::fs::read_to_string(dir.path().join("fit_params.csv")).unwrap();
    let alpha: f64 = params.lines().find_map(|l| l.strip_prefix("grid,alpha,")).unwrap().parse().unwrap();
    assert!((alpha - 0.45).abs() < 0.1, "{alpha}");
    let report = std::fs::read_to_string(dir.path().join("fit_report.csv")).unwrap();
    assert_eq!(report.lines().count(), 1 + 40 + 6);
    assert!(report.lines().skip(1).all(|l| ["fair", "cheap", "rich"].iter().any(|f| l.ends_with(f))));
}

#[test]
fn analytics_with_transitions_adds_expected_return() {
    let dir = tempfile::tempdir().unwrap();
    let mut fit: Vec<String> = vec!["fit-grid".into()];
    fit.extend(universe_args());
    fit.extend(["--out".into(), path(dir.path()).into()]);
    assert!(run(&fit.iter().map(String::as_str).collect::<Vec<_>>()).status.success());

    let mut args: Vec<String> = vec!["analytics".into()];
    args.extend(universe_args());
    let curve = dir.path().join("fit_result.json");
    let transitions = data("universe/transitions.csv");
    args.extend(["--curve".into(), path(&curve).into(), "--transitions".into(), path(&transitions).into()]);
    let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
    let total = header.iter().position(|h| *h == "total_pts").unwrap();
    let parts: Vec<usize> =
        ["carry_pts", "rolldown_pts", "rv_pts"].iter().map(|c| header.iter().position(|h| h == c).unwrap()).collect();
    assert!(header.contains(&"expected_pts"));
    for line in out.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect();
        let sum: f64 = parts.iter().map(|&i| v[i]).sum();
        assert!((sum - v[total]).abs() < 2e-6, "{line}");
    }
}

#[test]
fn colom_spreads_and_single_name_fit() {
    let rf = data("colom/riskfree.csv");
    let bonds = data("colom/bonds.csv");
    let o = run(&["spread", "--riskfree", path(&rf), "--bonds", path(&bonds)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let low = out.lines().find(|l| l.starts_with("COLOM4")).unwrap();
    let high = out.lines().find(|l| l.starts_with("COLOM8")).unwrap();
    let z = |l: &str| l.split(',').nth(8).unwrap().parse::<f64>().unwrap();
    assert!(z(high) > z(low) + 50.0);

    let o =
        run(&["fit", "--riskfree", path(&rf), "--bonds", path(&bonds), "--recovery", "fixed:0.4", "--fix-c", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("COLOM4") && l.ends_with("rich")));
    assert!(out.lines().any(|l| l.starts_with("COLOM8") && l.ends_with("cheap")));
}

#[test]
fn history_emits_every_date() {
    let o = run(&[
        "history",
        "--riskfree",
        path(&data("history/riskfree.csv")),
        "--bonds",
        path(&data("history/bonds.csv")),
        "--sovereign",
        path(&data("history/sovereign.csv")),
        "--em-alpha",
        "fit",
        "--tenors",
        "5,10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("date,series,value"));
    for d in ["2024-03-28", "2024-06-28", "2024-09-30"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("{d},param.grid.alpha,"))), "{d}");
        assert!(out.lines().any(|l| l.starts_with(&format!("{d},model_spread_bp.5y.BBB,"))), "{d}");
    }
}

#[test]
fn bad_row_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let bonds = dir.path().join("bonds.csv");
    std::fs::write(&bonds, "id,issuer,coupon_pct,tenor_years,price\nA,X,5,5,101\nB,X,5,7,abc\n").unwrap();
    let o = run(&["fit", "--riskfree", path(&data("colom/riskfree.csv")), "--bonds", path(&bonds)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bonds.csv:3:") && err.contains("price"), "{err}");
}

#[test]
fn single_bond_grid_is_underdetermined() {
    let dir = tempfile::tempdir().unwrap();
    let bonds = dir.path().join("bonds.csv");
    std::fs::write(&bonds, "id,issuer,coupon_pct,tenor_years,price,rating\nA,X,5,5,101,BBB\n").unwrap();
    let rf = data("universe/riskfree.csv");
    let o = run(&["fit-grid", "--riskfree", path(&rf), "--bonds", path(&bonds)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("underdetermined"), "{}", stderr(&o));
    let o = run(&["fit-grid", "--riskfree", path(&rf), "--bonds", path(&bonds), "--allow-underdetermined"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn value_needs_a_curve_and_config_rejects_unknown_keys() {
    let rf = data("universe/riskfree.csv");
    let bonds = data("universe/bonds.csv");
    let o = run(&["value", "--riskfree", path(&rf), "--bonds", path(&bonds)]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "recovery = \"schedule\"\nrecovry_floor = 0.1\n").unwrap();
    let o = run(&["fit-grid", "--riskfree", path(&rf), "--bonds", path(&bonds), "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("recovry_floor"), "{}", stderr(&o));

    let curve = dir.path().join("curve.toml");
    std::fs::write(&curve, "a = 0.01\nb = 0.03\nc = 0.1\n").unwrap();
    let o = run(&["value", "--riskfree", path(&rf), "--bonds", path(&bonds), "--curve", path(&curve)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 41);
}
