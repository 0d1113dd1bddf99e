use fundgap::cli::{BoundRow, EigenRow};
use serde_json::Value;
use std::process::{Command, Output};

fn fundgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fundgap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn eigen_n3_gap_is_three() {
    let o = fundgap(&["eigen", "--n", "3", "--K", "0.5", "--D", "3.14159265358979", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let gap: f64 = rows[0][5].parse().unwrap();
    assert!((gap - 3.0).abs() < 1e-8);
}

#[test]
fn eigen_dichotomy_flags() {
    let o = fundgap(&["eigen", "--n", "2,5", "--K", "1", "--D", "1"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][7], "below");
    assert_eq!(rows[1][7], "above");
    assert!(rows[0][6].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn eigen_json_round_trips_and_keeps_order() {
    let o = fundgap(&["eigen", "--n", "4,2", "--K", "0:0.5:3", "--D", "1", "--format", "json", "--jobs", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let rows: Vec<EigenRow> = serde_json::from_value(v["rows"].clone()).unwrap();
    let keys: Vec<(u32, f64)> = rows.iter().map(|r| (r.n, r.k)).collect();
    assert_eq!(keys, vec![(4, 0.0), (4, 0.25), (4, 0.5), (2, 0.0), (2, 0.25), (2, 0.5)]);
    let again: Vec<EigenRow> = serde_json::from_str(&serde_json::to_string(&rows).unwrap()).unwrap();
    assert_eq!(again, rows);
}

#[test]
fn output_is_deterministic() {
    let args = ["eigen", "--n", "2,3,5", "--K", "0.2,0.7", "--D", "1,2", "--jobs", "4"];
    assert_eq!(fundgap(&args).stdout, fundgap(&args).stdout);
    let s = ["series", "--order", "4"];
    assert_eq!(fundgap(&s).stdout, fundgap(&s).stdout);
}

#[test]
fn invalid_triples_exit_2_before_solving() {
    let o = fundgap(&["eigen", "--n", "3", "--K", "1,5", "--D", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("K=5"));
    assert!(o.stdout.is_empty());
    assert_eq!(fundgap(&["eigen", "--n", "0"]).status.code(), Some(2));
    assert_eq!(fundgap(&["eigen", "--bogus"]).status.code(), Some(2));
}

#[test]
fn series_low_orders_check() {
    let o = fundgap(&["series", "--order", "3", "--check-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in v["check_paper"]["orders"].as_array().unwrap() {
        for b in ["first", "second", "gap"] {
            assert_eq!(row[b], true, "{row}");
        }
    }
}

#[test]
fn series_order_zero() {
    let v: Value = serde_json::from_str(&stdout(&fundgap(&["series", "--order", "0"]))).unwrap();
    assert_eq!(v["first"][0]["coefficient_at_D_pi"]["in_u_decimal"][0], 1.0);
    assert_eq!(v["second"][0]["coefficient_at_D_pi"]["in_u_decimal"][0], 4.0);
}

#[test]
fn series_order_five_gap_factors() {
    let o = fundgap(&["series", "--order", "5", "--branch", "gap", "--check-paper"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("first").is_none());
    let f = &v["gap"][5]["factors"];
    // the printed factors are -0.522 and 0.2429; both inherit slips in the second branch
    assert!((f["u_over_24_squared"].as_f64().unwrap() + 0.28364).abs() < 1e-5);
    assert!((f["u_over_2pi"].as_f64().unwrap() - 0.25290).abs() < 1e-5);
    let c = &v["check_paper"];
    assert_eq!(c["orders"][4]["first"], true);
    assert_eq!(c["orders"][4]["gap"], false);
    for k in ["y12_y13", "dy12_dy13", "y22_y23", "dy22_dy23"] {
        assert_eq!(c["order5_inner_products"][k]["match"], true);
    }
}

#[test]
fn series_order_cap() {
    assert_eq!(fundgap(&["series", "--order", "9"]).status.code(), Some(2));
}

#[test]
fn pruefer_large_k_has_small_ck() {
    let o = fundgap(&["pruefer", "--k", "1e6", "--n", "2", "--K", "0.1", "--D", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["c_k"].as_f64().unwrap().abs() < 1e-4);
}

#[test]
fn pruefer_euclidean_oracle() {
    let d = 2.5f64;
    let o = fundgap(&["pruefer", "--k", "10", "--K", "0", "--D", "2.5"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ck = v["c_k"].as_f64().unwrap();
    // K = 0: ψ = -μ tan(μz) with μ² = π²/D² + c and μ tan(μ D/2) = k
    let mu = (ck + (std::f64::consts::PI / d).powi(2)).sqrt();
    assert!((mu * (mu * d / 2.0).tan() - 10.0).abs() < 1e-8);
}

#[test]
fn pruefer_bracket_failure_exits_4() {
    let o = fundgap(&["pruefer", "--k", "0.001", "--lower-factor", "-0.5", "--max-doublings", "0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("hint"));
    assert_eq!(fundgap(&["pruefer", "--k", "0.001"]).status.code(), Some(0));
}

#[test]
fn pruefer_csv_with_supersolution() {
    let o = fundgap(&["pruefer", "--k", "5", "--K", "0.3", "--s", "10", "--format", "csv", "--intervals", "16"]);
    let t = stdout(&o);
    assert!(t.lines().nth(1).unwrap().ends_with(",supersolution"));
    assert_eq!(t.lines().count(), 2 + 17);
}

#[test]
fn flow_stationary_single_row_and_monotone_run() {
    let o = fundgap(&["flow", "--k", "10", "--K", "0.5", "--start", "stationary"]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 1);
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("snap.json");
    let o = fundgap(&["flow", "--k", "10", "--K", "0.5", "--cells", "256", "--emit-plot", plot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let d: Vec<f64> = csv_rows(&stdout(&o)).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    assert!(*d.last().unwrap() <= 1e-6);
    let snaps: Value = serde_json::from_str(&std::fs::read_to_string(plot).unwrap()).unwrap();
    assert!(snaps["snapshots"].as_array().unwrap().len() >= 2);
}

#[test]
fn flow_unreachable_tolerance_exits_3() {
    let o = fundgap(&["flow", "--k", "10", "--K", "0.5", "--cells", "64", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_rows_hold_and_round_trip() {
    let o = fundgap(&["bounds", "--n", "2,3,4,5,8", "--K", "0.1,0.9", "--D", "1,2.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<BoundRow> = serde_json::from_value(v["rows"].clone()).unwrap();
    assert_eq!(rows.len(), 5 * 2 * 2 * 2);
    assert!(rows.iter().all(|r| r.holds));
    assert!(rows.iter().filter(|r| r.n == 2).all(|r| r.upper_explicit.is_some() && r.lower.is_none()));
    let back: Vec<BoundRow> = serde_json::from_str(&serde_json::to_string(&rows).unwrap()).unwrap();
    assert_eq!(back, rows);
    assert_eq!(fundgap(&["bounds", "--n", "3", "--K", "0"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.csv");
    let o = fundgap(&["eigen", "--n", "3", "--K", "0.1", "--output", p.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(p).unwrap().starts_with("n,K,D"));
}

#[test]
fn negative_curvatures_parse() {
    let o = fundgap(&["eigen", "--n", "3", "--K", "-1:1:3", "--D", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = fundgap(&["pruefer", "--k", "5", "--K", "-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("hypothesis"));
    let o = fundgap(&["bounds", "--K", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}
