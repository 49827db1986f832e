use std::path::Path;
use std::process::{Command, Output};

use normk::report::{ScanDocument, ScanRow, SCAN_COLUMNS};
use serde_json::Value;

fn normk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normk")).args(args).output().expect("spawn normk")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classgroup_reports() {
    let out = normk(&["classgroup", "--disc", "-23"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["h"], "3");
    assert_eq!(v["divisors"], serde_json::json!(["3"]));

    let out = normk(&["classgroup", "--disc", "12", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!((v["h"].as_str(), v["h_narrow"].as_str()), (Some("1"), Some("2")));
    assert_eq!(v["units"]["eps_norm"], "1");
    assert_eq!((v["units"]["eps"]["x"].as_str(), v["units"]["eps"]["y"].as_str()), (Some("4"), Some("1")));
}

#[test]
fn classgroup_csv_matches_json() {
    let j = json(&normk(&["classgroup", "--disc", "-420", "--json"]));
    let out = normk(&["classgroup", "--disc", "-420", "--csv"]);
    assert_eq!(code(&out), 0);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().clone();
    let row = r.records().next().unwrap().unwrap();
    let get = |k: &str| row.get(header.iter().position(|h| h == k).unwrap()).unwrap().to_string();
    for k in ["delta", "h", "h_narrow", "rank2"] {
        assert_eq!(get(k), j[k].as_str().unwrap(), "{k}");
    }
    assert_eq!(get("divisors"), "2;2;2");
    assert_eq!(get("eps_x"), "");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["classgroup", "--disc", "45"][..],
        &["classgroup", "--disc", "abc"],
        &["classgroup", "--disc", "5", "--json", "--csv"],
        &["classgroup"],
        &["k0", "--disc", "1"],
        &["verify", "--disc", "-100", "--samples", "5", "--seed", "1"],
        &["verify", "--disc", "5", "--samples", "-1", "--seed", "1"],
        &["scan", "--min", "10", "--max", "-10"],
        &["scan", "--min", "0", "--max", "10", "--jobs", "0"],
        &["nonsense"],
        &[],
    ] {
        assert_eq!(code(&normk(args)), 2, "{args:?}");
    }
}

#[test]
fn k0_orders() {
    for (d, order) in [("-15", "4"), ("8", "1"), ("-23", "6")] {
        let out = normk(&["k0", "--disc", d]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        assert_eq!(v["k0_order"], order, "Δ={d}");
        assert_eq!(v["pass"], true);
    }
}

fn scan_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.join(name);
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--out", p]);
    let out = normk(&all);
    (code(&out), std::fs::read_to_string(&path).unwrap_or_default())
}

#[test]
fn scan_small_range() {
    let dir = tempfile::tempdir().unwrap();
    let (c, text) = scan_to(dir.path(), "s.json", &["scan", "--min", "-100", "--max", "100"]);
    assert_eq!(c, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["violations"], "0");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(v["count"], rows.len().to_string());
    let deltas: Vec<i64> = rows.iter().map(|r| r["delta"].as_str().unwrap().parse().unwrap()).collect();
    assert!(deltas.windows(2).all(|w| w[0] < w[1]));
    let r60 = rows.iter().find(|r| r["delta"] == "60").unwrap();
    assert_eq!(r60["exceptional"], true);
    assert_eq!(r60["rank2"], "1");
    let mut expected = SCAN_COLUMNS.to_vec();
    expected.sort_unstable();
    for r in rows {
        let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }
}

#[test]
fn scan_json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan", "--min", "-300", "--max", "300"];
    let (c1, j) = scan_to(dir.path(), "s.json", &args);
    let (c2, c) = scan_to(dir.path(), "s.csv", &args);
    assert_eq!((c1, c2), (0, 0));
    let rows = serde_json::from_str::<Value>(&j).unwrap()["rows"].as_array().unwrap().clone();
    let mut r = csv::Reader::from_reader(c.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), SCAN_COLUMNS);
    let records: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(&rows) {
        for (k, field) in SCAN_COLUMNS.iter().zip(rec.iter()) {
            let expected = match &row[*k] {
                Value::String(s) => s.clone(),
                Value::Bool(b) => b.to_string(),
                other => panic!("{k}: unexpected JSON value {other}"),
            };
            assert_eq!(field, expected, "Δ={} field {k}", row["delta"]);
        }
    }
}

#[test]
fn scan_is_deterministic_across_job_counts() {
    let one = normk(&["scan", "--min", "-400", "--max", "400", "--jobs", "1"]);
    let four = normk(&["scan", "--min", "-400", "--max", "400", "--jobs", "4"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn empty_scan_range() {
    let out = normk(&["scan", "--min", "2", "--max", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["count"], "0");
    assert_eq!(v["rows"], serde_json::json!([]));
    let dir = tempfile::tempdir().unwrap();
    let (c, text) = scan_to(dir.path(), "e.csv", &["scan", "--min", "2", "--max", "3"]);
    assert_eq!(c, 0);
    assert_eq!(text.trim_end(), SCAN_COLUMNS.join(","));
}

#[test]
fn violations_are_counted() {
    let ok = ScanRow {
        delta: "5".into(),
        t_fin: "1".into(),
        t_all: "1".into(),
        h: "1".into(),
        rank2: "0".into(),
        eps_norm: "-1".into(),
        exceptional: false,
        dim_v: "0".into(),
        dim_h: "0".into(),
        verdict_69: true,
        verdict_67: true,
        verdict_68: true,
    };
    let bad = ScanRow { verdict_67: false, ..ok.clone() };
    assert_eq!(ScanDocument::new(5, 5, vec![ok.clone()]).violations, "0");
    assert_eq!(ScanDocument::new(5, 5, vec![ok, bad]).violations, "1");
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = normk(&["verify", "--disc", "-15", "--samples", "500", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(json(&a)["pass"], true);
    let b = normk(&["verify", "--disc", "-15", "--samples", "500", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);

    let out = normk(&["verify", "--disc", "60", "--samples", "200", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["failures"] == "0"));
}

#[test]
fn verify_seeds_drive_the_samples() {
    use normk::verify::Sampler;
    use normk_core::units::fundamental_unit;
    use normk_core::Discriminant;

    let d = Discriminant::new(-84).unwrap();
    let u = fundamental_unit(&d);
    let draw = |seed| {
        let mut s = Sampler::new(&d, &u, seed);
        (0..20).map(|_| s.k0_element()).collect::<Vec<_>>()
    };
    assert_eq!(draw(1), draw(1));
    assert_ne!(draw(1), draw(2));
}
