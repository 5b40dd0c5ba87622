use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vilenkin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV text, header dropped.
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn column(text: &str, idx: usize) -> Vec<f64> {
    rows(text).iter().map(|r| r[idx].parse().unwrap()).collect()
}

#[test]
fn dirichlet_kernel_csv() {
    let out = run(&["kernel", "--kind", "dirichlet", "--n", "3", "--m", "2", "--res", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("x,re,im\n"));
    assert_eq!(column(&text, 1), vec![3.0, 1.0, 1.0, -1.0]);
    assert_eq!(column(&text, 2), vec![0.0; 4]);
}

#[test]
fn fejer_kernel_csv() {
    let out = run(&["kernel", "--kind", "fejer", "--n", "2", "--m", "2", "--res", "2"]);
    assert!(out.status.success());
    assert_eq!(column(&stdout(&out), 1), vec![1.5, 0.5, 1.5, 0.5]);
}

#[test]
fn trivial_kernel_is_ones() {
    let out = run(&["kernel", "--kind", "dirichlet", "--n", "1"]);
    assert!(out.status.success());
    let re = column(&stdout(&out), 1);
    assert!(!re.is_empty());
    assert!(re.iter().all(|&v| v == 1.0));
}

#[test]
fn lebesgue_rows() {
    let out = run(&["lebesgue", "--max-n", "4", "--m", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,L_n,v,vstar,lower,upper,pass\n"));
    let r = rows(&text);
    assert_eq!(r[0], ["1", "1", "1", "0", "0.125", "1", "pass"]);
    let l3: f64 = r[2][1].parse().unwrap();
    let (lo, hi): (f64, f64) = (r[2][4].parse().unwrap(), r[2][5].parse().unwrap());
    assert_eq!((l3, lo, hi), (1.5, 0.25, 2.0));
    for m in ["2", "3", "2,3,4"] {
        let out = run(&["lebesgue", "--max-n", "24", "--m", m]);
        let r = rows(&stdout(&out));
        let big_m2: usize = match m {
            "2" => 4,
            "3" => 9,
            _ => 6,
        };
        assert_eq!(r[big_m2 - 1][1], "1", "m={m}");
    }
}

#[test]
fn lebesgue_variation_forms() {
    let out = run(&["lebesgue", "--max-n", "64", "--variation", "from-zero", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r["pass"] == true));
    assert_eq!(rows[0]["v"], 2);
}

#[test]
fn verify_identities_passes() {
    let out = run(&["verify", "--suite", "identities", "--m", "2", "--max-n", "64"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("suite,claim,params,kind,status,value,bound,margin,tolerance\n"));
    assert!(!text.contains(",fail,"));
}

#[test]
fn verify_json_report() {
    let out = run(&["verify", "--suite", "inequalities", "--m", "2,3,4", "--max-n", "128", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let recs = v.as_array().unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["suite"] == "inequalities"));
    let keys: Vec<(String, String)> = recs
        .iter()
        .map(|r| (r["claim"].as_str().unwrap().into(), r["params"].as_str().unwrap().into()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = run(&["verify", "--suite", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));
}

#[test]
fn bad_arguments_fail() {
    assert!(!run(&["kernel", "--kind", "bogus", "--n", "3"]).status.success());
    assert!(!run(&["kernel", "--kind", "dirichlet", "--n", "9", "--res", "2"]).status.success());
    assert!(!run(&["lebesgue", "--tol", "0"]).status.success());
    assert!(!run(&["group", "--m", "1"]).status.success());
}

#[test]
fn counterexample_files() {
    let dir = tempfile::tempdir().unwrap();
    let mart = dir.path().join("mart.json");
    let probe = dir.path().join("probe.csv");
    let out = run(&[
        "counterexample",
        "--kind",
        "strong-partial-sums",
        "--alpha",
        "1,2,3",
        "--res",
        "8",
        "--martingale",
        mart.to_str().unwrap(),
        "--out",
        probe.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&mart).unwrap()).unwrap();
    assert_eq!(m["entries"].as_array().unwrap().len(), 9);
    let measured = column(&fs::read_to_string(&probe).unwrap(), 1);
    assert_eq!(measured.len(), 3);
    assert!(measured.windows(2).all(|w| w[1] > w[0]));

    let out = run(&["counterexample", "--kind", "hp-blocks", "--p", "0.4", "--alpha", "1,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_alpha_is_invalid() {
    let out = run(&["counterexample", "--kind", "hp-blocks", "--p", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid parameters"));
}

#[test]
fn output_is_deterministic() {
    let args = ["transform", "--m", "3", "--res", "3", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "--suite", "martingales", "--m", "2", "--samples", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn csv_digits_round_trip() {
    let csv_out = run(&["transform", "--m", "2,3", "--res", "3", "--seed", "5"]);
    let json_out = run(&["transform", "--m", "2,3", "--res", "3", "--seed", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let from_json: Vec<f64> = v["values"].as_array().unwrap().iter().map(|c| c[0].as_f64().unwrap()).collect();
    assert_eq!(column(&stdout(&csv_out), 1), from_json);
    for r in rows(&stdout(&csv_out)) {
        let digits = r[1].trim_start_matches('-').replace('.', "");
        let significant = digits.split('e').next().unwrap().trim_start_matches('0').len();
        assert!(significant <= 17, "{}", r[1]);
    }
}

#[test]
fn mean_reads_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    let out = run(&["transform", "--m", "2", "--res", "4", "--seed", "3", "--format", "json", "--inverse"]);
    assert!(out.status.success());
    fs::write(&input, &out.stdout).unwrap();
    let mean = run(&["mean", "--kind", "partial", "--n", "16", "--input", input.to_str().unwrap(), "--format", "json"]);
    assert!(mean.status.success(), "{}", String::from_utf8_lossy(&mean.stderr));
    let a: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&mean.stdout).unwrap();
    let (va, vb) = (a["values"].as_array().unwrap(), b["values"].as_array().unwrap());
    for (x, y) in va.iter().zip(vb) {
        for i in 0..2 {
            assert!((x[i].as_f64().unwrap() - y[i].as_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn group_table() {
    let out = run(&["group", "--m", "2,3,4", "--levels", "4"]);
    let r = rows(&stdout(&out));
    let big: Vec<&str> = r.iter().map(|row| row[2].as_str()).collect();
    assert_eq!(big, ["1", "2", "6", "24", "48"]);
    let out = run(&["group", "--m", "3", "--n", "14", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["digits"], serde_json::json!([2, 1, 1]));
}
