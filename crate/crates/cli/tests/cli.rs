use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const ABZ: &str = "dmu_id,group,x1,y1\nA,g1,2,2\nB,g1,4,2\nZ,g2,1,2\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deabench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", stderr(out));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.csv", ABZ);
    let dup = write(&dir, "dup.csv", "dmu_id,group,x1,y1\nA,g,1,1\nA,g,2,1\n");
    let empty = write(&dir, "empty.csv", "");
    assert_eq!(code(&run(&["validate", "--input", arg(&good)])), 0);
    let out = run(&["validate", "--input", arg(&dup)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("duplicate"), "{}", stderr(&out));
    assert_eq!(code(&run(&["validate", "--input", arg(&empty)])), 1);
    assert_eq!(code(&run(&["validate", "--input", "/nonexistent/file.csv"])), 1);
}

#[test]
fn negative_input_names_the_cell() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "dmu_id,group,x1,y1\nA,g,1,1\nB,g,-2,1\n");
    let out = run(&["analyze", "--input", arg(&bad)]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("row 3") && err.contains("x1"), "{err}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&run(&["analyze"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["analyze", "--paper-default", "--scope", "nowhere"])), 3);
    assert_eq!(
        code(&run(&["analyze", "--paper-default", "--model", "bcc", "--rts", "crs"])),
        3
    );
    assert_eq!(code(&run(&["--threads", "0", "validate", "--input", "x.csv"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn vrs_scores_at_least_crs() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data.csv");
    let out = run(&["generate", "--paper-default", "--seed", "5", "--output", arg(&data)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let thetas = |rts: &str| -> Vec<f64> {
        let report = json(&run(&[
            "analyze", "--input", arg(&data), "--scope", "global", "--rts", rts, "--format", "json",
        ]));
        report["per_dmu"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| d["global"]["theta"].as_f64().unwrap())
            .collect()
    };
    let (crs, vrs) = (thetas("crs"), thetas("vrs"));
    assert_eq!(crs.len(), 1000);
    for (c, v) in crs.iter().zip(&vrs) {
        assert!(*v >= c - 1e-9, "vrs {v} < crs {c}");
    }
}

#[test]
fn single_group_compare_warns() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "one.csv", "dmu_id,group,x1,y1\nA,g,2,2\nB,g,4,2\n");
    let out = run(&["compare", "--input", arg(&path), "--format", "json"]);
    assert!(stderr(&out).contains("single group"), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["comparison"]["worse_total"], 0);
    assert_eq!(report["comparison"]["shifted_total"], 0);
}

#[test]
fn shift_fixture_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "abz.csv", ABZ);
    let report = json(&run(&["compare", "--input", arg(&path), "--format", "json"]));
    let g1 = &report["comparison"]["groups"][0];
    assert_eq!(g1["group"], "g1");
    assert_eq!(g1["worse_count"], 2);
    assert_eq!(g1["shifted_count"], 1);
    let a = &report["per_dmu"][0];
    assert_eq!(a["local"]["theta"].as_f64().unwrap(), 1.0);
    assert!((a["global"]["theta"].as_f64().unwrap() - 0.5).abs() <= 1e-12);

    let text = run(&["compare", "--input", arg(&path)]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("0.375"), "{text}");
}

#[test]
fn generate_is_deterministic_and_validates() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        assert_eq!(code(&run(&["generate", "--paper-default", "--seed", "17", "--output", arg(p)])), 0);
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    // Header plus one line per DMU.
    assert_eq!(bytes.iter().filter(|&&c| c == b'\n').count(), 1001);
    let out = run(&["validate", "--input", arg(&a)]);
    assert_eq!(code(&out), 0);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn generate_from_config_flags_small_groups() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "gen.cfg",
        "# small cohort\nn_inputs = 10\nn_outputs = 6\nseed = 3\ngroup.big = 68\ngroup.small = 10\n",
    );
    let data = dir.path().join("out.csv");
    let out = run(&["generate", "--config", arg(&cfg), "--output", arg(&data)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = String::from_utf8(out.stdout).unwrap();
    let small = table.lines().find(|l| l.starts_with("small")).unwrap();
    assert!(small.contains("FAIL") && small.contains("60"), "{table}");
    let big = table.lines().find(|l| l.starts_with("big")).unwrap();
    assert!(big.contains("pass"), "{table}");

    let bad = write(&dir, "bad.cfg", "n_inputs = ten\n");
    assert_eq!(code(&run(&["generate", "--config", arg(&bad)])), 3);
}

/// Long-format CSV report keyed by (section, key, field).
fn csv_report(out: &Output) -> HashMap<(String, String, String), String> {
    assert_eq!(code(out), 0, "{}", stderr(out));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("section,key,field,value"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.splitn(4, ',').collect();
            ((f[0].into(), f[1].into(), f[2].into()), f[3].into())
        })
        .collect()
}

#[test]
fn json_and_csv_carry_identical_values() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "gen.cfg", "n_inputs = 3\nn_outputs = 2\nseed = 9\ngroup.P = 20\ngroup.Q = 25\n");
    let data = dir.path().join("d.csv");
    assert_eq!(code(&run(&["generate", "--config", arg(&cfg), "--output", arg(&data)])), 0);
    let base = ["compare", "--input", arg(&data), "--rts", "vrs", "--format"];
    let report = json(&run(&[&base[..], &["json"]].concat()));
    let csv = csv_report(&run(&[&base[..], &["csv"]].concat()));
    let num = |section: &str, key: &str, field: &str| -> f64 {
        csv[&(section.to_string(), key.to_string(), field.to_string())]
            .parse()
            .unwrap()
    };

    for d in report["per_dmu"].as_array().unwrap() {
        let id = d["dmu_id"].as_str().unwrap();
        for (scope, section) in [("local", "dmu_local"), ("global", "dmu_global")] {
            let r = &d[scope];
            assert_eq!(r["theta"].as_f64().unwrap(), num(section, id, "theta"));
            for (i, s) in r["input_slacks"].as_array().unwrap().iter().enumerate() {
                assert_eq!(s.as_f64().unwrap(), num(section, id, &format!("input_slack:x{}", i + 1)));
            }
            for (peer, w) in r["lambdas"].as_object().unwrap() {
                assert_eq!(w.as_f64().unwrap(), num(section, id, &format!("lambda:{peer}")));
            }
        }
        let worse = &csv[&("dmu_comparison".into(), id.into(), "worse".into())];
        assert_eq!(d["worse"].as_bool().unwrap().to_string(), *worse);
    }
    for (scope, eff_table, slack_table) in [("local", "table2", "table3"), ("global", "table4", "table5")] {
        for g in report[scope].as_array().unwrap() {
            let e = &g["efficiency"];
            let label = e["group"].as_str().unwrap();
            for field in ["avg_theta", "std_theta", "min_theta", "efficient_pct", "frontier_pct"] {
                assert_eq!(e[field].as_f64().unwrap(), num(eff_table, label, field), "{field}");
            }
            for (i, v) in g["slack"]["excess_pct"].as_array().unwrap().iter().enumerate() {
                assert_eq!(v.as_f64().unwrap(), num(slack_table, label, &format!("x{}", i + 1)));
            }
        }
    }
    assert_eq!(
        report["comparison"]["worse_total_pct"].as_f64().unwrap(),
        num("comparison", "", "worse_total_pct")
    );
}

#[test]
fn summaries_recompute_from_emitted_records() {
    let report = json(&run(&["compare", "--paper-default", "--seed", "2", "--format", "json"]));
    let per_dmu = report["per_dmu"].as_array().unwrap();
    for (scope, key) in [("local", "local"), ("global", "global")] {
        for g in report[scope].as_array().unwrap() {
            let e = &g["efficiency"];
            let label = e["group"].as_str().unwrap();
            let thetas: Vec<f64> = per_dmu
                .iter()
                .filter(|d| d["group"] == label)
                .map(|d| d[key]["theta"].as_f64().unwrap())
                .collect();
            let n = thetas.len() as f64;
            let mean = thetas.iter().sum::<f64>() / n;
            let std = (thetas.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            assert_eq!(e["size"].as_u64().unwrap() as usize, thetas.len());
            assert!((e["avg_theta"].as_f64().unwrap() - mean).abs() <= 1e-12);
            assert!((e["std_theta"].as_f64().unwrap() - std).abs() <= 1e-12);
            let eff = per_dmu
                .iter()
                .filter(|d| d["group"] == label && d[key]["status"] == "Efficient")
                .count();
            assert_eq!(e["efficient_count"].as_u64().unwrap() as usize, eff);
        }
    }
}
