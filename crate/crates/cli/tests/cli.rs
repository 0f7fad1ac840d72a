use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn flatvol(args: &[&str]) -> Output {
    flatvol_env(args, None)
}

fn flatvol_env(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_flatvol"));
    c.args(args).env_remove("FLATVOL_CACHE_DIR");
    if let Some(d) = cache {
        c.env("FLATVOL_CACHE_DIR", d);
    }
    c.output().expect("run flatvol")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn roots_reports_center_orders() {
    for (g, z, w) in [("A1", 2, 2), ("A2", 3, 6), ("B2", 2, 8), ("G2", 1, 12)] {
        let j = json(&flatvol(&["roots", g]));
        assert_eq!(j["center_order"], z, "{g}");
        assert_eq!(j["weyl_order"], w, "{g}");
        assert!(j["convention"]["sine_power"].is_string());
    }
    let o = flatvol(&["roots", "Z9"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("usage"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&flatvol(&[])), 2);
    assert_eq!(code(&flatvol(&["volume", "A1", "1/2", "1/2"])), 2);
    assert_eq!(code(&flatvol(&["volume", "A1", "1/2", "1/2", "3/2"])), 2);
    assert_eq!(code(&flatvol(&["volume", "A2", "1/2", "1/2", "1/2"])), 2);
}

#[test]
fn a1_volume_is_exact() {
    let j = json(&flatvol(&["volume", "A1", "1/2 1/2 1/2"]));
    let r = &j["reports"][0];
    assert_eq!(r["exact"], "1/1");
    assert_eq!(r["value"], 1.0);
    assert_eq!(j["input"]["markings"][2][0], "1/2");
    let j = json(&flatvol(&["volume", "A1", "1/10", "1/10", "4/5"]));
    assert_eq!(j["reports"][0]["value"], 0.0);
}

#[test]
fn walls_exit_three() {
    let o = flatvol(&["volume", "A1", "1/5", "3/10", "1/2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall"));
}

#[test]
fn methods_agree_on_a2() {
    let j = json(&flatvol(&["volume", "A2", "1/5,1/5", "1/4,1/3", "1/3,1/5", "--method", "all"]));
    assert_eq!(j["reports"].as_array().unwrap().len(), 3);
    for d in j["deviations"].as_array().unwrap() {
        assert!(d["relative"].as_f64().unwrap() < 1e-3, "{d}");
    }
}

#[test]
fn series_that_cannot_converge_exits_four() {
    let o = flatvol(&["volume", "A1", "1/5", "3/10", "1/4", "--method", "witten", "--eps", "0.1,0.05", "--tolerance", "1e-12"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(j["reports"][0]["warnings"][0].as_str().unwrap().starts_with("convergence"));
}

#[test]
fn scan_profile_and_single_step() {
    let o = flatvol(&["scan", "A1", "1/5", "3/10", "--along", "0:1", "--steps", "4"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 5);
    let exact: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(exact, ["0/1", "1/1", "", "0/1", "0/1"]);
    assert!(rows[2][5].starts_with("error"));
    assert!(rows[0][5].starts_with("warning"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = flatvol(&["scan", "A1", "1/5 3/10", "--along", "1/4:3/4", "--steps", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("step,mu3_1,method,value,exact,status,parameters,convention\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "1/4");
}

#[test]
fn chern_numbers() {
    let p = ["chern", "A2", "1/5,1/5", "1/4,1/3", "1/3,1/5", "--poly"];
    let one = json(&flatvol(&[&p[..], &["1"]].concat()));
    assert_eq!(one["complex_dimension"], 1);
    assert_eq!(one["exact"], "1/6");
    let e1 = json(&flatvol(&[&p[..], &["e1"]].concat()));
    assert_eq!(e1["exact"], "2/1");
    let o = flatvol(&["chern", "A1", "1/5", "3/10", "1/3", "--poly", "e1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree"));
}

#[test]
fn oracle_is_deterministic_and_writes_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = flatvol(&["oracle", "A1", "1/5", "3/10", "--samples", "100000", "--bins", "50", "--seed", seed, "--out", out.to_str().unwrap()]);
        let j = json(&o);
        (std::fs::read(&out).unwrap(), j)
    };
    let (a, ja) = run("a.csv", "3");
    let (b, _) = run("b.csv", "3");
    let (c, _) = run("c.csv", "4");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(ja["ks_vs_kappa"].as_f64().unwrap() < 0.02);
    assert_eq!(ja["seed"], 3);
    assert_eq!(ja["total"], 100000);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(side, ja);
    let rows = csv_rows(std::str::from_utf8(&a).unwrap());
    assert_eq!(rows[15][2], "0.32");
}

#[test]
fn oracle_trivial_factor_fills_one_bin() {
    let o = flatvol(&["oracle", "A1", "31/100", "0", "--samples", "5000", "--bins", "10"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let filled: Vec<&Vec<String>> = rows.iter().filter(|r| r[3] != "0").collect();
    assert_eq!(filled.len(), 1);
    assert_eq!(filled[0][0], "3");
    assert_eq!(filled[0][3], "5000");
    let side: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(side["ks_error"].is_string());
}

#[test]
fn oracle_su3_rows_are_triangles() {
    let o = flatvol(&["oracle", "A2", "1/5,3/10", "2/5,1/4", "--samples", "20000", "--bins", "6"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 36);
    assert_eq!(rows.iter().map(|r| r[6].parse::<u64>().unwrap()).sum::<u64>(), 20000);
    assert_eq!(code(&flatvol(&["oracle", "B2", "0,0", "0,0", "--samples", "10"])), 2);
}

#[test]
fn threads_do_not_change_results() {
    let args = ["oracle", "A2", "1/5,3/10", "2/5,1/4", "--samples", "150000", "--bins", "8", "--seed", "9"];
    let one = flatvol(&[&["--threads", "1"], &args[..]].concat());
    let four = flatvol(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let v = ["volume", "A2", "1/5,1/5", "1/4,1/3", "1/3,1/5", "--method", "toric"];
    assert_eq!(flatvol(&[&["--threads", "1"], &v[..]].concat()).stdout, flatvol(&[&["--threads", "3"], &v[..]].concat()).stdout);
}

#[test]
fn glue_reports() {
    let j = json(&flatvol(&["glue", "A1", "torus1", "7/10"]));
    assert_eq!(j["method"], "gluing-quadrature");
    assert!((j["value"].as_f64().unwrap() - 0.3).abs() < 1e-9);
    let j = json(&flatvol(&["glue", "A1", "sphere4", "1/3 1/4 1/5 1/2"]));
    assert_eq!(j["surface"]["boundary"], 4);
    assert_eq!(code(&flatvol(&["glue", "A1", "torus1", "1/3", "1/4"])), 2);
    assert_eq!(code(&flatvol(&["glue", "A1", "klein", "1/3"])), 2);
}

#[test]
fn chamber_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["volume", "A2", "1/5,1/5", "1/4,1/3", "1/3,1/5"];
    let first = flatvol_env(&args, Some(dir.path()));
    assert_eq!(code(&first), 0);
    let file = dir.path().join("kappa-A2-m1-chambers.json");
    let saved = std::fs::read_to_string(&file).unwrap();
    let cached: Value = serde_json::from_str(&saved).unwrap();
    assert!(!cached["chambers"].as_array().unwrap().is_empty());
    let second = flatvol_env(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), saved);
    // a corrupt cache is rebuilt rather than trusted
    std::fs::write(&file, "{not json").unwrap();
    let third = flatvol_env(&args, Some(dir.path()));
    assert_eq!(first.stdout, third.stdout);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), saved);
}
