use std::path::PathBuf;
use std::process::{Command, Output};

use cfdim::cli::{read_artifact_csv, CacheKey, CacheStatus, PressureCache, CACHE_ENV};
use cfdim::pressure::{solve_s, PressureProblem};
use serde_json::Value;

fn cfdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfdim")).args(args).env_remove(CACHE_ENV).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cfdim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn decompose_three_halves() {
    let v = json(&cfdim(&["decompose", "--x", "3/2", "--op", "sum"]));
    assert_eq!(v["schema"], "cfdim/1");
    assert_eq!(v["config"]["x"], "3/2");
    let r = &v["result"];
    assert_eq!(r["status"], "terminated_exactly");
    assert_eq!(r["first"]["cf"], "[0;1,1]");
    assert_eq!(r["second"]["cf"], "[0;1]");
    assert_eq!(r["bracket"][0], "3/2");
}

#[test]
fn pressure_and_luczak() {
    let v = json(&cfdim(&["pressure", "--B", "2", "--alpha", "2", "--n", "1"]));
    let s = v["result"]["s_value"].as_f64().unwrap();
    assert!((s - 0.2196).abs() < 1e-3);
    let v = json(&cfdim(&["luczak", "--m", "4", "--k", "2"]));
    assert_eq!(v["result"]["count"], 12);
    assert!((v["result"]["bound"].as_f64().unwrap() - 13.545).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    assert_eq!(cfdim(&["decompose", "--x", "1/3"]).status.code(), Some(2));
    assert_eq!(cfdim(&["pressure", "--B", "1", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(cfdim(&["pressure", "--B", "2", "--alpha", "30", "--n", "8"]).status.code(), Some(3));
    assert_eq!(cfdim(&["luczak", "--m", "0", "--k", "2"]).status.code(), Some(2));
    assert_eq!(cfdim(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cfdim(&["verify-suite", "--only", "5"]).status.code(), Some(4));
    assert_eq!(cfdim(&["verify-suite", "--only", "1,8"]).status.code(), Some(0));
}

#[test]
fn artifacts_are_byte_identical_across_thread_counts() {
    let args = ["pressure", "--B", "3/2", "--alpha", "4", "--n", "4"];
    let one = cfdim(&[&args[..], &["--threads", "1"]].concat());
    let four = cfdim(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(cfdim(&args).stdout, one.stdout);
}

#[test]
fn config_file_precedence() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# defaults\nB = 2\nalpha = 3\nn = 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&cfdim(&["pressure", "--config", c]));
    assert_eq!(v["config"]["alphabet"], "1..3");
    assert_eq!(v["config"]["n"], 2);
    let v = json(&cfdim(&["pressure", "--config", c, "--alpha", "2"]));
    assert_eq!(v["config"]["alphabet"], "1..2");
    std::fs::write(&cfg, "alpha = lots\n").unwrap();
    assert_eq!(cfdim(&["pressure", "--config", c, "--B", "2"]).status.code(), Some(2));
}

#[test]
fn cache_round_trip_and_faults() {
    let path = scratch("cache.csv");
    let p = PressureProblem::bounded(3, 2.0, 2).unwrap();
    let mut cache = PressureCache::open(&path).unwrap();
    let (first, st) = cache.solve(&p, 1e-10).unwrap();
    assert_eq!(st, CacheStatus::Miss);
    let reopened = PressureCache::open(&path).unwrap();
    let hit = reopened.lookup(&CacheKey::new(&p, 1e-10)).unwrap();
    assert_eq!(hit.s_value, first.s_value);
    assert_eq!(hit.s_value, solve_s(&p, 1e-10).unwrap().s_value);
    assert!(reopened.lookup(&CacheKey::new(&p, 1e-11)).is_none());

    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("2/1,1..3,2,1e-12,not-a-number,0,compensated_float,9\n");
    text.push_str("2/1,1..3,2,1e-13,7.5,0,compensated_float,9\n");
    std::fs::write(&path, text).unwrap();
    let c = PressureCache::open(&path).unwrap();
    assert_eq!((c.len(), c.skipped()), (1, 2));
    assert!(c.lookup(&CacheKey::new(&p, 1e-12)).is_none());

    // through the binary, via the environment variable
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cfdim"))
            .args(["pressure", "--B", "2", "--alpha", "3", "--n", "2"])
            .env(CACHE_ENV, &path)
            .output()
            .unwrap()
    };
    let v = json(&run());
    assert_eq!(v["result"]["cache"], "hit");
    assert_eq!(v["result"]["s_value"].as_f64().unwrap(), first.s_value);
}

#[test]
fn geometry_gaps_csv() {
    let out = scratch("gaps.csv");
    let res = cfdim(&["geometry", "gaps", "--B", "2", "--alpha", "3", "--indices", "1,3", "--depth", "3", "--out", out.to_str().unwrap()]);
    let v = json(&res);
    assert_eq!(v["result"]["violations"], 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# schema=cfdim/1\n# config="));
    let rows = read_artifact_csv(&out).unwrap();
    assert_eq!(rows.len() as u64, v["result"]["words"].as_u64().unwrap());
    assert!(rows.iter().all(|r| &r[14] == "true" || &r[14] == "n/a"));
    assert_eq!(&rows[0][3], "3/442");
}

#[test]
fn classify_commands() {
    let out = scratch("class.json");
    let res = cfdim(&["dimension", "classify", "--family", "exp", "--B0", "3", "--tol", "1e-4", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["case"], "B_finite");
    assert_eq!(v["result"]["dimension"]["kind"], "s_B");
    assert_eq!(v["result"]["heuristic"], false);

    let values: Vec<String> = (1..=32).map(|n| 4f64.powi(n).to_string()).collect();
    let v = json(&cfdim(&["classify", "--family", "table", "--values", &values.join(",")]));
    assert_eq!(v["result"]["case"], "B_finite");
    assert_eq!(v["result"]["heuristic"], true);
    assert_eq!(cfdim(&["classify", "--family", "table", "--values", "1,2,3"]).status.code(), Some(2));

    let v = json(&cfdim(&["dimension", "ebc", "--b", "2", "--c", "2", "--k-max", "8"]));
    assert_eq!(v["result"]["value"], 0.2);
    assert_eq!(v["result"]["flagged"], false);
    let v = json(&cfdim(&["nested-ratio", "--b", "2", "--c", "2", "--k", "8"]));
    assert!((v["result"]["R"].as_f64().unwrap() - 0.2).abs() <= 1e-3);
}
