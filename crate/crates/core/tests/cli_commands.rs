use std::path::{Path, PathBuf};
use std::process::Command;

use commonbath::config::RunConfig;

const BIN: &str = env!("CARGO_BIN_EXE_commonbath");

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("commonbath-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_config(name: &str, json: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).env_remove("TOOL_SEED").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const WERNER: &str = r#"{ "bath": { "lambda": [1, 1, 1], "B": [0, 0, 0.5] },
  "initial": { "werner_eq27": { "s": 0.25 } },
  "integrator": { "dt": 0.01, "t_end": 3.0, "sample_every": 10 } }"#;

#[test]
fn evolve_writes_csv() {
    let cfg = write_config("werner.json", WERNER);
    let out = tmp("werner.csv");
    let (code, _, err) = run(&["evolve", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(
        lines[1],
        "t,tau,trace_err,min_pt_eig,concurrence,r01,r02,r03,r10,r20,r30,r11,r12,r13,r21,r22,r23,r31,r32,r33"
    );
    assert_eq!(lines.len(), 2 + 31);
    let first: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[4] - 0.5).abs() < 1e-12);
    // 15 significant digits in every field.
    assert!(lines[2].split(',').all(|f| f.split('e').next().unwrap().replace(['-', '.'], "").len() == 15));
}

#[test]
fn zero_bath_rows_are_identical() {
    let cfg = write_config(
        "zero.json",
        r#"{ "bath": { "lambda": [0, 0, 0], "B": [0, 0, 0] },
             "initial": { "product": { "phi": [[0.6, 0], [0, 0.8]], "psi": [[1, 0], [0, 0]] } },
             "integrator": { "dt": 0.1, "t_end": 1.0, "sample_every": 1 } }"#,
    );
    let out = tmp("zero.csv");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&out)]).0, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).map(|l| l.split_once(',').unwrap().1).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| *r == rows[0]));
}

#[test]
fn mixed_start_entangles_under_drive() {
    // |0⟩⊗|1⟩ is driven out of the separable set immediately.
    let cfg = write_config(
        "p01.json",
        r#"{ "bath": { "lambda": [1, 1, 1], "B": [0, 0, 0.5] },
             "initial": { "product": { "phi": [[1, 0], [0, 0]], "psi": [[0, 0], [1, 0]] } },
             "integrator": { "dt": 0.001, "t_end": 0.05, "sample_every": 10 } }"#,
    );
    let out = tmp("p01.csv");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&out)]).0, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let c: Vec<f64> = text.lines().skip(2).map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(c[0], 0.0);
    assert!(c[1] > 0.0);
}

#[test]
fn steady_reports_threshold_and_exit_codes() {
    let cfg = write_config(
        "steady.json",
        r#"{ "bath": { "lambda": [1, 1, 1], "B": [0, 0, 0.5] },
             "initial": { "pauli": { "r0i": [0,0,0], "ri0": [0,0,0], "rij": [[-1,0,0],[0,-1,0],[0,0,-1]] } } }"#,
    );
    let (code, stdout, _) = run(&["steady", "--config", p(&cfg)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["tau"], -3.0);
    assert_eq!(v["closed_form"]["concurrence_closed"], 1.0);
    assert!((v["closed_form"]["threshold"].as_f64().unwrap() + 0.636363636363636).abs() < 1e-12);

    let tilted = write_config(
        "tilted.json",
        r#"{ "bath": { "lambda": [3, 2, 1], "B": [0.3, 0.3, 0] },
             "initial": { "werner_eq27": { "s": 0.1 } } }"#,
    );
    assert_eq!(run(&["steady", "--config", p(&tilted)]).0, 3);
    let (code, stdout, _) = run(&["steady", "--config", p(&tilted), "--numeric-only"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["closed_form"].is_null());
    assert_eq!(v["numeric"]["dimension"], 1);
}

#[test]
fn config_errors_exit_one_and_name_the_field() {
    let both = write_config(
        "both.json",
        r#"{ "bath": { "lambda": [1, 1, 1], "A": [[1,0,0],[0,1,0],[0,0,1]], "B": [0, 0, 0] },
             "initial": { "werner_eq27": { "s": 0.1 } } }"#,
    );
    let (code, _, err) = run(&["steady", "--config", p(&both)]);
    assert_eq!(code, 1);
    assert!(err.contains("bath"), "{err}");

    let bad_s = write_config(
        "bad_s.json",
        r#"{ "bath": { "lambda": [1, 1, 1], "B": [0, 0, 0] }, "initial": { "werner_eq27": { "s": 0.9 } } }"#,
    );
    let (code, _, err) = run(&["evolve", "--config", p(&bad_s), "--out", p(&tmp("x.csv"))]);
    assert_eq!(code, 1);
    assert!(err.contains("initial"), "{err}");

    assert_eq!(run(&["steady", "--config", "/nonexistent/cfg.json"]).0, 1);
}

#[test]
fn integration_failure_exits_two() {
    // A step far beyond the stability limit of RK4 blows up positivity.
    let cfg = write_config(
        "unstable.json",
        r#"{ "bath": { "lambda": [50, 50, 50], "B": [0, 0, 10] },
             "initial": { "werner_eq27": { "s": 0.3 } },
             "integrator": { "dt": 0.2, "t_end": 5.0, "sample_every": 1 } }"#,
    );
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&tmp("u.csv"))]).0, 2);
}

#[test]
fn sweep_rows_follow_input_order() {
    let cfg = write_config("sweep.json", WERNER);
    let out = tmp("sweep.csv");
    let (code, _, err) = run(&["sweep", "--config", p(&cfg), "--param", "s", "--values", "0.25,0,0.1", "--out", p(&out)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split(',').collect()).collect();
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(values, [0.25, 0.0, 0.1]);
    let dc: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    let g = 1.0 - 2.75 / 3.25;
    for (d, s) in dc.iter().zip(values) {
        assert!((d - 2.0 * s * g).abs() < 1e-13);
    }

    let (code, _, _) = run(&["sweep", "--config", p(&cfg), "--param", "tau", "--values", "-3.5", "--out", p(&out)]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["sweep", "--config", p(&cfg), "--param", "gamma", "--values", "1", "--out", p(&out)]);
    assert_eq!(code, 1);
}

#[test]
fn check_is_deterministic() {
    let (code, a, _) = run(&["check"]);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a.lines().filter(|l| l.starts_with("PASS")).count(), 14);
    let (_, b, _) = run(&["check"]);
    assert_eq!(a, b);

    let out = Command::new(BIN).arg("check").env("TOOL_SEED", "12345").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("seed 12345"));
    let out = Command::new(BIN).arg("check").env("TOOL_SEED", "nope").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_round_trip_is_idempotent() {
    let cfg = RunConfig::from_json(WERNER).unwrap();
    let once = cfg.to_json();
    let twice = RunConfig::from_json(&once).unwrap().to_json();
    assert_eq!(once, twice);
}
