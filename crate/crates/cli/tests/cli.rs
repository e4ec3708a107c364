use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn plan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plan"))
        .args(args)
        .output()
        .expect("spawn plan")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RUN_CONFIG: &str = r#"{
  "environment": {"kind": "sysadmin_hub", "outer": 3, "initial_down": [1]},
  "agents": [
    {"kind": "mcts", "exploration_C": 1.0},
    {"kind": "aupo", "root_policy": "uniform", "aupo": {"q": 0.9, "depth": 2, "rf": true}},
    {"kind": "random_abs", "p_random": 0.5}
  ],
  "budgets": [10, 30],
  "episodes": 6,
  "seed": 7,
  "horizon": 8
}"#;

fn non_timing(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.split(',').take(7).collect::<Vec<_>>().join(","))
        .collect()
}

#[test]
fn run_writes_results_and_raw_returns() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", RUN_CONFIG);
    let out = dir.path().join("res.csv");
    let o = plan(&[
        "run",
        "--config",
        s(&cfg),
        "--out",
        s(&out),
        "--emit-raw",
        "--threads",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "env,agent,params,iterations,episodes,mean_return,ci99_half,mean_decision_ms,median_decision_ms"
    );
    assert_eq!(lines.count(), 6);
    assert!(text.contains("sysadmin_hub3,U-AUPO,"));

    let raw = fs::read_to_string(dir.path().join("res.raw.csv")).unwrap();
    assert_eq!(
        raw.lines().next().unwrap(),
        "env,agent,params,iterations,episode,return"
    );
    assert_eq!(raw.lines().count(), 1 + 6 * 6);
}

#[test]
fn run_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", RUN_CONFIG);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(plan(&["run", "--config", s(&cfg), "--out", s(&a), "--threads", "1"])
        .status
        .success());
    assert!(plan(&["run", "--config", s(&cfg), "--out", s(&b), "--threads", "3"])
        .status
        .success());
    let (a, b) = (fs::read_to_string(a).unwrap(), fs::read_to_string(b).unwrap());
    assert_eq!(non_timing(&a), non_timing(&b));
}

#[test]
fn sweep_then_scores() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "sweep.json",
        r#"{
  "environments": [
    {"kind": "gaussian_mab", "means": [0.0, 0.5, 1.0], "stds": [1.0, 1.0, 1.0]},
    {"kind": "sysadmin_hub", "outer": 2}
  ],
  "grid": [
    {"kind": "mcts", "exploration_c": [0.5, 2.0]},
    {"kind": "aupo", "q": [0.8], "depth": [1, 2]}
  ],
  "budgets": [8, 16],
  "episodes": 4,
  "seed": 3,
  "horizon": 5
}"#,
    );
    let res = dir.path().join("sweep.csv");
    let o = plan(&["sweep", "--config", s(&cfg), "--out", s(&res)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // 2 envs x 2 budgets x 4 agents
    assert_eq!(fs::read_to_string(&res).unwrap().lines().count(), 1 + 16);

    let scores = dir.path().join("scores.csv");
    let o = plan(&["scores", "--in", s(&res), "--out", s(&scores)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&scores).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "agent,params,pairings_score,relative_score"
    );
    assert_eq!(text.lines().count(), 1 + 4);
    let total: f64 = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!(total.abs() < 1e-9);
    assert!(dir.path().join("scores.report.json").exists());
}

#[test]
fn theory_table_has_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("theory.csv");
    let o = plan(&["theory", "--out", s(&out), "--trials", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("mu_gap,sigma_left,sigma_right,depth,n,q,exact,mc_estimate,bound"));
    assert!(text.lines().count() > 10);
}

#[test]
fn bench_writes_timings() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "bench.json",
        r#"{
  "environment": {"kind": "game_of_life", "width": 3, "height": 3},
  "agents": [{"kind": "mcts"}, {"kind": "aupo", "aupo": {"q": 0.95, "depth": 1}}],
  "budgets": [20],
  "repetitions": 3,
  "seed": 5,
  "horizon": 6
}"#,
    );
    let out = dir.path().join("bench.csv");
    let o = plan(&["bench", "--config", s(&cfg), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 2);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let missing = dir.path().join("nope.json");
    assert_eq!(
        plan(&["run", "--config", s(&missing), "--out", s(&out)]).status.code(),
        Some(2)
    );

    let unknown = write(&dir, "bad.json", &RUN_CONFIG.replace("\"seed\"", "\"sed\""));
    assert_eq!(
        plan(&["run", "--config", s(&unknown), "--out", s(&out)]).status.code(),
        Some(2)
    );

    let bad_q = write(&dir, "q.json", &RUN_CONFIG.replace("\"q\": 0.9", "\"q\": 1.5"));
    assert_eq!(
        plan(&["run", "--config", s(&bad_q), "--out", s(&out)]).status.code(),
        Some(2)
    );

    let cfg = write(&dir, "ok.json", RUN_CONFIG);
    assert_eq!(
        plan(&["run", "--config", s(&cfg), "--out", s(&out), "--threads", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        plan(&["theory", "--out", s(&out), "--trials", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn incomplete_results_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let res = write(
        &dir,
        "res.csv",
        "env,agent,params,iterations,episodes,mean_return,ci99_half,mean_decision_ms,median_decision_ms\n\
         e1,MCTS,C=1,10,5,1.0,0.1,0.5,0.5\n\
         e1,AUPO,C=1;q=0.9;D=1;RF=0;SF=0,10,5,2.0,0.1,0.5,0.5\n\
         e2,MCTS,C=1,10,5,1.0,0.1,0.5,0.5\n",
    );
    let out = dir.path().join("scores.csv");
    let o = plan(&["scores", "--in", s(&res), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
