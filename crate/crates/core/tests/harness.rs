use aupo_core::harness::config::AgentKind;
use aupo_core::harness::{
    compute_scores, run_experiment, sweep, AgentSpec, EnvSpec, ExperimentConfig, GridEntry, SweepConfig,
};
use aupo_core::{AupoParams, RootPolicy};

fn grid() -> Vec<GridEntry> {
    serde_json::from_str(
        r#"[
        {"kind": "mcts", "root_policy": ["ucb", "uniform"], "exploration_c": [0.5, 1, 2]},
        {"kind": "aupo", "q": [0.8, 0.95], "depth": [1, 2, 3], "rf": [false, true], "sf": [false, true]},
        {"kind": "random_abs", "p_random": [0.25, 0.75]}
    ]"#,
    )
    .unwrap()
}

fn bandit() -> EnvSpec {
    EnvSpec::GaussianMab {
        name: None,
        means: vec![0.0, 0.3, 0.6],
        stds: vec![1.0, 1.0, 1.0],
    }
}

#[test]
fn sweep_expands_cartesian_grid() {
    let cfg = SweepConfig {
        environments: vec![
            bandit(),
            EnvSpec::SysadminHub {
                name: None,
                outer: 3,
                reboot_cost: 0.75,
                initial_down: vec![],
            },
        ],
        grid: grid(),
        budgets: vec![10, 20, 40],
        episodes: 3,
        seed: 9,
        horizon: 5,
        discount: 1.0,
    };
    let agents = cfg.agents().unwrap();
    assert_eq!(agents.len(), 6 + 24 + 2);
    assert_eq!(agents.iter().filter(|a| a.kind == AgentKind::Aupo).count(), 24);
    let params: std::collections::HashSet<_> = agents.iter().map(|a| (a.id(), a.params())).collect();
    assert_eq!(params.len(), agents.len());
    assert_eq!(cfg.experiments().unwrap().len(), 2);

    let out = sweep(&cfg, Some(2)).unwrap();
    assert_eq!(out.records.len(), 2 * 3 * agents.len());
    assert_eq!(out.raw.len(), out.records.len() * 3);
    let report = compute_scores(&out.records).unwrap();
    assert_eq!(report.scores.len(), agents.len());
}

fn small(seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        environment: bandit(),
        agents: vec![
            AgentSpec::mcts(1.0, RootPolicy::Ucb),
            AgentSpec::aupo(1.0, RootPolicy::Ucb, AupoParams::new(0.9, 1)),
        ],
        budgets: vec![12],
        episodes: 40,
        seed,
        horizon: 1,
        discount: 1.0,
    }
}

#[test]
fn seed_controls_returns() {
    let a = run_experiment(&small(1), Some(1)).unwrap();
    let b = run_experiment(&small(1), Some(4)).unwrap();
    let c = run_experiment(&small(2), Some(1)).unwrap();
    let returns = |o: &aupo_core::harness::ExperimentOutput| o.raw.iter().map(|r| r.value).collect::<Vec<_>>();
    assert_eq!(returns(&a), returns(&b));
    assert_ne!(returns(&a), returns(&c));
}

#[test]
fn agents_share_environment_noise() {
    // with one step and a single arm all agents see the same reward draws
    let mut cfg = small(5);
    cfg.environment = EnvSpec::GaussianMab {
        name: None,
        means: vec![0.5],
        stds: vec![2.0],
    };
    let out = run_experiment(&cfg, None).unwrap();
    let (m, a): (Vec<_>, Vec<_>) = out.raw.iter().partition(|r| r.agent == "MCTS");
    assert_eq!(m.len(), a.len());
    for (x, y) in m.iter().zip(&a) {
        assert_eq!((x.episode, x.value), (y.episode, y.value));
    }
}
