//! Decision-time measurements on states reached by random walks.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use super::config::{AgentSpec, BenchConfig, Discounted, EnvVisitor};
use super::experiment::{mean, median};
use super::planner::plan_decision;
use crate::error::{Error, Result};
use crate::mdp::Mdp;
use crate::rng::{substream, SimRng};

/// One row of the bench CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingRecord {
    pub env: String,
    pub agent: String,
    pub params: String,
    pub iterations: usize,
    pub repetitions: usize,
    pub mean_decision_ms: f64,
    pub median_decision_ms: f64,
}

/// Plays uniformly random actions for a walk length drawn uniformly from
/// `[0, horizon)`, stopping early before a terminal state. Returns the state
/// and its remaining steps.
pub fn random_walk_state<M: Mdp>(model: &M, rng: &mut SimRng) -> (M::State, usize) {
    let horizon = model.horizon();
    let length = rng.random_range(0..horizon);
    let mut state = model.initial_state(rng);
    let mut t = 0;
    while t < length {
        let a = rng.random_range(0..model.num_actions(&state));
        let tr = model.step(&state, a, rng);
        if tr.terminal {
            break;
        }
        state = tr.state;
        t += 1;
    }
    (state, horizon - t)
}

/// Per-agent decision times `[agent][repetition]` in milliseconds.
///
/// Every repetition samples one state and times all agents on it with the
/// same planner stream, rotating the order in which agents run. Agents whose
/// searches consume randomness identically then run identical searches and
/// differ only by their decision overhead.
pub fn time_decisions<M: Mdp>(
    model: &M,
    agents: &[AgentSpec],
    iterations: usize,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if repetitions == 0 {
        return Err(Error::invalid("repetitions must be at least 1"));
    }
    let mut times = vec![Vec::with_capacity(repetitions); agents.len()];
    for rep in 0..repetitions {
        let mut walk_rng = substream(seed, 2 * rep as u64);
        let (state, remaining) = random_walk_state(model, &mut walk_rng);
        for k in 0..agents.len() {
            let i = (k + rep) % agents.len();
            let mut rng = substream(seed, 2 * rep as u64 + 1);
            let start = Instant::now();
            plan_decision(model, &state, remaining, &agents[i], iterations, &mut rng)?;
            times[i].push(start.elapsed().as_secs_f64() * 1e3);
        }
    }
    Ok(times)
}

struct BenchRunner<'a>(&'a BenchConfig);

impl EnvVisitor for BenchRunner<'_> {
    type Output = Result<Vec<TimingRecord>>;

    fn visit<M>(self, model: &Discounted<M>, id: &str) -> Self::Output
    where
        M: Mdp + Clone + Sync,
        M::State: Send + Sync,
    {
        let cfg = self.0;
        let mut out = Vec::new();
        for &iterations in &cfg.budgets {
            let times = time_decisions(model, &cfg.agents, iterations, cfg.repetitions, cfg.seed)?;
            for (spec, t) in cfg.agents.iter().zip(&times) {
                out.push(TimingRecord {
                    env: id.to_string(),
                    agent: spec.id(),
                    params: spec.params(),
                    iterations,
                    repetitions: cfg.repetitions,
                    mean_decision_ms: mean(t),
                    median_decision_ms: median(t),
                });
            }
        }
        Ok(out)
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<TimingRecord>> {
    cfg.validate()?;
    cfg.environment
        .build(cfg.horizon, cfg.discount)?
        .visit(BenchRunner(cfg))
}
