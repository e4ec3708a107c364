//! Seeded episode batches and sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AgentSpec, Discounted, EnvVisitor, ExperimentConfig, SweepConfig};
use super::planner::Planner;
use crate::error::{Error, Result};
use crate::mdp::{episode_return, run_episode, Mdp};
use crate::rng::episode_streams;
use crate::stats::report_ci;

/// Level of the reported return intervals.
pub const REPORT_LEVEL: f64 = 0.99;

/// One row of the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub env: String,
    pub agent: String,
    pub params: String,
    pub iterations: usize,
    pub episodes: usize,
    pub mean_return: f64,
    pub ci99_half: f64,
    pub mean_decision_ms: f64,
    pub median_decision_ms: f64,
}

/// One row of the per-episode returns CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeReturn {
    pub env: String,
    pub agent: String,
    pub params: String,
    pub iterations: usize,
    pub episode: usize,
    #[serde(rename = "return")]
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<ResultRecord>,
    pub raw: Vec<EpisodeReturn>,
}

impl ExperimentOutput {
    fn extend(&mut self, other: ExperimentOutput) {
        self.records.extend(other.records);
        self.raw.extend(other.raw);
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// `(mean, half-width)` of the reported interval; a single episode has a
/// zero-width interval.
pub fn summarize_returns(returns: &[f64]) -> Result<(f64, f64)> {
    match returns.len() {
        0 => Err(Error::EmptySamples),
        1 => Ok((returns[0], 0.0)),
        _ => report_ci(returns, REPORT_LEVEL),
    }
}

struct EpisodeResult {
    ret: f64,
    decision_ms: Vec<f64>,
}

/// Episode `index` of one agent. The environment and planner streams depend
/// only on `(seed, index)`, so every agent faces the same environment noise.
pub fn play_episode<M: Mdp>(
    model: &M,
    spec: &AgentSpec,
    iterations: usize,
    seed: u64,
    index: usize,
) -> Result<(f64, Vec<f64>)> {
    let (mut env_rng, agent_rng) = episode_streams(seed, index as u64);
    let mut planner = Planner::new(spec, iterations, agent_rng);
    let trajectory = run_episode(model, &mut planner, &mut env_rng)?;
    if let Some(e) = planner.take_error() {
        return Err(e);
    }
    Ok((
        episode_return(&trajectory, model.discount()),
        planner.into_decision_ms(),
    ))
}

struct BatchRunner<'a> {
    cfg: &'a ExperimentConfig,
    pool: &'a rayon::ThreadPool,
}

impl EnvVisitor for BatchRunner<'_> {
    type Output = Result<ExperimentOutput>;

    fn visit<M>(self, model: &Discounted<M>, id: &str) -> Self::Output
    where
        M: Mdp + Clone + Sync,
        M::State: Send + Sync,
    {
        let cfg = self.cfg;
        let mut out = ExperimentOutput::default();
        for spec in &cfg.agents {
            for &iterations in &cfg.budgets {
                let episodes: Vec<EpisodeResult> = self.pool.install(|| {
                    (0..cfg.episodes)
                        .into_par_iter()
                        .map(|i| {
                            play_episode(model, spec, iterations, cfg.seed, i)
                                .map(|(ret, decision_ms)| EpisodeResult { ret, decision_ms })
                        })
                        .collect::<Result<Vec<_>>>()
                })?;
                let returns: Vec<f64> = episodes.iter().map(|e| e.ret).collect();
                let times: Vec<f64> = episodes.iter().flat_map(|e| e.decision_ms.iter().copied()).collect();
                let (mean_return, ci99_half) = summarize_returns(&returns)?;
                let (agent, params) = (spec.id(), spec.params());
                out.raw
                    .extend(returns.iter().enumerate().map(|(episode, &value)| EpisodeReturn {
                        env: id.to_string(),
                        agent: agent.clone(),
                        params: params.clone(),
                        iterations,
                        episode,
                        value,
                    }));
                out.records.push(ResultRecord {
                    env: id.to_string(),
                    agent,
                    params,
                    iterations,
                    episodes: cfg.episodes,
                    mean_return,
                    ci99_half,
                    mean_decision_ms: mean(&times),
                    median_decision_ms: median(&times),
                });
            }
        }
        Ok(out)
    }
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Runs every (agent, budget) pair for `cfg.episodes` episodes on up to
/// `threads` threads (all cores when `None`). Results do not depend on the
/// thread count.
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let env = cfg.environment.build(cfg.horizon, cfg.discount)?;
    let pool = thread_pool(threads)?;
    env.visit(BatchRunner { cfg, pool: &pool })
}

/// Runs the Cartesian product of the grid with every budget and environment.
pub fn sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::default();
    for experiment in cfg.experiments()? {
        out.extend(run_experiment(&experiment, threads)?);
    }
    Ok(out)
}
