//! Search-based agents used by the harness.

use std::time::Instant;

use super::config::{AgentKind, AgentSpec};
use crate::aupo::aupo_decide;
use crate::baselines::{random_abs_decide, RandomAbsParams};
use crate::error::{Error, Result};
use crate::mcts::{greedy_decision, search};
use crate::mdp::{ActionId, Agent, Mdp};
use crate::rng::SimRng;

/// Builds a fresh search of `iterations` iterations from `state` and applies
/// the agent's decision policy.
pub fn plan_decision<M: Mdp>(
    model: &M,
    state: &M::State,
    remaining: usize,
    spec: &AgentSpec,
    iterations: usize,
    rng: &mut SimRng,
) -> Result<ActionId> {
    let config = spec.search_config(iterations);
    let tape_depth = spec.aupo.as_ref().map(|p| p.depth);
    let outcome = search(model, state.clone(), remaining, &config, tape_depth, rng)?;
    match spec.kind {
        AgentKind::Mcts => greedy_decision(&outcome.tree, rng),
        AgentKind::Aupo => {
            let params = spec
                .aupo
                .as_ref()
                .ok_or_else(|| Error::Config("aupo agent without parameters".into()))?;
            let tape = outcome.tape.as_ref().expect("tape requested for aupo");
            aupo_decide(&outcome.tree, tape, params, rng)
        }
        AgentKind::RandomAbs => {
            let p = spec
                .p_random
                .ok_or_else(|| Error::Config("random_abs agent without p_random".into()))?;
            random_abs_decide(&outcome.tree, &RandomAbsParams::new(p)?, rng)
        }
    }
}

/// An [`Agent`] that plans every decision and records how long it took.
///
/// The first planning error is kept and every later decision returns action
/// 0 without searching; check [`Planner::take_error`] after the episode.
pub struct Planner<'a> {
    spec: &'a AgentSpec,
    iterations: usize,
    rng: SimRng,
    decision_ms: Vec<f64>,
    error: Option<Error>,
}

impl<'a> Planner<'a> {
    pub fn new(spec: &'a AgentSpec, iterations: usize, rng: SimRng) -> Self {
        Self {
            spec,
            iterations,
            rng,
            decision_ms: Vec::new(),
            error: None,
        }
    }

    pub fn decision_ms(&self) -> &[f64] {
        &self.decision_ms
    }

    pub fn into_decision_ms(self) -> Vec<f64> {
        self.decision_ms
    }

    pub fn take_error(&mut self) -> Option<Error> {
        self.error.take()
    }
}

impl<M: Mdp> Agent<M> for Planner<'_> {
    fn act(&mut self, model: &M, state: &M::State, remaining: usize) -> ActionId {
        if self.error.is_some() {
            return 0;
        }
        let start = Instant::now();
        let decided = plan_decision(model, state, remaining, self.spec, self.iterations, &mut self.rng);
        self.decision_ms.push(start.elapsed().as_secs_f64() * 1e3);
        decided.unwrap_or_else(|e| {
            self.error = Some(e);
            0
        })
    }
}
