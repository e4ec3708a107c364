use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tree::{NodeId, SearchTree, StateNode};
use crate::aupo::RewardTape;
use crate::error::{Error, Result};
use crate::mdp::{ActionId, Mdp};
use crate::rng::{argmax_set, pick_uniform, SimRng};

/// Tree policy at the root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootPolicy {
    #[default]
    Ucb,
    /// Least-visited action, ties broken at random.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MctsConfig {
    /// Multiplier C of the Global Std exploration factor λ = C·σ.
    pub exploration_c: f64,
    pub iterations: usize,
    pub root_policy: RootPolicy,
}

impl MctsConfig {
    pub fn new(exploration_c: f64, iterations: usize) -> Self {
        Self {
            exploration_c,
            iterations,
            root_policy: RootPolicy::Ucb,
        }
    }

    pub fn with_root_policy(mut self, root_policy: RootPolicy) -> Self {
        self.root_policy = root_policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::invalid("iterations must be at least 1"));
        }
        if !(self.exploration_c >= 0.0 && self.exploration_c.is_finite()) {
            return Err(Error::invalid("exploration constant must be finite and non-negative"));
        }
        Ok(())
    }
}

/// `q + λ·sqrt(ln N / n_a)`.
#[inline]
pub fn ucb_value(q: f64, n_a: u64, n_total: u64, lambda: f64) -> f64 {
    debug_assert!(n_a >= 1 && n_total >= n_a);
    if lambda == 0.0 {
        return q;
    }
    q + lambda * ((n_total as f64).ln() / n_a as f64).sqrt()
}

/// UCB argmax over a fully expanded node; ties uniform.
pub fn select_child<S>(node: &StateNode<S>, lambda: f64, rng: &mut SimRng) -> ActionId {
    let total = node.total_visits();
    let best = argmax_set(node.qnodes.iter().enumerate().map(|(a, q)| {
        let q = q.as_ref().expect("select_child on a partially expanded node");
        (a, ucb_value(q.return_sum / q.visits as f64, q.visits, total, lambda))
    }));
    pick_uniform(&best, rng)
}

fn least_visited<S>(node: &StateNode<S>, rng: &mut SimRng) -> ActionId {
    let fewest = argmax_set((0..node.qnodes.len()).map(|a| (a, -(node.visits(a) as f64))));
    pick_uniform(&fewest, rng)
}

/// Uniform random playout for at most `remaining` steps, appending rewards
/// to `out`.
pub fn rollout_into<M: Mdp>(model: &M, state: &M::State, remaining: usize, rng: &mut SimRng, out: &mut Vec<f64>) {
    let mut current: Option<M::State> = None;
    for _ in 0..remaining {
        let s = current.as_ref().unwrap_or(state);
        let action = rng.random_range(0..model.num_actions(s));
        let tr = model.step(s, action, rng);
        out.push(tr.reward);
        if tr.terminal {
            break;
        }
        current = Some(tr.state);
    }
}

pub fn rollout<M: Mdp>(model: &M, state: &M::State, remaining: usize, rng: &mut SimRng) -> Vec<f64> {
    let mut out = Vec::with_capacity(remaining);
    rollout_into(model, state, remaining, rng, &mut out);
    out
}

pub struct SearchOutcome<S> {
    pub tree: SearchTree<S>,
    /// Present when the search was asked to log rewards.
    pub tape: Option<RewardTape>,
}

/// Runs `config.iterations` UCT iterations from `root_state`, which has
/// `remaining` steps left before the horizon.
///
/// Successor states are never compared, so every transition sampled below a
/// Q node is a new state node and the selection phase ends there: each
/// iteration picks a root action (uniformly among unexpanded actions first,
/// then by UCB or least-visited), samples one successor, plays a uniform
/// random rollout from it and backs the return up. With `tape_depth =
/// Some(D)` the rewards of every trajectory are logged for the abstraction.
pub fn search<M: Mdp>(
    model: &M,
    root_state: M::State,
    remaining: usize,
    config: &MctsConfig,
    tape_depth: Option<usize>,
    rng: &mut SimRng,
) -> Result<SearchOutcome<M::State>> {
    config.validate()?;
    if remaining == 0 {
        return Err(Error::invalid("search needs at least one remaining step"));
    }
    let actions = model.num_actions(&root_state);
    if actions == 0 {
        return Err(Error::invalid("root state has no legal actions"));
    }
    let discount = model.discount();
    let mut tree = SearchTree::new(root_state, actions, remaining);
    let mut tape = tape_depth.map(|d| RewardTape::with_capacity(actions, d, config.iterations / actions + 1));
    let mut rewards = Vec::with_capacity(remaining);
    const ROOT: NodeId = 0;

    for _ in 0..config.iterations {
        let lambda = config.exploration_c * tree.global_std();
        let root = tree.root();
        let action = match config.root_policy {
            RootPolicy::Uniform => least_visited(root, rng),
            RootPolicy::Ucb if !root.is_fully_expanded() => {
                let open: Vec<ActionId> = root.unexpanded().collect();
                pick_uniform(&open, rng)
            }
            RootPolicy::Ucb => select_child(root, lambda, rng),
        };

        let tr = model.step(&root.state, action, rng);
        rewards.clear();
        rewards.push(tr.reward);
        let child_actions = if tr.terminal { 0 } else { model.num_actions(&tr.state) };
        let child = tree.add_child(ROOT, action, tr.state, tr.terminal, child_actions);

        let leaf = tree.node(child);
        if !leaf.terminal && leaf.remaining > 0 {
            rollout_into(model, &leaf.state, leaf.remaining, rng, &mut rewards);
        }
        tree.backup(&[(ROOT, action)], &rewards, discount);
        if let Some(tape) = tape.as_mut() {
            tape.record(action, &rewards, discount);
        }
    }
    Ok(SearchOutcome { tree, tape })
}

/// Root action with the highest Q value among visited actions; ties uniform.
pub fn greedy_decision<S>(tree: &SearchTree<S>, rng: &mut SimRng) -> Result<ActionId> {
    let best = argmax_set(
        tree.root()
            .qnodes
            .iter()
            .enumerate()
            .filter_map(|(a, q)| q.as_ref().and_then(|q| q.q()).map(|v| (a, v))),
    );
    if best.is_empty() {
        return Err(Error::NoVisitedAction);
    }
    Ok(pick_uniform(&best, rng))
}

/// Root action with the most visits; ties uniform.
pub fn most_visits_decision<S>(tree: &SearchTree<S>, rng: &mut SimRng) -> Result<ActionId> {
    let root = tree.root();
    if root.total_visits() == 0 {
        return Err(Error::NoVisitedAction);
    }
    let best = argmax_set((0..root.qnodes.len()).map(|a| (a, root.visits(a) as f64)));
    Ok(pick_uniform(&best, rng))
}
