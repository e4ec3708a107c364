//! The finite-horizon MDP contract shared by environments and planners.
//!
//! States are opaque to everything outside the environment that produced
//! them. Nothing in this crate compares or hashes states.

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Index into the ordered legal-action list of a state.
pub type ActionId = usize;

/// Result of applying one action.
#[derive(Clone, Debug)]
pub struct Transition<S> {
    pub state: S,
    pub reward: f64,
    pub terminal: bool,
}

/// A generative finite-horizon MDP.
///
/// Legal actions of a state are `0..num_actions(state)`; the ordering is a
/// fixed property of the environment so that an [`ActionId`] means the same
/// thing across runs.
pub trait Mdp {
    type State: Clone;

    /// Maximum episode length.
    fn horizon(&self) -> usize;

    fn discount(&self) -> f64 {
        1.0
    }

    fn initial_state(&self, rng: &mut SimRng) -> Self::State;

    /// Number of legal actions. Never zero for a non-terminal state.
    fn num_actions(&self, state: &Self::State) -> usize;

    /// Samples a successor and a reward. Calling this on a terminal state
    /// violates the contract.
    fn step(&self, state: &Self::State, action: ActionId, rng: &mut SimRng) -> Transition<Self::State>;

    fn action_label(&self, _state: &Self::State, action: ActionId) -> String {
        action.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionStep {
    pub action: ActionId,
    pub reward: f64,
    pub ended: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<TransitionStep>,
}

impl Trajectory {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.reward)
    }
}

/// Σ r_i · γ^i over the rewards in order (first reward undiscounted).
pub fn discounted_return<I>(rewards: I, discount: f64) -> f64
where
    I: IntoIterator<Item = f64>,
{
    if discount == 1.0 {
        return rewards.into_iter().sum();
    }
    let mut weight = 1.0;
    let mut total = 0.0;
    for r in rewards {
        total += r * weight;
        weight *= discount;
    }
    total
}

pub fn episode_return(trajectory: &Trajectory, discount: f64) -> f64 {
    discounted_return(trajectory.rewards(), discount)
}

/// Sum of the first `min(depth, rewards.len())` rewards.
pub fn truncated_return(rewards: &[f64], depth: usize) -> f64 {
    rewards.iter().take(depth).sum()
}

/// Something that picks an action for a state with `remaining` steps left.
pub trait Agent<M: Mdp> {
    fn act(&mut self, model: &M, state: &M::State, remaining: usize) -> ActionId;
}

impl<M, F> Agent<M> for F
where
    M: Mdp,
    F: FnMut(&M, &M::State, usize) -> ActionId,
{
    fn act(&mut self, model: &M, state: &M::State, remaining: usize) -> ActionId {
        self(model, state, remaining)
    }
}

/// Plays one episode from a sampled initial state until a terminal state or
/// the horizon. All environment randomness comes from `rng`; the agent owns
/// whatever randomness it needs.
pub fn run_episode<M, A>(model: &M, agent: &mut A, rng: &mut SimRng) -> Result<Trajectory>
where
    M: Mdp,
    A: Agent<M> + ?Sized,
{
    let horizon = model.horizon();
    let mut state = model.initial_state(rng);
    let mut trajectory = Trajectory {
        steps: Vec::with_capacity(horizon),
    };
    for t in 0..horizon {
        let legal = model.num_actions(&state);
        let action = agent.act(model, &state, horizon - t);
        if action >= legal {
            return Err(Error::IllegalAction { action, legal });
        }
        let tr = model.step(&state, action, rng);
        trajectory.steps.push(TransitionStep {
            action,
            reward: tr.reward,
            ended: tr.terminal,
        });
        if tr.terminal {
            break;
        }
        state = tr.state;
    }
    Ok(trajectory)
}
