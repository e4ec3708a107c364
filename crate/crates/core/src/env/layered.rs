use serde::{Deserialize, Serialize};

use super::gaussian;
use crate::error::{Error, Result};
use crate::mdp::{ActionId, Mdp, Transition};
use crate::rng::SimRng;

/// Per-depth Gaussian reward parameters: `means[d][a]` and `stds[d][a]`
/// for depth `d + 1` after root action `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredGaussianSpec {
    pub means: Vec<Vec<f64>>,
    pub stds: Vec<Vec<f64>>,
}

impl LayeredGaussianSpec {
    pub fn depth(&self) -> usize {
        self.means.len()
    }

    pub fn actions(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    fn validate(&self) -> Result<()> {
        let n = self.actions();
        if self.depth() == 0 || n == 0 {
            return Err(Error::invalid("layered spec needs at least one layer and one action"));
        }
        if self.stds.len() != self.depth() {
            return Err(Error::invalid("means and stds have different depths"));
        }
        for (m, s) in self.means.iter().zip(&self.stds) {
            if m.len() != n || s.len() != n {
                return Err(Error::invalid("ragged layered spec"));
            }
            if s.iter().any(|v| !(*v > 0.0 && v.is_finite())) || m.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("layer stds must be positive and finite"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredState {
    /// Root action taken, once the chain has left the root.
    pub root_action: Option<ActionId>,
    pub steps: usize,
}

/// Chain MDP whose depth-`d` reward depends only on the root action and is
/// drawn independently from `Normal(means[d][a], stds[d][a])`. Rewards after
/// the last specified layer are zero. Below the root there is a single
/// action.
#[derive(Clone, Debug)]
pub struct LayeredGaussian {
    spec: LayeredGaussianSpec,
    horizon: usize,
}

impl LayeredGaussian {
    pub fn new(spec: LayeredGaussianSpec, horizon: usize) -> Result<Self> {
        spec.validate()?;
        if horizon < spec.depth() {
            return Err(Error::invalid("horizon shorter than the layered spec"));
        }
        Ok(Self { spec, horizon })
    }

    pub fn spec(&self) -> &LayeredGaussianSpec {
        &self.spec
    }
}

impl Mdp for LayeredGaussian {
    type State = LayeredState;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn initial_state(&self, _rng: &mut SimRng) -> LayeredState {
        LayeredState {
            root_action: None,
            steps: 0,
        }
    }

    fn num_actions(&self, state: &LayeredState) -> usize {
        match state.root_action {
            None => self.spec.actions(),
            Some(_) => 1,
        }
    }

    fn step(&self, state: &LayeredState, action: ActionId, rng: &mut SimRng) -> Transition<LayeredState> {
        let root = state.root_action.unwrap_or(action);
        let layer = state.steps;
        let reward = if layer < self.spec.depth() {
            gaussian(self.spec.means[layer][root], self.spec.stds[layer][root], rng)
        } else {
            0.0
        };
        Transition {
            state: LayeredState {
                root_action: Some(root),
                steps: layer + 1,
            },
            reward,
            terminal: false,
        }
    }
}
