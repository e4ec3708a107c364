use super::{gaussian, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::mdp::{ActionId, Mdp, Transition};
use crate::rng::SimRng;

/// Multi-armed bandit with Gaussian arms: a single decision, then terminal.
#[derive(Clone, Debug)]
pub struct GaussianBandit {
    means: Vec<f64>,
    stds: Vec<f64>,
    horizon: usize,
}

impl GaussianBandit {
    pub fn new(means: Vec<f64>, stds: Vec<f64>) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::invalid("bandit needs at least one arm"));
        }
        if means.len() != stds.len() {
            return Err(Error::invalid(format!(
                "{} arm means but {} stds",
                means.len(),
                stds.len()
            )));
        }
        if stds.iter().any(|s| !(*s >= 0.0 && s.is_finite())) || means.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("arm parameters must be finite with std >= 0"));
        }
        Ok(Self {
            means,
            stds,
            horizon: DEFAULT_HORIZON,
        })
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }
}

impl Mdp for GaussianBandit {
    /// `true` once the arm has been pulled.
    type State = bool;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn initial_state(&self, _rng: &mut SimRng) -> bool {
        false
    }

    fn num_actions(&self, _state: &bool) -> usize {
        self.means.len()
    }

    fn step(&self, state: &bool, action: ActionId, rng: &mut SimRng) -> Transition<bool> {
        debug_assert!(!*state, "step on a finished bandit");
        Transition {
            state: true,
            reward: gaussian(self.means[action], self.stds[action], rng),
            terminal: true,
        }
    }

    fn action_label(&self, _state: &bool, action: ActionId) -> String {
        format!("arm{action}")
    }
}
