use rand::Rng;

use super::DEFAULT_HORIZON;
use crate::error::{Error, Result};
use crate::mdp::{ActionId, Mdp, Transition};
use crate::rng::SimRng;

pub const DEFAULT_REBOOT_COST: f64 = 0.75;

/// Base survival probability of a running machine.
const SURVIVAL_BASE: f64 = 0.45;
/// Weight of the healthy-neighbourhood fraction in the survival probability.
const SURVIVAL_NEIGHBOUR_WEIGHT: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SysAdminState {
    pub running: Vec<bool>,
}

impl SysAdminState {
    pub fn running_count(&self) -> usize {
        self.running.iter().filter(|r| **r).count()
    }
}

/// Network of machines that crash stochastically and can be rebooted.
///
/// Actions are `reboot(0) .. reboot(n-1)` followed by `idle`. Each step:
/// the rebooted machine is running next step; any other running machine
/// stays up with probability `0.45 + 0.5 * (1 + running neighbours) /
/// (1 + neighbours)`; a down machine that is not rebooted stays down. The
/// reward is the number of running machines after the transition, minus
/// the reboot cost when the action is not `idle`. There are no terminal
/// states.
#[derive(Clone, Debug)]
pub struct SysAdmin {
    neighbours: Vec<Vec<usize>>,
    reboot_cost: f64,
    initial: SysAdminState,
    horizon: usize,
}

impl SysAdmin {
    /// Arbitrary undirected topology given as adjacency lists.
    pub fn with_topology(neighbours: Vec<Vec<usize>>, reboot_cost: f64) -> Result<Self> {
        let n = neighbours.len();
        if n == 0 {
            return Err(Error::invalid("sysadmin needs at least one machine"));
        }
        for (i, adj) in neighbours.iter().enumerate() {
            for &j in adj {
                if j >= n || j == i {
                    return Err(Error::invalid(format!("bad edge {i} -> {j}")));
                }
                if !neighbours[j].contains(&i) {
                    return Err(Error::invalid(format!("edge {i} -> {j} is not symmetric")));
                }
            }
        }
        if !reboot_cost.is_finite() {
            return Err(Error::invalid("reboot cost must be finite"));
        }
        Ok(Self {
            initial: SysAdminState { running: vec![true; n] },
            neighbours,
            reboot_cost,
            horizon: DEFAULT_HORIZON,
        })
    }

    /// Machine 0 is the hub, connected to each of machines `1..=n_outer`.
    pub fn hub(n_outer: usize, reboot_cost: f64) -> Result<Self> {
        if n_outer == 0 {
            return Err(Error::invalid("hub topology needs at least one outer machine"));
        }
        let mut neighbours = vec![(1..=n_outer).collect::<Vec<_>>()];
        neighbours.extend((1..=n_outer).map(|_| vec![0]));
        Self::with_topology(neighbours, reboot_cost)
    }

    pub fn with_initial_down(mut self, down: &[usize]) -> Result<Self> {
        for &m in down {
            if m >= self.machines() {
                return Err(Error::invalid(format!("machine {m} does not exist")));
            }
            self.initial.running[m] = false;
        }
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn machines(&self) -> usize {
        self.neighbours.len()
    }

    pub fn idle(&self) -> ActionId {
        self.machines()
    }

    pub fn reboot_cost(&self) -> f64 {
        self.reboot_cost
    }

    /// Probability that running, non-rebooted machine `m` stays up.
    pub fn survival_probability(&self, state: &SysAdminState, m: usize) -> f64 {
        let adj = &self.neighbours[m];
        let up = adj.iter().filter(|&&j| state.running[j]).count();
        SURVIVAL_BASE + SURVIVAL_NEIGHBOUR_WEIGHT * (1 + up) as f64 / (1 + adj.len()) as f64
    }
}

impl Mdp for SysAdmin {
    type State = SysAdminState;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn initial_state(&self, _rng: &mut SimRng) -> SysAdminState {
        self.initial.clone()
    }

    fn num_actions(&self, _state: &SysAdminState) -> usize {
        self.machines() + 1
    }

    fn step(&self, state: &SysAdminState, action: ActionId, rng: &mut SimRng) -> Transition<SysAdminState> {
        let mut running = Vec::with_capacity(self.machines());
        for m in 0..self.machines() {
            let up = if m == action {
                true
            } else if state.running[m] {
                rng.random::<f64>() < self.survival_probability(state, m)
            } else {
                false
            };
            running.push(up);
        }
        let next = SysAdminState { running };
        let cost = if action == self.idle() { 0.0 } else { self.reboot_cost };
        Transition {
            reward: next.running_count() as f64 - cost,
            state: next,
            terminal: false,
        }
    }

    fn action_label(&self, _state: &SysAdminState, action: ActionId) -> String {
        if action == self.idle() {
            "idle".into()
        } else {
            format!("reboot{action}")
        }
    }
}
