use rand::Rng;

use super::DEFAULT_HORIZON;
use crate::error::{Error, Result};
use crate::mdp::{ActionId, Mdp, Transition};
use crate::rng::SimRng;

pub const DEFAULT_RULE_FIDELITY: f64 = 0.95;

/// Row-major cell grid, `alive[y * width + x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LifeState {
    pub alive: Vec<bool>,
}

impl LifeState {
    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }
}

#[derive(Clone, Debug)]
enum Initial {
    Cells(LifeState),
    Random { density: f64 },
}

/// Stochastic Conway's Game of Life on a bounded grid (cells outside the
/// grid are dead).
///
/// Action `y * width + x` saves cell (x, y): it is alive in the next state
/// whatever happens. The last action is a no-op. Every other cell follows
/// Conway's rule with probability `rule_fidelity` and takes the opposite
/// value otherwise. Reward is the number of live cells after the step.
#[derive(Clone, Debug)]
pub struct GameOfLife {
    width: usize,
    height: usize,
    rule_fidelity: f64,
    initial: Initial,
    horizon: usize,
}

impl GameOfLife {
    pub fn new(width: usize, height: usize, rule_fidelity: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        if !(rule_fidelity > 0.0 && rule_fidelity <= 1.0) {
            return Err(Error::invalid("rule fidelity must lie in (0, 1]"));
        }
        Ok(Self {
            width,
            height,
            rule_fidelity,
            initial: Initial::Random { density: 0.5 },
            horizon: DEFAULT_HORIZON,
        })
    }

    pub fn with_initial_cells(mut self, cells: &[(usize, usize)]) -> Result<Self> {
        let mut alive = vec![false; self.width * self.height];
        for &(x, y) in cells {
            if x >= self.width || y >= self.height {
                return Err(Error::invalid(format!("cell ({x}, {y}) outside the grid")));
            }
            alive[self.index(x, y)] = true;
        }
        self.initial = Initial::Cells(LifeState { alive });
        Ok(self)
    }

    pub fn with_random_initial(mut self, density: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::invalid("density must lie in [0, 1]"));
        }
        self.initial = Initial::Random { density };
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn noop(&self) -> ActionId {
        self.width * self.height
    }

    pub fn save(&self, x: usize, y: usize) -> ActionId {
        self.index(x, y)
    }

    fn live_neighbours(&self, state: &LifeState, x: usize, y: usize) -> usize {
        let mut count = 0;
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
                    continue;
                }
                if state.alive[self.index(nx as usize, ny as usize)] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Deterministic Conway successor.
    pub fn conway_step(&self, state: &LifeState) -> LifeState {
        let mut alive = vec![false; state.alive.len()];
        for y in 0..self.height {
            for x in 0..self.width {
                let i = self.index(x, y);
                let n = self.live_neighbours(state, x, y);
                alive[i] = matches!((state.alive[i], n), (true, 2) | (_, 3));
            }
        }
        LifeState { alive }
    }
}

impl Mdp for GameOfLife {
    type State = LifeState;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn initial_state(&self, rng: &mut SimRng) -> LifeState {
        match &self.initial {
            Initial::Cells(s) => s.clone(),
            Initial::Random { density } => LifeState {
                alive: (0..self.width * self.height)
                    .map(|_| rng.random::<f64>() < *density)
                    .collect(),
            },
        }
    }

    fn num_actions(&self, _state: &LifeState) -> usize {
        self.width * self.height + 1
    }

    fn step(&self, state: &LifeState, action: ActionId, rng: &mut SimRng) -> Transition<LifeState> {
        let mut next = self.conway_step(state);
        if self.rule_fidelity < 1.0 {
            for cell in next.alive.iter_mut() {
                if rng.random::<f64>() >= self.rule_fidelity {
                    *cell = !*cell;
                }
            }
        }
        if action < self.noop() {
            next.alive[action] = true;
        }
        Transition {
            reward: next.alive_count() as f64,
            state: next,
            terminal: false,
        }
    }

    fn action_label(&self, _state: &LifeState, action: ActionId) -> String {
        if action == self.noop() {
            "noop".into()
        } else {
            format!("save({},{})", action % self.width, action / self.width)
        }
    }
}
