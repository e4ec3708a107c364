//! Monte Carlo Tree Search with the AUPO decision policy: root actions whose
//! layerwise reward distributions cannot be told apart are pooled before the
//! final action is chosen.

pub mod aupo;
pub mod baselines;
pub mod env;
pub mod error;
pub mod harness;
pub mod mcts;
pub mod mdp;
pub mod rng;
pub mod special;
pub mod stats;
pub mod theory;

pub use aupo::{aupo_decide, build_abstraction, AupoParams, RewardTape};
pub use baselines::{random_abs_decide, RandomAbsParams};
pub use error::{Error, Result};
pub use mcts::{greedy_decision, search, MctsConfig, RootPolicy, SearchOutcome, SearchTree};
pub use mdp::{run_episode, ActionId, Agent, Mdp, Transition};
pub use rng::SimRng;
