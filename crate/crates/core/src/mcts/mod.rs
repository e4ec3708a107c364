//! UCT search with the Global Std exploration factor.

mod search;
mod tree;

pub use search::{
    greedy_decision, most_visits_decision, rollout, search, select_child, ucb_value, MctsConfig, RootPolicy,
    SearchOutcome,
};
pub use tree::{NodeId, QAggregate, QNode, RootStat, SearchTree, StateNode};
