use crate::mdp::{discounted_return, ActionId};

pub type NodeId = usize;

/// Statistics of one state-action pair.
#[derive(Clone, Debug, Default)]
pub struct QNode {
    pub visits: u64,
    pub return_sum: f64,
    /// Sampled successor state nodes, one per traversal.
    pub children: Vec<NodeId>,
}

impl QNode {
    pub fn q(&self) -> Option<f64> {
        (self.visits > 0).then(|| self.return_sum / self.visits as f64)
    }
}

#[derive(Clone, Debug)]
pub struct StateNode<S> {
    pub state: S,
    pub terminal: bool,
    /// Steps left before the horizon.
    pub remaining: usize,
    /// How often the search entered this node.
    pub entries: u64,
    /// Indexed by the environment's action ordering; `None` = unexpanded.
    pub qnodes: Vec<Option<QNode>>,
}

impl<S> StateNode<S> {
    pub fn unexpanded(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.qnodes
            .iter()
            .enumerate()
            .filter(|(_, q)| q.is_none())
            .map(|(a, _)| a)
    }

    pub fn is_fully_expanded(&self) -> bool {
        self.qnodes.iter().all(Option::is_some)
    }

    pub fn visits(&self, action: ActionId) -> u64 {
        self.qnodes[action].as_ref().map_or(0, |q| q.visits)
    }

    pub fn total_visits(&self) -> u64 {
        self.qnodes.iter().flatten().map(|q| q.visits).sum()
    }
}

/// Running count, sum and sum of squares over the Q values of every visited
/// Q node in a tree.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QAggregate {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

/// Below this the spread of Q values is treated as zero.
const MIN_STD: f64 = 1e-12;

impl QAggregate {
    fn add(&mut self, q: f64) {
        self.count += 1;
        self.sum += q;
        self.sum_sq += q * q;
    }

    fn remove(&mut self, q: f64) {
        self.count -= 1;
        self.sum -= q;
        self.sum_sq -= q * q;
    }

    /// Population standard deviation, or 1 when fewer than two values are
    /// present or the spread is numerically zero.
    pub fn std_or_one(&self) -> f64 {
        if self.count < 2 {
            return 1.0;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0);
        let std = var.sqrt();
        if std < MIN_STD {
            1.0
        } else {
            std
        }
    }
}

/// Visits and return sum of one root action.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RootStat {
    pub visits: u64,
    pub return_sum: f64,
}

impl RootStat {
    /// Mean return; `-inf` for an unvisited action.
    pub fn q(&self) -> f64 {
        if self.visits == 0 {
            f64::NEG_INFINITY
        } else {
            self.return_sum / self.visits as f64
        }
    }
}

/// Arena-allocated search tree; node 0 is the root.
#[derive(Clone, Debug)]
pub struct SearchTree<S> {
    nodes: Vec<StateNode<S>>,
    q_aggregate: QAggregate,
}

impl<S> SearchTree<S> {
    pub fn new(root: S, actions: usize, remaining: usize) -> Self {
        Self {
            nodes: vec![StateNode {
                state: root,
                terminal: false,
                remaining,
                entries: 1,
                qnodes: vec![None; actions],
            }],
            q_aggregate: QAggregate::default(),
        }
    }

    pub fn root(&self) -> &StateNode<S> {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &StateNode<S> {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &StateNode<S>> {
        self.nodes.iter()
    }

    pub fn q_aggregate(&self) -> QAggregate {
        self.q_aggregate
    }

    /// Spread of all Q values in the tree (fallback 1 when degenerate).
    pub fn global_std(&self) -> f64 {
        self.q_aggregate.std_or_one()
    }

    pub fn root_stats(&self) -> Vec<RootStat> {
        self.root()
            .qnodes
            .iter()
            .map(|q| {
                q.as_ref().map_or_else(RootStat::default, |q| RootStat {
                    visits: q.visits,
                    return_sum: q.return_sum,
                })
            })
            .collect()
    }

    /// Adds a freshly sampled successor of `(parent, action)`, creating the
    /// Q node on first use.
    pub fn add_child(&mut self, parent: NodeId, action: ActionId, state: S, terminal: bool, actions: usize) -> NodeId {
        let id = self.nodes.len();
        let remaining = self.nodes[parent].remaining - 1;
        self.nodes.push(StateNode {
            state,
            terminal,
            remaining,
            entries: 1,
            qnodes: vec![None; if terminal { 0 } else { actions }],
        });
        self.nodes[parent].qnodes[action]
            .get_or_insert_with(QNode::default)
            .children
            .push(id);
        id
    }

    /// Credits every Q node on `path` with one visit and the return of the
    /// trajectory suffix starting at it. `rewards[i]` is the reward of the
    /// `i`-th transition of the trajectory, so `path[i]` receives
    /// `Σ_{t ≥ i} rewards[t] · γ^(t-i)`.
    pub fn backup(&mut self, path: &[(NodeId, ActionId)], rewards: &[f64], discount: f64) {
        debug_assert!(rewards.len() >= path.len());
        for (i, &(node, action)) in path.iter().enumerate() {
            let ret = discounted_return(rewards[i..].iter().copied(), discount);
            let qnode = self.nodes[node].qnodes[action].get_or_insert_with(QNode::default);
            if let Some(old) = qnode.q() {
                self.q_aggregate.remove(old);
            }
            qnode.visits += 1;
            qnode.return_sum += ret;
            let new = qnode.return_sum / qnode.visits as f64;
            self.q_aggregate.add(new);
        }
    }

    /// Recomputes the Q aggregate from scratch.
    pub fn recompute_q_aggregate(&self) -> QAggregate {
        let mut agg = QAggregate::default();
        for node in &self.nodes {
            for q in node.qnodes.iter().flatten().filter_map(QNode::q) {
                agg.add(q);
            }
        }
        agg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backup_single_node() {
        let mut t = SearchTree::new((), 2, 5);
        t.backup(&[(0, 1)], &[2.0, 3.0], 1.0);
        let q = t.root().qnodes[1].as_ref().unwrap();
        assert_eq!((q.visits, q.return_sum), (1, 5.0));
    }

    #[test]
    fn backup_averages() {
        let mut t = SearchTree::new((), 1, 5);
        t.backup(&[(0, 0)], &[1.0], 1.0);
        t.backup(&[(0, 0)], &[3.0], 1.0);
        assert_eq!(t.root().qnodes[0].as_ref().unwrap().q(), Some(2.0));
    }

    #[test]
    fn backup_path_gets_suffix_returns() {
        let mut t = SearchTree::new((), 1, 5);
        let child = t.add_child(0, 0, (), false, 1);
        t.backup(&[(0, 0), (child, 0)], &[1.5, 4.0], 1.0);
        assert_eq!(t.root().qnodes[0].as_ref().unwrap().return_sum, 5.5);
        assert_eq!(t.node(child).qnodes[0].as_ref().unwrap().return_sum, 4.0);
        let mut d = SearchTree::new((), 1, 5);
        d.backup(&[(0, 0)], &[1.0, 2.0], 0.5);
        assert_eq!(d.root().qnodes[0].as_ref().unwrap().return_sum, 2.0);
    }

    #[test]
    fn global_std_cases() {
        let mut t = SearchTree::new((), 3, 5);
        t.backup(&[(0, 0)], &[1.0], 1.0);
        assert_eq!(t.global_std(), 1.0);
        t.backup(&[(0, 1)], &[3.0], 1.0);
        assert!((t.global_std() - 1.0).abs() < 1e-15);
        let mut e = SearchTree::new((), 2, 5);
        e.backup(&[(0, 0)], &[4.0], 1.0);
        e.backup(&[(0, 1)], &[4.0], 1.0);
        assert_eq!(e.global_std(), 1.0);
        let mut w = SearchTree::new((), 2, 5);
        w.backup(&[(0, 0)], &[0.0], 1.0);
        w.backup(&[(0, 1)], &[6.0], 1.0);
        assert!((w.global_std() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn aggregate_tracks_recomputation() {
        let mut t = SearchTree::new((), 4, 5);
        for i in 0..500 {
            let a = (i * 7) % 4;
            t.backup(&[(0, a)], &[(i % 13) as f64 * 31.7, -2.0], 1.0);
            let fresh = t.recompute_q_aggregate();
            let live = t.q_aggregate();
            assert_eq!(fresh.count, live.count);
            assert!((fresh.sum - live.sum).abs() < 1e-9 * fresh.sum.abs().max(1.0));
            assert!((fresh.sum_sq - live.sum_sq).abs() < 1e-9 * fresh.sum_sq.max(1.0));
        }
    }
}
