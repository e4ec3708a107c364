//! RANDOM-ABS: the two-step abstracted decision with a random grouping.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::aupo::two_step_select;
use crate::error::{Error, Result};
use crate::mcts::SearchTree;
use crate::mdp::ActionId;
use crate::rng::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomAbsParams {
    pub p_random: f64,
}

impl RandomAbsParams {
    pub fn new(p_random: f64) -> Result<Self> {
        let p = Self { p_random };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_random) {
            return Err(Error::invalid(format!("p_random {} outside [0, 1]", self.p_random)));
        }
        Ok(())
    }
}

/// Groups each unordered pair of `candidates` independently with
/// probability `p`. Returned groups are indexed by action and sorted.
pub fn random_groups(candidates: &[ActionId], actions: usize, p: f64, rng: &mut SimRng) -> Vec<Vec<ActionId>> {
    let mut groups = vec![Vec::new(); actions];
    for &c in candidates {
        groups[c].push(c);
    }
    for (i, &a) in candidates.iter().enumerate() {
        for &b in &candidates[i + 1..] {
            if rng.random_bool(p) {
                groups[a].push(b);
                groups[b].push(a);
            }
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups
}

pub fn random_abs_decide<S>(tree: &SearchTree<S>, params: &RandomAbsParams, rng: &mut SimRng) -> Result<ActionId> {
    params.validate()?;
    let root = tree.root_stats();
    let candidates: Vec<ActionId> = (0..root.len()).filter(|&a| root[a].visits > 0).collect();
    if candidates.is_empty() {
        return Err(Error::NoVisitedAction);
    }
    let groups = random_groups(&candidates, root.len(), params.p_random, rng);
    two_step_select(&candidates, &groups, &root, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn pair_frequency_at_one_half() {
        let mut rng = seeded(8);
        let trials = 10_000;
        let grouped = (0..trials)
            .filter(|_| random_groups(&[0, 1], 2, 0.5, &mut rng)[0].len() == 2)
            .count();
        // 3 sigma of Binomial(10^4, 1/2) is 150
        assert!((grouped as i64 - 5000).abs() <= 150, "{grouped}");
    }

    #[test]
    fn extremes() {
        let mut rng = seeded(0);
        let none = random_groups(&[0, 1, 2], 3, 0.0, &mut rng);
        assert_eq!(none, vec![vec![0], vec![1], vec![2]]);
        let all = random_groups(&[0, 2], 3, 1.0, &mut rng);
        assert_eq!(all, vec![vec![0, 2], vec![], vec![0, 2]]);
        assert!(RandomAbsParams::new(1.5).is_err());
    }

    proptest! {
        #[test]
        fn random_relation_is_reflexive_and_symmetric(seed: u64, n in 1usize..9, p in 0.0f64..=1.0) {
            let cands: Vec<usize> = (0..n).collect();
            let g = random_groups(&cands, n, p, &mut seeded(seed));
            for i in 0..n {
                prop_assert!(g[i].contains(&i));
                for &j in &g[i] {
                    prop_assert!(g[j].contains(&i));
                }
            }
        }
    }
}
