use serde::{Deserialize, Serialize};

use super::interval::{mean_interval_from, std_interval_from, Confidence, Interval};
use super::tape::{ColumnMoments, RewardTape};
use crate::error::{Error, Result};
use crate::mcts::{RootStat, SearchTree};
use crate::mdp::ActionId;
use crate::rng::{argmax_set, pick_uniform, SimRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AupoParams {
    /// Confidence level in [0, 1].
    pub q: f64,
    /// Number of layers compared (distribution tracking depth).
    pub depth: usize,
    /// Return filter: also compare return intervals.
    #[serde(default)]
    pub rf: bool,
    /// Std filter: also compare standard deviation intervals.
    #[serde(default)]
    pub sf: bool,
    /// Compare whole-trajectory returns instead of returns truncated at
    /// `depth` under the return filter.
    #[serde(default)]
    pub rf_full_return: bool,
}

impl AupoParams {
    pub fn new(q: f64, depth: usize) -> Self {
        Self {
            q,
            depth,
            rf: false,
            sf: false,
            rf_full_return: false,
        }
    }

    pub fn with_filters(mut self, rf: bool, sf: bool) -> Self {
        self.rf = rf;
        self.sf = sf;
        self
    }

    pub fn validate(&self) -> Result<()> {
        Confidence::new(self.q)?;
        if self.depth == 0 {
            return Err(Error::invalid("AUPO depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct ActionIntervals {
    mean: Vec<Interval>,
    std: Vec<Interval>,
    ret_mean: Interval,
    ret_std: Interval,
}

/// All confidence intervals of a tape, computed once.
#[derive(Clone, Debug)]
pub struct TapeIntervals {
    rf: bool,
    sf: bool,
    per_action: Vec<Option<ActionIntervals>>,
}

impl TapeIntervals {
    pub fn new(tape: &RewardTape, params: &AupoParams) -> Result<Self> {
        Self::build(tape, params, None::<fn(usize, ActionId) -> f64>)
    }

    /// Mean intervals use `oracle_std(depth, action)` in place of the sample
    /// standard deviation. Std and return intervals stay empirical.
    pub fn with_oracle_std<F>(tape: &RewardTape, params: &AupoParams, oracle_std: F) -> Result<Self>
    where
        F: Fn(usize, ActionId) -> f64,
    {
        Self::build(tape, params, Some(oracle_std))
    }

    fn build<F>(tape: &RewardTape, params: &AupoParams, oracle: Option<F>) -> Result<Self>
    where
        F: Fn(usize, ActionId) -> f64,
    {
        params.validate()?;
        if params.depth > tape.depth() {
            return Err(Error::invalid(format!(
                "AUPO depth {} exceeds tape depth {}",
                params.depth,
                tape.depth()
            )));
        }
        let conf = Confidence::new(params.q)?;
        let mut per_action = Vec::with_capacity(tape.actions());
        for a in 0..tape.actions() {
            let n = tape.count(a);
            if n == 0 {
                per_action.push(None);
                continue;
            }
            let moments = tape.moments(a);
            let mut mean = Vec::with_capacity(params.depth);
            let mut std = Vec::with_capacity(if params.sf { params.depth } else { 0 });
            for d in 1..=params.depth {
                let ColumnMoments { mean: m, std: s } = moments[d - 1];
                let sigma = match &oracle {
                    Some(f) => Some(f(d, a)),
                    None => s,
                };
                mean.push(mean_interval_from(m, sigma, n, conf));
                if params.sf {
                    std.push(std_interval_from(s, n, conf));
                }
            }
            let (ret_mean, ret_std) = if params.rf {
                let ret = moments[tape.depth() + usize::from(params.rf_full_return)];
                (
                    mean_interval_from(ret.mean, ret.std, n, conf),
                    std_interval_from(ret.std, n, conf),
                )
            } else {
                (Interval::EVERYTHING, Interval::EVERYTHING)
            };
            per_action.push(Some(ActionIntervals {
                mean,
                std,
                ret_mean,
                ret_std,
            }));
        }
        Ok(Self {
            rf: params.rf,
            sf: params.sf,
            per_action,
        })
    }

    /// Grouping relation. Actions without samples are grouped only with
    /// themselves.
    pub fn grouped(&self, j: ActionId, k: ActionId) -> bool {
        if j == k {
            return true;
        }
        let (Some(a), Some(b)) = (&self.per_action[j], &self.per_action[k]) else {
            return false;
        };
        for d in 0..a.mean.len() {
            if !a.mean[d].overlaps(&b.mean[d]) {
                return false;
            }
            if self.sf && !a.std[d].overlaps(&b.std[d]) {
                return false;
            }
        }
        if self.rf {
            if !a.ret_mean.overlaps(&b.ret_mean) {
                return false;
            }
            if self.sf && !a.ret_std.overlaps(&b.ret_std) {
                return false;
            }
        }
        true
    }

    pub fn mean_interval(&self, d: usize, action: ActionId) -> Option<Interval> {
        self.per_action[action].as_ref().map(|a| a.mean[d - 1])
    }

    pub fn std_interval(&self, d: usize, action: ActionId) -> Option<Interval> {
        self.per_action[action].as_ref().and_then(|a| a.std.get(d - 1).copied())
    }
}

/// Whether `j` and `k` end up in each other's abstraction.
pub fn actions_grouped(tape: &RewardTape, j: ActionId, k: ActionId, params: &AupoParams) -> Result<bool> {
    if tape.count(j) == 0 || tape.count(k) == 0 {
        return Err(Error::EmptySamples);
    }
    Ok(TapeIntervals::new(tape, params)?.grouped(j, k))
}

/// Groups and pooled Q values per root action.
///
/// `groups[i]` lists, in increasing order, every action grouped with `i`.
/// The relation is reflexive and symmetric but need not be transitive.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractionResult {
    pub groups: Vec<Vec<ActionId>>,
    pub abstract_q: Vec<f64>,
}

fn pooled_q(group: &[ActionId], root: &[RootStat]) -> f64 {
    let (mut value, mut visits) = (0.0, 0u64);
    for &j in group {
        value += root[j].return_sum;
        visits += root[j].visits;
    }
    value / visits as f64
}

fn groups_over(intervals: &TapeIntervals, candidates: &[ActionId], actions: usize) -> Vec<Vec<ActionId>> {
    let mut groups = vec![Vec::new(); actions];
    for &i in candidates {
        groups[i] = candidates
            .iter()
            .copied()
            .filter(|&j| intervals.grouped(i, j))
            .collect();
    }
    groups
}

/// Builds the abstraction over all root actions. Every action must have
/// been visited and logged on the tape.
pub fn build_abstraction(tape: &RewardTape, root: &[RootStat], params: &AupoParams) -> Result<AbstractionResult> {
    if root.len() != tape.actions() {
        return Err(Error::invalid("root statistics and tape disagree on the action count"));
    }
    if root
        .iter()
        .enumerate()
        .any(|(a, s)| s.visits == 0 || tape.count(a) == 0)
    {
        return Err(Error::NoVisitedAction);
    }
    let intervals = TapeIntervals::new(tape, params)?;
    let all: Vec<ActionId> = (0..root.len()).collect();
    let groups = groups_over(&intervals, &all, root.len());
    let abstract_q = groups.iter().map(|g| pooled_q(g, root)).collect();
    Ok(AbstractionResult { groups, abstract_q })
}

/// Picks the action with the best pooled Q value (ties uniform), then the
/// action with the best own Q value inside its group (ties uniform).
///
/// `groups` is indexed by action; only `candidates` are considered in the
/// first step.
pub fn two_step_select(
    candidates: &[ActionId],
    groups: &[Vec<ActionId>],
    root: &[RootStat],
    rng: &mut SimRng,
) -> Result<ActionId> {
    if candidates.is_empty() {
        return Err(Error::NoVisitedAction);
    }
    let best = argmax_set(candidates.iter().map(|&c| (c, pooled_q(&groups[c], root))));
    let leader = pick_uniform(&best, rng);
    let ground = argmax_set(groups[leader].iter().map(|&j| (j, root[j].q())));
    Ok(pick_uniform(&ground, rng))
}

/// The abstraction-aware decision at the root of a finished search.
pub fn aupo_decide<S>(
    tree: &SearchTree<S>,
    tape: &RewardTape,
    params: &AupoParams,
    rng: &mut SimRng,
) -> Result<ActionId> {
    let root = tree.root_stats();
    let candidates: Vec<ActionId> = (0..root.len())
        .filter(|&a| root[a].visits > 0 && tape.count(a) > 0)
        .collect();
    if candidates.is_empty() {
        return Err(Error::NoVisitedAction);
    }
    let intervals = TapeIntervals::new(tape, params)?;
    let groups = groups_over(&intervals, &candidates, root.len());
    two_step_select(&candidates, &groups, &root, rng)
}
