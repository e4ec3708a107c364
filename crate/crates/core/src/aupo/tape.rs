use crate::mdp::{discounted_return, truncated_return, ActionId};

/// Per-root-action reward samples at depths `1..=depth`, plus returns.
///
/// Each recorded trajectory is stored as one row `[r_1, …, r_depth, full
/// return]`; the return truncated at `depth` is the sum of the first
/// `depth` entries. All columns of one action have the same length.
#[derive(Clone, Debug)]
pub struct RewardTape {
    depth: usize,
    /// Row-major samples per action, `depth + 1` values per row.
    rows: Vec<Vec<f64>>,
}

/// Sample mean and Bessel-corrected standard deviation of one column
/// (`None` below two samples).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnMoments {
    pub mean: f64,
    pub std: Option<f64>,
}

impl RewardTape {
    pub fn new(actions: usize, depth: usize) -> Self {
        assert!(depth >= 1, "tape depth must be at least 1");
        Self {
            depth,
            rows: vec![Vec::new(); actions],
        }
    }

    pub fn with_capacity(actions: usize, depth: usize, per_action: usize) -> Self {
        let mut tape = Self::new(actions, depth);
        for row in &mut tape.rows {
            row.reserve(per_action * (depth + 1));
        }
        tape
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn actions(&self) -> usize {
        self.rows.len()
    }

    fn stride(&self) -> usize {
        self.depth + 1
    }

    /// Logs the reward sequence of one trajectory whose first action was
    /// `action`. Depths past the end of the trajectory receive 0.
    pub fn record(&mut self, action: ActionId, rewards: &[f64], discount: f64) {
        debug_assert!(!rewards.is_empty(), "trajectory without rewards");
        let depth = self.depth;
        let row = &mut self.rows[action];
        row.extend((0..depth).map(|d| rewards.get(d).copied().unwrap_or(0.0)));
        row.push(discounted_return(rewards.iter().copied(), discount));
    }

    fn column(&self, action: ActionId, offset: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.rows[action]
            .chunks_exact(self.stride())
            .map(move |row| row[offset])
    }

    /// Samples at depth `d` (1-based) for `action`.
    pub fn samples(&self, d: usize, action: ActionId) -> impl ExactSizeIterator<Item = f64> + '_ {
        assert!((1..=self.depth).contains(&d), "depth {d} outside 1..={}", self.depth);
        self.column(action, d - 1)
    }

    /// Returns over the first `depth` rewards.
    pub fn truncated_returns(&self, action: ActionId) -> impl ExactSizeIterator<Item = f64> + '_ {
        let depth = self.depth;
        self.rows[action]
            .chunks_exact(self.stride())
            .map(move |row| truncated_return(row, depth))
    }

    /// Whole-trajectory (discounted) returns.
    pub fn full_returns(&self, action: ActionId) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.column(action, self.depth)
    }

    pub fn count(&self, action: ActionId) -> usize {
        self.rows[action].len() / self.stride()
    }

    pub fn total(&self) -> usize {
        (0..self.actions()).map(|a| self.count(a)).sum()
    }

    /// Moments of every column of `action` in one pass: depths `1..=depth`,
    /// then truncated and full returns. Empty when the action has no
    /// samples.
    pub fn moments(&self, action: ActionId) -> Vec<ColumnMoments> {
        let stride = self.stride();
        let depth = self.depth;
        let data = &self.rows[action];
        let n = data.len() / stride;
        if n == 0 {
            return Vec::new();
        }
        let cols = depth + 2;
        // columns: depths, truncated return, full return
        let value = |row: &[f64], c: usize| match c {
            c if c < depth => row[c],
            c if c == depth => truncated_return(row, depth),
            _ => row[depth],
        };
        // shifted by the first row to avoid cancellation
        let first = &data[..stride];
        let shift: Vec<f64> = (0..cols).map(|c| value(first, c)).collect();
        let mut sum = vec![0.0; cols];
        let mut sum_sq = vec![0.0; cols];
        for row in data.chunks_exact(stride) {
            let mut truncated = 0.0;
            for c in 0..depth {
                truncated += row[c];
                let x = row[c] - shift[c];
                sum[c] += x;
                sum_sq[c] += x * x;
            }
            for (c, v) in [(depth, truncated), (depth + 1, row[depth])] {
                let x = v - shift[c];
                sum[c] += x;
                sum_sq[c] += x * x;
            }
        }
        let nf = n as f64;
        (0..cols)
            .map(|c| ColumnMoments {
                mean: shift[c] + sum[c] / nf,
                std: (n >= 2).then(|| ((sum_sq[c] - sum[c] * sum[c] / nf) / (nf - 1.0)).max(0.0).sqrt()),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn short_trajectory_is_zero_padded() {
        let mut t = RewardTape::new(2, 3);
        t.record(1, &[5.0], 1.0);
        assert_eq!(t.samples(1, 1).collect::<Vec<_>>(), [5.0]);
        assert_eq!(t.samples(2, 1).collect::<Vec<_>>(), [0.0]);
        assert_eq!(t.samples(3, 1).collect::<Vec<_>>(), [0.0]);
        assert_eq!(t.truncated_returns(1).collect::<Vec<_>>(), [5.0]);
        assert_eq!(t.count(0), 0);
        assert!(t.moments(0).is_empty());
    }

    #[test]
    fn moments_match_two_pass() {
        let mut t = RewardTape::new(1, 2);
        let trajs = [[1e6 + 1.0, 3.0], [1e6 + 2.0, -1.0], [1e6 + 4.0, 0.5]];
        for r in &trajs {
            t.record(0, r, 1.0);
        }
        let m = t.moments(0);
        assert_eq!(m.len(), 4);
        for (c, col) in [
            t.samples(1, 0).collect::<Vec<_>>(),
            t.samples(2, 0).collect(),
            t.truncated_returns(0).collect(),
            t.full_returns(0).collect(),
        ]
        .into_iter()
        .enumerate()
        {
            let v = col;
            let (mean, std) = crate::aupo::sample_mean_std(&v).unwrap();
            assert!((m[c].mean - mean).abs() < 1e-9 * mean.abs().max(1.0));
            assert!((m[c].std.unwrap() - std.unwrap()).abs() < 1e-9);
        }
        let mut one = RewardTape::new(1, 1);
        one.record(0, &[2.0], 1.0);
        assert_eq!(one.moments(0)[0], ColumnMoments { mean: 2.0, std: None });
    }

    #[test]
    fn long_trajectory_is_truncated() {
        let mut t = RewardTape::new(1, 3);
        t.record(0, &[1.0, 2.0, 3.0, 4.0, 5.0], 1.0);
        assert_eq!(t.samples(1, 0).collect::<Vec<_>>(), [1.0]);
        assert_eq!(t.samples(2, 0).collect::<Vec<_>>(), [2.0]);
        assert_eq!(t.samples(3, 0).collect::<Vec<_>>(), [3.0]);
        assert_eq!(t.truncated_returns(0).collect::<Vec<_>>(), [6.0]);
        assert_eq!(t.full_returns(0).collect::<Vec<_>>(), [15.0]);
    }

    #[test]
    fn depth_one() {
        let mut t = RewardTape::new(1, 1);
        t.record(0, &[7.0, 9.0], 1.0);
        assert_eq!(t.samples(1, 0).collect::<Vec<_>>(), [7.0]);
        assert_eq!(t.truncated_returns(0).collect::<Vec<_>>(), [7.0]);
    }

    proptest! {
        #[test]
        fn shape_invariant(
            trajs in prop::collection::vec((0usize..4, prop::collection::vec(-10.0f64..10.0, 1..8)), 0..60),
            depth in 1usize..5,
        ) {
            let mut t = RewardTape::new(4, depth);
            for (a, rs) in &trajs {
                t.record(*a, rs, 1.0);
            }
            prop_assert_eq!(t.total(), trajs.len());
            for a in 0..4 {
                for d in 1..=depth {
                    prop_assert_eq!(t.samples(d, a).len(), t.count(a));
                }
                prop_assert_eq!(t.full_returns(a).len(), t.count(a));
            }
        }
    }
}
