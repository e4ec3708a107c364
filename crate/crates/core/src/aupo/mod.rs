//! Root action abstraction from layerwise reward statistics.
//!
//! During search every sampled trajectory is logged into a [`RewardTape`]
//! under its root action: the rewards at depths `1..=D` (zero-padded when the
//! trajectory ended early) and the return over those depths. Two root
//! actions are grouped unless some pair of their confidence intervals is
//! disjoint. The decision then picks the group with the best pooled Q value
//! and, inside it, the action with the best own Q value.

mod abstraction;
mod interval;
mod tape;

pub use abstraction::{
    actions_grouped, aupo_decide, build_abstraction, two_step_select, AbstractionResult, AupoParams, TapeIntervals,
};
pub use interval::{
    intervals_overlap, mean_conf_interval, mean_interval_known_std, sample_mean_std, std_conf_interval, Confidence,
    Interval,
};
pub use tape::{ColumnMoments, RewardTape};
