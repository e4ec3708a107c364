//! Experiment orchestration: configs, episode batches, sweeps, scores and
//! decision timing.

pub mod config;
pub mod experiment;
pub mod io;
pub mod planner;
pub mod scores;
pub mod timing;

pub use config::{AgentKind, AgentSpec, BenchConfig, EnvSpec, Environment, ExperimentConfig, GridEntry, SweepConfig};
pub use experiment::{run_experiment, summarize_returns, sweep, EpisodeReturn, ExperimentOutput, ResultRecord};
pub use planner::{plan_decision, Planner};
pub use scores::{compute_scores, AgentScore, FamilyTop, ScoreReport};
pub use timing::{random_walk_state, run_bench, time_decisions, TimingRecord};
