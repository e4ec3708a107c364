//! Scores over (environment, budget) tasks from result records.

use serde::Serialize;

use super::experiment::ResultRecord;
use crate::error::{Error, Result};
use crate::stats::{agent_scores, pairings_matrix, relative_matrix, PerformanceTable};

/// One row of the scores CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgentScore {
    pub agent: String,
    pub params: String,
    pub pairings_score: f64,
    pub relative_score: f64,
}

/// Best parameter combination of one agent family under each score.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyTop {
    pub agent: String,
    pub best_pairings_params: String,
    pub best_pairings_score: f64,
    pub best_relative_params: String,
    pub best_relative_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    /// `(agent, params)` in first-appearance order; rows of the matrices.
    pub agents: Vec<(String, String)>,
    /// `(env, iterations)` in first-appearance order.
    pub tasks: Vec<(String, usize)>,
    pub pairings: Vec<Vec<f64>>,
    pub relative: Vec<Vec<f64>>,
    pub scores: Vec<AgentScore>,
    pub top_per_family: Vec<FamilyTop>,
}

fn index_of<T: PartialEq + Clone>(list: &mut Vec<T>, item: &T) -> usize {
    list.iter().position(|x| x == item).unwrap_or_else(|| {
        list.push(item.clone());
        list.len() - 1
    })
}

pub fn compute_scores(records: &[ResultRecord]) -> Result<ScoreReport> {
    let mut agents: Vec<(String, String)> = Vec::new();
    let mut tasks: Vec<(String, usize)> = Vec::new();
    let mut cells = Vec::with_capacity(records.len());
    for r in records {
        let a = index_of(&mut agents, &(r.agent.clone(), r.params.clone()));
        let t = index_of(&mut tasks, &(r.env.clone(), r.iterations));
        cells.push((a, t, r.mean_return));
    }
    let mut perf = vec![vec![None; tasks.len()]; agents.len()];
    for (a, t, v) in cells {
        if perf[a][t].replace(v).is_some() {
            return Err(Error::invalid(format!(
                "duplicate record for {} [{}] on {} @ {}",
                agents[a].0, agents[a].1, tasks[t].0, tasks[t].1
            )));
        }
    }
    let mut filled = Vec::with_capacity(agents.len());
    for (a, row) in perf.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (t, v) in row.into_iter().enumerate() {
            out.push(v.ok_or_else(|| Error::MissingCell {
                agent: format!("{} [{}]", agents[a].0, agents[a].1),
                task: format!("{} @ {}", tasks[t].0, tasks[t].1),
            })?);
        }
        filled.push(out);
    }
    let table = PerformanceTable::new(filled)?;
    let pairings = pairings_matrix(&table);
    let relative = relative_matrix(&table);
    let ps = agent_scores(&pairings);
    let rs = agent_scores(&relative);
    let scores: Vec<AgentScore> = agents
        .iter()
        .enumerate()
        .map(|(i, (agent, params))| AgentScore {
            agent: agent.clone(),
            params: params.clone(),
            pairings_score: ps[i],
            relative_score: rs[i],
        })
        .collect();

    let mut families: Vec<String> = Vec::new();
    for (agent, _) in &agents {
        index_of(&mut families, agent);
    }
    let top_per_family = families
        .into_iter()
        .map(|family| {
            let members: Vec<&AgentScore> = scores.iter().filter(|s| s.agent == family).collect();
            // first maximum wins, so ties resolve to the earliest record
            let best = |key: fn(&AgentScore) -> f64| {
                members
                    .iter()
                    .copied()
                    .fold(members[0], |b, s| if key(s) > key(b) { s } else { b })
            };
            let bp = best(|s| s.pairings_score);
            let br = best(|s| s.relative_score);
            FamilyTop {
                agent: family,
                best_pairings_params: bp.params.clone(),
                best_pairings_score: bp.pairings_score,
                best_relative_params: br.params.clone(),
                best_relative_score: br.relative_score,
            }
        })
        .collect();

    Ok(ScoreReport {
        agents,
        tasks,
        pairings: pairings.entries,
        relative: relative.entries,
        scores,
        top_per_family,
    })
}
