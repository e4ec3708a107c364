//! JSON experiment configuration. Unknown keys are rejected.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::aupo::AupoParams;
use crate::baselines::RandomAbsParams;
use crate::env::{GameOfLife, GaussianBandit, LayeredGaussian, LayeredGaussianSpec, SysAdmin, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::mcts::{MctsConfig, RootPolicy};
use crate::mdp::{ActionId, Mdp, Transition};
use crate::rng::SimRng;

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

fn default_discount() -> f64 {
    1.0
}

fn default_episodes() -> usize {
    2000
}

fn default_reboot_cost() -> f64 {
    crate::env::DEFAULT_REBOOT_COST
}

fn default_fidelity() -> f64 {
    crate::env::DEFAULT_RULE_FIDELITY
}

fn default_density() -> f64 {
    0.5
}

fn default_c() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvSpec {
    GaussianMab {
        #[serde(default)]
        name: Option<String>,
        means: Vec<f64>,
        stds: Vec<f64>,
    },
    /// Star topology: machine 0 is the hub, machines 1..=outer the leaves.
    SysadminHub {
        #[serde(default)]
        name: Option<String>,
        outer: usize,
        #[serde(default = "default_reboot_cost")]
        reboot_cost: f64,
        #[serde(default)]
        initial_down: Vec<usize>,
    },
    GameOfLife {
        #[serde(default)]
        name: Option<String>,
        width: usize,
        height: usize,
        #[serde(default = "default_fidelity")]
        rule_fidelity: f64,
        /// Live `[x, y]` cells; a random grid of `density` otherwise.
        #[serde(default)]
        initial_cells: Option<Vec<(usize, usize)>>,
        #[serde(default = "default_density")]
        density: f64,
    },
    LayeredGaussian {
        #[serde(default)]
        name: Option<String>,
        /// `[depth][action]`.
        means: Vec<Vec<f64>>,
        stds: Vec<Vec<f64>>,
    },
}

impl EnvSpec {
    /// Identifier used in result files.
    pub fn id(&self) -> String {
        match self {
            EnvSpec::GaussianMab { name: Some(n), .. }
            | EnvSpec::SysadminHub { name: Some(n), .. }
            | EnvSpec::GameOfLife { name: Some(n), .. }
            | EnvSpec::LayeredGaussian { name: Some(n), .. } => n.clone(),
            EnvSpec::GaussianMab { means, .. } => format!("mab{}", means.len()),
            EnvSpec::SysadminHub { outer, .. } => format!("sysadmin_hub{outer}"),
            EnvSpec::GameOfLife { width, height, .. } => format!("life{width}x{height}"),
            EnvSpec::LayeredGaussian { means, .. } => {
                format!("layered{}x{}", means.len(), means.first().map_or(0, Vec::len))
            }
        }
    }

    pub fn build(&self, horizon: usize, discount: f64) -> Result<Environment> {
        if horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if !(discount > 0.0 && discount <= 1.0) {
            return Err(Error::Config(format!("discount {discount} outside (0, 1]")));
        }
        let kind = match self {
            EnvSpec::GaussianMab { means, stds, .. } => {
                EnvKind::Bandit(GaussianBandit::new(means.clone(), stds.clone())?.with_horizon(horizon))
            }
            EnvSpec::SysadminHub {
                outer,
                reboot_cost,
                initial_down,
                ..
            } => EnvKind::SysAdmin(
                SysAdmin::hub(*outer, *reboot_cost)?
                    .with_initial_down(initial_down)?
                    .with_horizon(horizon),
            ),
            EnvSpec::GameOfLife {
                width,
                height,
                rule_fidelity,
                initial_cells,
                density,
                ..
            } => {
                let game = GameOfLife::new(*width, *height, *rule_fidelity)?;
                let game = match initial_cells {
                    Some(cells) => game.with_initial_cells(cells)?,
                    None => game.with_random_initial(*density)?,
                };
                EnvKind::Life(game.with_horizon(horizon))
            }
            EnvSpec::LayeredGaussian { means, stds, .. } => {
                let spec = LayeredGaussianSpec {
                    means: means.clone(),
                    stds: stds.clone(),
                };
                EnvKind::Layered(LayeredGaussian::new(spec, horizon)?)
            }
        };
        Ok(Environment {
            id: self.id(),
            discount,
            kind,
        })
    }
}

/// An environment whose discount is set by the experiment.
#[derive(Clone, Debug)]
pub struct Discounted<M> {
    pub inner: M,
    pub discount: f64,
}

impl<M: Mdp> Mdp for Discounted<M> {
    type State = M::State;

    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    fn discount(&self) -> f64 {
        self.discount
    }

    fn initial_state(&self, rng: &mut SimRng) -> Self::State {
        self.inner.initial_state(rng)
    }

    fn num_actions(&self, state: &Self::State) -> usize {
        self.inner.num_actions(state)
    }

    fn step(&self, state: &Self::State, action: ActionId, rng: &mut SimRng) -> Transition<Self::State> {
        self.inner.step(state, action, rng)
    }

    fn action_label(&self, state: &Self::State, action: ActionId) -> String {
        self.inner.action_label(state, action)
    }
}

#[derive(Clone, Debug)]
pub enum EnvKind {
    Bandit(GaussianBandit),
    SysAdmin(SysAdmin),
    Life(GameOfLife),
    Layered(LayeredGaussian),
}

#[derive(Clone, Debug)]
pub struct Environment {
    pub id: String,
    pub discount: f64,
    pub kind: EnvKind,
}

/// Something generic over the concrete environment type.
pub trait EnvVisitor {
    type Output;
    fn visit<M>(self, model: &Discounted<M>, id: &str) -> Self::Output
    where
        M: Mdp + Clone + Sync,
        M::State: Send + Sync;
}

impl Environment {
    pub fn visit<V: EnvVisitor>(&self, visitor: V) -> V::Output {
        let d = self.discount;
        match &self.kind {
            EnvKind::Bandit(m) => visitor.visit(
                &Discounted {
                    inner: m.clone(),
                    discount: d,
                },
                &self.id,
            ),
            EnvKind::SysAdmin(m) => visitor.visit(
                &Discounted {
                    inner: m.clone(),
                    discount: d,
                },
                &self.id,
            ),
            EnvKind::Life(m) => visitor.visit(
                &Discounted {
                    inner: m.clone(),
                    discount: d,
                },
                &self.id,
            ),
            EnvKind::Layered(m) => visitor.visit(
                &Discounted {
                    inner: m.clone(),
                    discount: d,
                },
                &self.id,
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Mcts,
    Aupo,
    RandomAbs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub kind: AgentKind,
    #[serde(default)]
    pub root_policy: RootPolicy,
    #[serde(default = "default_c", alias = "exploration_C")]
    pub exploration_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aupo: Option<AupoParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_random: Option<f64>,
}

impl AgentSpec {
    pub fn mcts(exploration_c: f64, root_policy: RootPolicy) -> Self {
        Self {
            kind: AgentKind::Mcts,
            root_policy,
            exploration_c,
            aupo: None,
            p_random: None,
        }
    }

    pub fn aupo(exploration_c: f64, root_policy: RootPolicy, params: AupoParams) -> Self {
        Self {
            kind: AgentKind::Aupo,
            root_policy,
            exploration_c,
            aupo: Some(params),
            p_random: None,
        }
    }

    pub fn random_abs(exploration_c: f64, root_policy: RootPolicy, p_random: f64) -> Self {
        Self {
            kind: AgentKind::RandomAbs,
            root_policy,
            exploration_c,
            aupo: None,
            p_random: Some(p_random),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        match self.kind {
            AgentKind::Aupo if self.aupo.is_none() => return bad("aupo agents need `aupo` parameters"),
            AgentKind::RandomAbs if self.p_random.is_none() => return bad("random_abs agents need `p_random`"),
            _ => {}
        }
        if self.kind != AgentKind::Aupo && self.aupo.is_some() {
            return bad("`aupo` parameters are only allowed for aupo agents");
        }
        if self.kind != AgentKind::RandomAbs && self.p_random.is_some() {
            return bad("`p_random` is only allowed for random_abs agents");
        }
        if let Some(p) = &self.aupo {
            p.validate()?;
        }
        if let Some(p) = self.p_random {
            RandomAbsParams::new(p)?;
        }
        self.search_config(1).validate()
    }

    pub fn search_config(&self, iterations: usize) -> MctsConfig {
        MctsConfig::new(self.exploration_c, iterations).with_root_policy(self.root_policy)
    }

    /// `MCTS`, `U-MCTS`, `AUPO`, `U-AUPO`, `RANDOM-ABS` or `U-RANDOM-ABS`.
    pub fn id(&self) -> String {
        let base = match self.kind {
            AgentKind::Mcts => "MCTS",
            AgentKind::Aupo => "AUPO",
            AgentKind::RandomAbs => "RANDOM-ABS",
        };
        match self.root_policy {
            RootPolicy::Ucb => base.to_string(),
            RootPolicy::Uniform => format!("U-{base}"),
        }
    }

    /// e.g. `C=1;q=0.95;D=2;RF=1;SF=0`.
    pub fn params(&self) -> String {
        let mut s = format!("C={}", self.exploration_c);
        if let Some(p) = &self.aupo {
            s += &format!(";q={};D={};RF={};SF={}", p.q, p.depth, p.rf as u8, p.sf as u8);
            if p.rf_full_return {
                s += ";RFfull=1";
            }
        }
        if let Some(p) = self.p_random {
            s += &format!(";p={p}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: EnvSpec,
    pub agents: Vec<AgentSpec>,
    /// Iterations per decision; one task per budget.
    pub budgets: Vec<usize>,
    #[serde(default = "default_episodes")]
    pub episodes: usize,
    pub seed: u64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_discount")]
    pub discount: f64,
}

fn check_budgets(budgets: &[usize]) -> Result<()> {
    if budgets.is_empty() || budgets.contains(&0) {
        return Err(Error::Config(
            "budgets must be a non-empty list of positive iteration counts".into(),
        ));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::Config("episodes must be at least 1".into()));
        }
        if self.agents.is_empty() {
            return Err(Error::Config("no agents configured".into()));
        }
        check_budgets(&self.budgets)?;
        self.agents.iter().try_for_each(AgentSpec::validate)?;
        self.environment.build(self.horizon, self.discount).map(|_| ())
    }
}

/// Lists of values whose Cartesian product defines the agents of a sweep.
/// Lists irrelevant to a kind are ignored for that kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub kind: AgentKind,
    #[serde(default = "default_policies")]
    pub root_policy: Vec<RootPolicy>,
    #[serde(default = "default_cs", alias = "exploration_C")]
    pub exploration_c: Vec<f64>,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub depth: Vec<usize>,
    #[serde(default = "default_flags")]
    pub rf: Vec<bool>,
    #[serde(default = "default_flags")]
    pub sf: Vec<bool>,
    #[serde(default)]
    pub p_random: Vec<f64>,
}

fn default_policies() -> Vec<RootPolicy> {
    vec![RootPolicy::Ucb]
}

fn default_cs() -> Vec<f64> {
    vec![1.0]
}

fn default_flags() -> Vec<bool> {
    vec![false]
}

impl GridEntry {
    pub fn expand(&self) -> Result<Vec<AgentSpec>> {
        let empty = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::Config(format!("grid list `{name}` is empty")))
            } else {
                Ok(())
            }
        };
        empty("root_policy", self.root_policy.len())?;
        empty("exploration_c", self.exploration_c.len())?;
        let mut out = Vec::new();
        for &policy in &self.root_policy {
            for &c in &self.exploration_c {
                match self.kind {
                    AgentKind::Mcts => out.push(AgentSpec::mcts(c, policy)),
                    AgentKind::RandomAbs => {
                        empty("p_random", self.p_random.len())?;
                        out.extend(self.p_random.iter().map(|&p| AgentSpec::random_abs(c, policy, p)));
                    }
                    AgentKind::Aupo => {
                        for (name, len) in [
                            ("q", self.q.len()),
                            ("depth", self.depth.len()),
                            ("rf", self.rf.len()),
                            ("sf", self.sf.len()),
                        ] {
                            empty(name, len)?;
                        }
                        for &q in &self.q {
                            for &d in &self.depth {
                                for &rf in &self.rf {
                                    for &sf in &self.sf {
                                        let params = AupoParams::new(q, d).with_filters(rf, sf);
                                        out.push(AgentSpec::aupo(c, policy, params));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub environments: Vec<EnvSpec>,
    pub grid: Vec<GridEntry>,
    pub budgets: Vec<usize>,
    #[serde(default = "default_episodes")]
    pub episodes: usize,
    pub seed: u64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_discount")]
    pub discount: f64,
}

impl SweepConfig {
    pub fn agents(&self) -> Result<Vec<AgentSpec>> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        let mut agents = Vec::new();
        for entry in &self.grid {
            agents.extend(entry.expand()?);
        }
        Ok(agents)
    }

    /// One experiment per environment, all sharing the expanded agents.
    pub fn experiments(&self) -> Result<Vec<ExperimentConfig>> {
        if self.environments.is_empty() {
            return Err(Error::Config("sweep has no environments".into()));
        }
        let agents = self.agents()?;
        let configs: Vec<ExperimentConfig> = self
            .environments
            .iter()
            .map(|env| ExperimentConfig {
                environment: env.clone(),
                agents: agents.clone(),
                budgets: self.budgets.clone(),
                episodes: self.episodes,
                seed: self.seed,
                horizon: self.horizon,
                discount: self.discount,
            })
            .collect();
        configs.iter().try_for_each(ExperimentConfig::validate)?;
        Ok(configs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub environment: EnvSpec,
    pub agents: Vec<AgentSpec>,
    pub budgets: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_discount")]
    pub discount: f64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.agents.is_empty() {
            return Err(Error::Config("no agents configured".into()));
        }
        check_budgets(&self.budgets)?;
        self.agents.iter().try_for_each(AgentSpec::validate)?;
        self.environment.build(self.horizon, self.discount).map(|_| ())
    }
}

/// Reads a JSON config file; parse failures are config errors.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
