//! Time-stepped plan / move / attack loop.
//!
//! At every step the planner sees the (possibly spoofed) reported positions,
//! the agents move toward the planned targets under the motion bound, and
//! active jamming events cut links of the true graph. The realized `lambda2`
//! after jamming is the performance signal.

pub mod metrics;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{
    apply_spoofing, worst_case_removal_with_limit, AdversaryError, RemovalBudget, SearchMode,
    SpoofSpec,
};
use crate::controller::{plan_step, project_motion, ControlError, ControlOptions};
use crate::graph::{
    algebraic_connectivity, remove_links, GraphError, LinkModel, Position, WeightedGraph,
};

pub use metrics::{compute_resilience_metrics, trace_resilience, BaselinePolicy, ResilienceReport};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    #[error("step {step}: {source}")]
    Control {
        step: usize,
        #[source]
        source: ControlError,
    },

    #[error("step {step}: {source}")]
    Attack {
        step: usize,
        #[source]
        source: AdversaryError,
    },

    #[error("step {step}: {source}")]
    Graph {
        step: usize,
        #[source]
        source: GraphError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: String,
    pub layer: String,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JamRealization {
    /// The attacker cuts the links that minimize realized connectivity.
    WorstCase,
    /// Fixed agent-index pairs; pairs without a link are skipped.
    Scripted(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AttackEvent {
    Jam {
        budget: RemovalBudget,
        start: usize,
        end: usize,
        realization: JamRealization,
    },
    Spoof(SpoofSpec),
}

impl AttackEvent {
    /// Half-open active window `[start, end)`.
    pub fn window(&self) -> (usize, usize) {
        match self {
            AttackEvent::Jam { start, end, .. } => (*start, *end),
            AttackEvent::Spoof(s) => (s.start_step, s.end_step()),
        }
    }

    pub fn is_active(&self, step: usize) -> bool {
        let (s, e) = self.window();
        step >= s && step < e
    }

    /// Jamming within the planner's budget is anticipated; spoofing and
    /// over-budget jamming are not.
    pub fn is_anticipated(&self, anticipated: RemovalBudget) -> bool {
        match self {
            AttackEvent::Jam { budget, .. } => *budget <= anticipated,
            AttackEvent::Spoof(_) => false,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AttackEvent::Jam { .. } => "jam",
            AttackEvent::Spoof(_) => "spoof",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub dimension: usize,
    pub agents: Vec<Agent>,
    pub link: LinkModelConfig,
    pub opts: ControlOptions,
    pub steps: usize,
    pub events: Vec<AttackEvent>,
    pub rng_seed: u64,
    pub baseline_policy: BaselinePolicy,
    pub recovery_fraction: f64,
    /// `(from_step, budget)` overrides of the anticipated budget, ascending.
    pub budget_schedule: Vec<(usize, RemovalBudget)>,
    /// Event onset used for the resilience report; defaults to the first
    /// event start.
    pub metrics_onset: Option<usize>,
}

/// Serializable form of [`LinkModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkModelConfig {
    Uniform(crate::graph::WeightProfile),
    PerAgent(Vec<crate::graph::WeightProfile>),
}

impl From<&LinkModelConfig> for LinkModel {
    fn from(c: &LinkModelConfig) -> Self {
        match c {
            LinkModelConfig::Uniform(p) => LinkModel::Uniform(*p),
            LinkModelConfig::PerAgent(ps) => LinkModel::PerAgent(ps.clone()),
        }
    }
}

impl ScenarioConfig {
    pub fn link_model(&self) -> LinkModel {
        LinkModel::from(&self.link)
    }

    pub fn initial_positions(&self) -> Vec<Position> {
        self.agents.iter().map(|a| a.position.clone()).collect()
    }

    pub fn budget_at(&self, step: usize) -> RemovalBudget {
        self.budget_schedule
            .iter()
            .rfind(|(from, _)| *from <= step)
            .map(|(_, b)| *b)
            .unwrap_or(self.opts.anticipated_budget)
    }

    /// Onset for the resilience report, if the scenario has one.
    pub fn onset(&self) -> Option<usize> {
        self.metrics_onset
            .or_else(|| self.events.iter().map(|e| e.window().0).min())
    }

    /// All semantic problems, each prefixed with its field path.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.dimension == 2 || self.dimension == 3) {
            errs.push(format!("dimension: must be 2 or 3, got {}", self.dimension));
        }
        if self.agents.len() < 2 {
            errs.push(format!(
                "agents: need at least 2, got {}",
                self.agents.len()
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (k, a) in self.agents.iter().enumerate() {
            if !seen.insert(a.id.as_str()) {
                errs.push(format!("agents[{k}].id: duplicate agent id '{}'", a.id));
            }
            if a.position.dim() != self.dimension {
                errs.push(format!(
                    "agents[{k}].position: dimension {} but scenario dimension is {}",
                    a.position.dim(),
                    self.dimension
                ));
            }
            if !a.position.is_finite() {
                errs.push(format!("agents[{k}].position: non-finite coordinate"));
            }
        }
        if self.steps == 0 {
            errs.push("steps: must be at least 1".into());
        }
        let link = self.link_model();
        if let Err(e) = link.validate(self.agents.len()) {
            errs.push(format!("profiles: {e}"));
        } else if !link.is_smooth() {
            errs.push("profiles: the controller needs smooth link weights".into());
        } else if let Err(e) = self.opts.validate(&link) {
            errs.push(format!("control: {e}"));
        }
        if !(self.recovery_fraction > 0.0 && self.recovery_fraction <= 1.0) {
            errs.push(format!(
                "metrics.recovery_fraction: must lie in (0, 1], got {}",
                self.recovery_fraction
            ));
        }
        for (k, ev) in self.events.iter().enumerate() {
            let (s, e) = ev.window();
            if s >= e || e > self.steps {
                errs.push(format!(
                    "events[{k}]: window [{s}, {e}) must be non-empty and within [0, {})",
                    self.steps
                ));
            }
            match ev {
                AttackEvent::Spoof(sp) => {
                    if sp.offset.dim() != self.dimension {
                        errs.push(format!("events[{k}].offset: wrong dimension"));
                    }
                    if sp.targets.is_empty() {
                        errs.push(format!("events[{k}].targets: empty"));
                    }
                    for &t in &sp.targets {
                        if t >= self.agents.len() {
                            errs.push(format!("events[{k}].targets: agent index {t} out of range"));
                        }
                    }
                }
                AttackEvent::Jam {
                    realization: JamRealization::Scripted(pairs),
                    ..
                } => {
                    for &(i, j) in pairs {
                        if i >= self.agents.len() || j >= self.agents.len() || i == j {
                            errs.push(format!("events[{k}].links: invalid pair ({i}, {j})"));
                        }
                    }
                }
                AttackEvent::Jam { .. } => {}
            }
        }
        if let Some(t2) = self.metrics_onset {
            if t2 >= self.steps {
                errs.push(format!(
                    "metrics.onset: {t2} is not below steps {}",
                    self.steps
                ));
            }
        }
        if self.budget_schedule.windows(2).any(|w| w[0].0 >= w[1].0) {
            errs.push("budget_schedule: steps must be strictly increasing".into());
        }
        errs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventStatus {
    pub index: usize,
    pub kind: String,
    pub anticipated: bool,
}

/// Everything recorded at one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub step: usize,
    /// Positions after this step's move.
    pub true_positions: Vec<Position>,
    /// Positions the planner saw at the start of the step.
    pub reported_positions: Vec<Position>,
    /// True graph before jamming.
    pub graph: WeightedGraph,
    /// Agent pairs cut by jamming this step.
    pub jammed_links: Vec<(usize, usize)>,
    pub lambda2_realized: f64,
    /// Worst case under the anticipated budget on the true graph.
    pub lambda2_worst_anticipated: f64,
    /// The planner's own prediction (on reported positions).
    pub lambda2_planned: f64,
    pub anticipated_budget: RemovalBudget,
    pub active_events: Vec<EventStatus>,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<StepTrace>, SimError> {
    let errs = cfg.validate();
    if !errs.is_empty() {
        return Err(SimError::InvalidConfig(errs));
    }
    let link = cfg.link_model();
    let mut truth = cfg.initial_positions();
    let mut trace = Vec::with_capacity(cfg.steps);
    for step in 0..cfg.steps {
        let attack = |source| SimError::Attack { step, source };
        let graph_err = |source| SimError::Graph { step, source };

        let mut reported = truth.clone();
        for ev in &cfg.events {
            if let AttackEvent::Spoof(spec) = ev {
                reported = apply_spoofing(&reported, spec, step).map_err(attack)?;
            }
        }

        let budget = cfg.budget_at(step);
        let opts = ControlOptions {
            anticipated_budget: budget,
            ..cfg.opts.clone()
        };
        let plan = plan_step(&reported, &link, &opts)
            .map_err(|source| SimError::Control { step, source })?;
        // Agents execute the commanded displacement from where they believe
        // they are; a spoofed agent therefore lands off its planned target.
        truth = truth
            .iter()
            .zip(&reported)
            .zip(&plan.targets)
            .map(|((x, r), t)| project_motion(x, &(x + &(t - r)), opts.motion_bound))
            .collect();

        let graph = link.build_graph(&truth).map_err(graph_err)?;
        let anticipated = worst_case_removal_with_limit(
            &graph,
            RemovalBudget(budget.m().min(graph.edge_count())),
            opts.search,
            opts.exhaustive_limit,
        )
        .map_err(attack)?;

        let mut attacked = graph.clone();
        let mut jammed = Vec::new();
        let mut active = Vec::new();
        for (index, ev) in cfg.events.iter().enumerate() {
            if !ev.is_active(step) {
                continue;
            }
            active.push(EventStatus {
                index,
                kind: ev.kind_name().into(),
                anticipated: ev.is_anticipated(budget),
            });
            let AttackEvent::Jam {
                budget: m,
                realization,
                ..
            } = ev
            else {
                continue;
            };
            let cut: Vec<usize> = match realization {
                JamRealization::WorstCase => {
                    let m = RemovalBudget(m.m().min(attacked.edge_count()));
                    worst_case_removal_with_limit(&attacked, m, SearchMode::Auto, opts.exhaustive_limit)
                        .map_err(attack)?
                        .removal
                }
                JamRealization::Scripted(pairs) => pairs
                    .iter()
                    .filter_map(|&(i, j)| {
                        let found = attacked.find_edge(i, j);
                        if found.is_none() {
                            warn!("step {step}: event {index} scripted link ({i}, {j}) not present, skipped");
                        }
                        found
                    })
                    .collect(),
            };
            jammed.extend(cut.iter().map(|&k| {
                let e = attacked.edges()[k];
                (e.i, e.j)
            }));
            attacked = remove_links(&attacked, &cut).map_err(graph_err)?;
        }
        let realized = algebraic_connectivity(&attacked).map_err(graph_err)?;

        trace.push(StepTrace {
            step,
            true_positions: truth.clone(),
            reported_positions: reported,
            graph,
            jammed_links: jammed,
            lambda2_realized: realized.lambda2,
            lambda2_worst_anticipated: anticipated.lambda2_after,
            lambda2_planned: plan.predicted_worst_lambda2,
            anticipated_budget: budget,
            active_events: active,
        });
    }
    Ok(trace)
}
