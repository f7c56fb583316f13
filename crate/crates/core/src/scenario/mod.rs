//! Scenario and game-parameter files.
//!
//! Scenarios are TOML documents. Agents are named and belong to a layer;
//! each layer carries a link profile. Events refer to agents by id. Every
//! semantic problem is reported, each with the path of the offending field.

pub mod io;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{RemovalBudget, SearchMode, SpoofSpec};
use crate::controller::{ControlMode, ControlOptions};
use crate::games::{GneParams, PayoffTable, PlantSpec};
use crate::graph::{Position, WeightKind, WeightProfile};
use crate::simulator::metrics::DEFAULT_RECOVERY_FRACTION;
use crate::simulator::{
    Agent, AttackEvent, BaselinePolicy, JamRealization, LinkModelConfig, ScenarioConfig,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: syntax error at line {line}: {message}", path.display())]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {}", path.display(), errors.join("; "))]
    Invalid { path: PathBuf, errors: Vec<String> },
}

impl ConfigError {
    /// Individual validation messages, or the single message otherwise.
    pub fn messages(&self) -> Vec<String> {
        match self {
            ConfigError::Invalid { errors, .. } => errors.clone(),
            other => vec![other.to_string()],
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LayerFile {
    #[serde(default = "default_kind")]
    pub kind: WeightKind,
    /// Communication range in meters.
    pub range: f64,
    /// Weight decay in 1/m^2; defaults to the value giving weight 1e-3 at
    /// the range.
    pub decay: Option<f64>,
}

fn default_kind() -> WeightKind {
    WeightKind::Smooth
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub id: String,
    pub layer: String,
    pub position: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    /// Agents without a position are placed uniformly in
    /// `[-half_width, half_width]` per axis, in meters.
    pub half_width: f64,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ControlFile {
    pub anticipated_budget: Option<usize>,
    pub motion_bound: Option<f64>,
    pub min_separation: Option<f64>,
    pub outer_iters: Option<usize>,
    pub step_size: Option<f64>,
    pub backtrack: Option<f64>,
    pub tol: Option<f64>,
    pub mode: Option<ControlMode>,
    pub search: Option<SearchMode>,
    pub exhaustive_limit: Option<u64>,
    pub surrogate_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RealizationFile {
    #[default]
    WorstCase,
    Scripted,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum EventFile {
    Jam {
        budget: usize,
        start: usize,
        end: usize,
        #[serde(default)]
        realization: RealizationFile,
        /// Agent-id pairs cut by a scripted jam.
        #[serde(default)]
        links: Vec<(String, String)>,
    },
    Spoof {
        targets: Vec<String>,
        /// Reported-position offset in meters.
        offset: Vec<f64>,
        start: usize,
        duration: usize,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum BaselineFile {
    Named(String),
    Fixed(f64),
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsFile {
    pub baseline: Option<BaselineFile>,
    pub recovery_fraction: Option<f64>,
    pub onset: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetChangeFile {
    pub from: usize,
    pub budget: usize,
}

/// Scenario document as written.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub steps: usize,
    #[serde(default)]
    pub rng_seed: u64,
    pub layers: BTreeMap<String, LayerFile>,
    pub agents: Vec<AgentFile>,
    pub layout: Option<LayoutFile>,
    #[serde(default)]
    pub control: ControlFile,
    #[serde(default)]
    pub events: Vec<EventFile>,
    #[serde(default)]
    pub metrics: MetricsFile,
    #[serde(default)]
    pub budget_schedule: Vec<BudgetChangeFile>,
}

fn line_of(text: &str, span: Option<std::ops::Range<usize>>) -> usize {
    span.map_or(0, |s| {
        text[..s.start.min(text.len())].matches('\n').count() + 1
    })
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Syntax {
        path: path.to_path_buf(),
        line: line_of(text, e.span()),
        message: e.message().to_string(),
    })
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl ScenarioFile {
    /// Resolves ids and defaults; collects every problem found.
    pub fn resolve(&self) -> Result<ScenarioConfig, Vec<String>> {
        let mut errs = Vec::new();
        let mut profiles = BTreeMap::new();
        for (name, l) in &self.layers {
            let decay = match (l.kind, l.decay) {
                (WeightKind::Binary, Some(_)) => {
                    errs.push(format!("layers.{name}.decay: binary links take no decay"));
                    0.0
                }
                (WeightKind::Binary, None) => 0.0,
                (WeightKind::Smooth, Some(d)) => d,
                (WeightKind::Smooth, None) if l.range > 0.0 => {
                    WeightProfile::default_decay(l.range)
                }
                (WeightKind::Smooth, None) => 0.0,
            };
            let p = WeightProfile {
                kind: l.kind,
                range: l.range,
                decay,
            };
            match p.validate() {
                Ok(()) => {
                    profiles.insert(name.as_str(), p);
                }
                Err(e) => errs.push(format!("layers.{name}: {e}")),
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        let mut agents = Vec::new();
        let mut agent_profiles = Vec::new();
        for (k, a) in self.agents.iter().enumerate() {
            match profiles.get(a.layer.as_str()) {
                Some(p) => agent_profiles.push(*p),
                None if self.layers.contains_key(&a.layer) => {}
                None => errs.push(format!("agents[{k}].layer: unknown layer '{}'", a.layer)),
            }
            let position = match (&a.position, &self.layout) {
                (Some(p), _) => Position::new(p.clone()),
                (None, Some(l)) if l.half_width.is_finite() && l.half_width > 0.0 => Position::new(
                    (0..self.dimension)
                        .map(|_| rng.random_range(-l.half_width..l.half_width))
                        .collect(),
                ),
                (None, Some(l)) => {
                    errs.push(format!(
                        "layout.half_width: must be positive, got {}",
                        l.half_width
                    ));
                    Position::zeros(self.dimension)
                }
                (None, None) => {
                    errs.push(format!(
                        "agents[{k}].position: missing and no [layout] section"
                    ));
                    Position::zeros(self.dimension)
                }
            };
            agents.push(Agent {
                id: a.id.clone(),
                layer: a.layer.clone(),
                position,
            });
        }
        let index: BTreeMap<&str, usize> = self
            .agents
            .iter()
            .enumerate()
            .rev()
            .map(|(k, a)| (a.id.as_str(), k))
            .collect();
        let lookup = |errs: &mut Vec<String>, path: String, id: &str| -> usize {
            index.get(id).copied().unwrap_or_else(|| {
                errs.push(format!("{path}: unknown agent '{id}'"));
                usize::MAX
            })
        };

        let mut events = Vec::new();
        for (k, ev) in self.events.iter().enumerate() {
            match ev {
                EventFile::Jam {
                    budget,
                    start,
                    end,
                    realization,
                    links,
                } => {
                    let realization = match realization {
                        RealizationFile::WorstCase => {
                            if !links.is_empty() {
                                errs.push(format!(
                                    "events[{k}].links: only scripted jams list links"
                                ));
                            }
                            JamRealization::WorstCase
                        }
                        RealizationFile::Scripted => JamRealization::Scripted(
                            links
                                .iter()
                                .enumerate()
                                .map(|(l, (a, b))| {
                                    let path = format!("events[{k}].links[{l}]");
                                    (
                                        lookup(&mut errs, path.clone(), a),
                                        lookup(&mut errs, path, b),
                                    )
                                })
                                .collect(),
                        ),
                    };
                    events.push(AttackEvent::Jam {
                        budget: RemovalBudget(*budget),
                        start: *start,
                        end: *end,
                        realization,
                    });
                }
                EventFile::Spoof {
                    targets,
                    offset,
                    start,
                    duration,
                } => {
                    let targets: Vec<usize> = targets
                        .iter()
                        .enumerate()
                        .map(|(t, id)| lookup(&mut errs, format!("events[{k}].targets[{t}]"), id))
                        .collect();
                    match SpoofSpec::new(targets, Position::new(offset.clone()), *start, *duration)
                    {
                        Ok(s) => events.push(AttackEvent::Spoof(s)),
                        Err(e) => errs.push(format!("events[{k}]: {e}")),
                    }
                }
            }
        }

        let defaults = ControlOptions::default();
        let c = &self.control;
        let opts = ControlOptions {
            anticipated_budget: c
                .anticipated_budget
                .map_or(defaults.anticipated_budget, RemovalBudget),
            motion_bound: c.motion_bound.unwrap_or(defaults.motion_bound),
            min_separation: c.min_separation.unwrap_or(defaults.min_separation),
            outer_iters: c.outer_iters.unwrap_or(defaults.outer_iters),
            step_size: c.step_size.unwrap_or(defaults.step_size),
            backtrack: c.backtrack.unwrap_or(defaults.backtrack),
            tol: c.tol.unwrap_or(defaults.tol),
            mode: c.mode.unwrap_or(defaults.mode),
            search: c.search.unwrap_or(defaults.search),
            exhaustive_limit: c.exhaustive_limit.unwrap_or(defaults.exhaustive_limit),
            surrogate_scale: c.surrogate_scale.unwrap_or(defaults.surrogate_scale),
        };

        let baseline_policy = match &self.metrics.baseline {
            None => BaselinePolicy::PreEvent,
            Some(BaselineFile::Named(s)) if s == "pre_event" => BaselinePolicy::PreEvent,
            Some(BaselineFile::Named(s)) => {
                errs.push(format!(
                    "metrics.baseline: expected \"pre_event\" or a number, got \"{s}\""
                ));
                BaselinePolicy::PreEvent
            }
            Some(BaselineFile::Fixed(v)) => BaselinePolicy::Fixed(*v),
        };

        let all_profiled = agent_profiles.len() == self.agents.len();
        let link = if profiles.len() == 1 && agent_profiles.len() == self.agents.len() {
            LinkModelConfig::Uniform(agent_profiles[0])
        } else {
            LinkModelConfig::PerAgent(agent_profiles)
        };
        let cfg = ScenarioConfig {
            dimension: self.dimension,
            agents,
            link,
            opts,
            steps: self.steps,
            events,
            rng_seed: self.rng_seed,
            baseline_policy,
            recovery_fraction: self
                .metrics
                .recovery_fraction
                .unwrap_or(DEFAULT_RECOVERY_FRACTION),
            budget_schedule: self
                .budget_schedule
                .iter()
                .map(|b| (b.from, RemovalBudget(b.budget)))
                .collect(),
            metrics_onset: self.metrics.onset,
        };
        // Link-model checks are meaningless while a layer is unresolved.
        errs.extend(
            cfg.validate().into_iter().filter(|e| {
                all_profiled || !(e.starts_with("profiles") || e.starts_with("control"))
            }),
        );
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(errs)
        }
    }
}

pub fn parse_scenario_str(text: &str, path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let file: ScenarioFile = parse_toml(text, path)?;
    file.resolve().map_err(|errors| ConfigError::Invalid {
        path: path.to_path_buf(),
        errors,
    })
}

pub fn parse_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    parse_scenario_str(&read(path)?, path)
}

/// Coupled-game parameter document. The receiver table is given directly
/// or derived from a plant.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GneFile {
    pub cost_attacker: f64,
    pub cost_defender: f64,
    pub sender: PayoffTable,
    pub receiver: Option<PayoffTable>,
    pub plant: Option<PlantSpec>,
    pub damping: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub initial_prior: Option<f64>,
}

impl GneFile {
    pub fn resolve(&self) -> Result<GneParams, Vec<String>> {
        let receiver = match (&self.receiver, &self.plant) {
            (Some(r), None) => *r,
            (None, Some(p)) => match crate::games::physical_utilities(p) {
                Ok(u) => u.receiver_table(),
                Err(e) => return Err(vec![format!("plant: {e}")]),
            },
            _ => {
                return Err(vec![
                    "exactly one of receiver and plant must be given".into()
                ])
            }
        };
        let defaults = GneParams::new(
            self.cost_attacker,
            self.cost_defender,
            self.sender,
            receiver,
        );
        let params = GneParams {
            damping: self.damping.unwrap_or(defaults.damping),
            tol: self.tol.unwrap_or(defaults.tol),
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
            initial_prior: self.initial_prior.unwrap_or(defaults.initial_prior),
            ..defaults
        };
        let errs = params.validate();
        if errs.is_empty() {
            Ok(params)
        } else {
            Err(errs)
        }
    }
}

pub fn parse_gne_str(text: &str, path: &Path) -> Result<GneParams, ConfigError> {
    let file: GneFile = parse_toml(text, path)?;
    file.resolve().map_err(|errors| ConfigError::Invalid {
        path: path.to_path_buf(),
        errors,
    })
}

pub fn parse_gne_params(path: &Path) -> Result<GneParams, ConfigError> {
    parse_gne_str(&read(path)?, path)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedFile {
    Scenario(Box<ScenarioConfig>),
    Gne(GneParams),
}

/// Parses either document kind, told apart by its top-level keys.
pub fn parse_any(path: &Path) -> Result<ParsedFile, ConfigError> {
    let text = read(path)?;
    let table: toml::Table = parse_toml(&text, path)?;
    if table.contains_key("cost_attacker") {
        parse_gne_str(&text, path).map(ParsedFile::Gne)
    } else {
        parse_scenario_str(&text, path).map(|c| ParsedFile::Scenario(Box::new(c)))
    }
}
