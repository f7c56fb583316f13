//! Moving-horizon max-min connectivity control.
//!
//! Each call to [`plan_step`] picks next-step target positions that maximize
//!
//! ```text
//! J(x) = min over removals e with |e| <= m of lambda2(G(x) - e)
//! ```
//!
//! by projected gradient ascent: find the worst removal at the current
//! iterate, differentiate `lambda2` of the attacked graph, and take a
//! backtracking step that must raise `J` itself. Targets stay within the
//! per-step motion bound of the starting positions and keep a minimum
//! pairwise separation.
//!
//! When `J` is zero (the worst removal disconnects the network) its gradient
//! vanishes. The ascent then follows a surrogate: `lambda2` of the attacked
//! graph completed with all out-of-range pairs, weighted by a wider Gaussian
//! (`surrogate_scale` times the link length scale), which pulls the pieces
//! back together until real links form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{
    worst_case_removal_with_limit, AdversaryError, RemovalBudget, SearchMode, WorstCaseResult,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
use crate::graph::{
    algebraic_connectivity, check_positions, gradient_with_decay, lambda2, remove_links, Edge,
    GraphError, LinkModel, Position, WeightedGraph,
};

/// Feasibility slack on motion and separation constraints.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Objective values at or below this count as "disconnected by the attacker".
const PLATEAU: f64 = 1e-12;
const MAX_BACKTRACKS: usize = 40;
/// Line searches give up once the step falls below this fraction of
/// `step_size`.
const MIN_STEP_FRACTION: f64 = 1e-6;
const SEPARATION_ROUNDS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("all agents are coincident")]
    DegenerateStart,

    #[error("invalid control options: {0}")]
    InvalidOptions(String),

    #[error("the controller needs smooth link weights")]
    NotSmooth,

    #[error("{agents} agents but {neighborhoods} neighborhoods")]
    NeighborhoodMismatch { agents: usize, neighborhoods: usize },

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    #[default]
    Centralized,
    Decentralized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlOptions {
    /// Links the planner assumes the attacker can cut.
    pub anticipated_budget: RemovalBudget,
    /// Maximum displacement per step in meters; `f64::INFINITY` is unbounded.
    pub motion_bound: f64,
    /// Minimum pairwise distance in meters.
    pub min_separation: f64,
    pub outer_iters: usize,
    /// Initial line-search step in meters.
    pub step_size: f64,
    /// Step shrink factor per backtrack, in (0, 1).
    pub backtrack: f64,
    /// Required objective increase per meter of step.
    pub tol: f64,
    pub mode: ControlMode,
    /// Attacker search used inside the planner.
    pub search: SearchMode,
    pub exhaustive_limit: u64,
    /// Length-scale multiplier of the surrogate used when `J = 0`.
    pub surrogate_scale: f64,
}

impl Default for ControlOptions {
    fn default() -> Self {
        ControlOptions {
            anticipated_budget: RemovalBudget(1),
            motion_bound: 1.0,
            min_separation: 0.0,
            outer_iters: 50,
            step_size: 1.0,
            backtrack: 0.5,
            tol: 1e-6,
            mode: ControlMode::Centralized,
            search: SearchMode::Auto,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            surrogate_scale: 4.0,
        }
    }
}

impl ControlOptions {
    pub fn validate(&self, link: &LinkModel) -> Result<(), ControlError> {
        let bad = |msg: String| Err(ControlError::InvalidOptions(msg));
        if self.motion_bound.is_nan() || self.motion_bound < 0.0 {
            return bad(format!(
                "motion_bound must be >= 0, got {}",
                self.motion_bound
            ));
        }
        if !(self.min_separation.is_finite() && self.min_separation >= 0.0) {
            return bad(format!(
                "min_separation must be >= 0, got {}",
                self.min_separation
            ));
        }
        if self.outer_iters == 0 {
            return bad("outer_iters must be at least 1".into());
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return bad(format!(
                "step_size must be positive, got {}",
                self.step_size
            ));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad(format!(
                "backtrack must lie in (0, 1), got {}",
                self.backtrack
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.surrogate_scale.is_finite() && self.surrogate_scale >= 1.0) {
            return bad(format!(
                "surrogate_scale must be >= 1, got {}",
                self.surrogate_scale
            ));
        }
        let min_range = match link {
            LinkModel::Uniform(p) => p.range,
            LinkModel::PerAgent(ps) => ps.iter().map(|p| p.range).fold(f64::INFINITY, f64::min),
        };
        if self.min_separation >= min_range {
            return bad(format!(
                "min_separation {} must be below the communication range {}",
                self.min_separation, min_range
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub targets: Vec<Position>,
    /// Worst-case `lambda2` at the targets under the anticipated budget.
    pub predicted_worst_lambda2: f64,
    pub worst_removal: WorstCaseResult,
    /// Outer iterations that moved the configuration.
    pub iterations_used: usize,
}

/// Clamps `proposed` to the ball of radius `bound` around `current`.
pub fn project_motion(current: &Position, proposed: &Position, bound: f64) -> Position {
    let delta = proposed - current;
    let dist = delta.norm();
    if dist <= bound {
        proposed.clone()
    } else {
        current.offset(&delta, bound / dist)
    }
}

/// Agents within two hops of each agent (including itself), ascending.
pub fn neighborhoods(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency_lists();
    (0..g.n())
        .map(|i| {
            let mut hood = vec![i];
            for &j in &adj[i] {
                hood.push(j);
                hood.extend(adj[j].iter().copied());
            }
            hood.sort_unstable();
            hood.dedup();
            hood
        })
        .collect()
}

/// Solves one moving-horizon step from the reported positions.
pub fn plan_step(
    reported: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<PlanResult, ControlError> {
    check_inputs(reported, link, opts)?;
    match opts.mode {
        ControlMode::Centralized => plan_centralized(reported, link, opts),
        ControlMode::Decentralized => {
            let hoods = neighborhoods(&link.build_graph(reported)?);
            plan_step_decentralized(reported, &hoods, link, opts)
        }
    }
}

fn check_inputs(
    reported: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<(), ControlError> {
    if reported.len() < 2 {
        return Err(GraphError::TooFewAgents {
            needed: 2,
            got: reported.len(),
        }
        .into());
    }
    check_positions(reported)?;
    link.validate(reported.len())?;
    if !link.is_smooth() {
        return Err(ControlError::NotSmooth);
    }
    opts.validate(link)?;
    if reported.iter().all(|p| p == &reported[0]) {
        return Err(ControlError::DegenerateStart);
    }
    Ok(())
}

/// Objective value and the data needed to differentiate it.
struct Evaluation {
    graph: WeightedGraph,
    worst: WorstCaseResult,
}

impl Evaluation {
    fn j(&self) -> f64 {
        self.worst.lambda2_after
    }

    fn on_plateau(&self) -> bool {
        self.j() <= PLATEAU
    }
}

fn evaluate(
    positions: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<Evaluation, ControlError> {
    let graph = link.build_graph(positions)?;
    let m = opts.anticipated_budget.m().min(graph.edge_count());
    let worst = worst_case_removal_with_limit(
        &graph,
        RemovalBudget(m),
        opts.search,
        opts.exhaustive_limit,
    )?;
    Ok(Evaluation { graph, worst })
}

/// All pairs except the attacked links, with the widened Gaussian weight.
fn surrogate_graph(
    positions: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
    eval: &Evaluation,
) -> Result<WeightedGraph, ControlError> {
    let n = positions.len();
    let removed: Vec<(usize, usize)> = eval
        .worst
        .removal
        .iter()
        .map(|&k| {
            let e = eval.graph.edges()[k];
            (e.i, e.j)
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if removed.contains(&(i, j)) {
                continue;
            }
            let d = positions[i].distance(&positions[j]);
            let w = (-surrogate_decay(link, opts, i, j) * d * d).exp().min(1.0);
            if w > 0.0 {
                edges.push(Edge { i, j, w });
            }
        }
    }
    Ok(WeightedGraph::new(n, edges)?)
}

fn surrogate_decay(link: &LinkModel, opts: &ControlOptions, i: usize, j: usize) -> f64 {
    link.pair(i, j).decay / (opts.surrogate_scale * opts.surrogate_scale)
}

fn surrogate_value(
    positions: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
    eval: &Evaluation,
) -> Result<f64, ControlError> {
    let g = surrogate_graph(positions, link, opts, eval)?;
    Ok(lambda2(&g)?)
}

/// Raw ascent gradient at `positions`: of `J` when positive, otherwise of
/// the surrogate.
fn ascent_gradient(
    positions: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
    eval: &Evaluation,
) -> Result<Vec<Position>, ControlError> {
    if eval.on_plateau() {
        let g = surrogate_graph(positions, link, opts, eval)?;
        let spectral = algebraic_connectivity(&g)?;
        let grad = gradient_with_decay(positions, &spectral, &g, |i, j| {
            surrogate_decay(link, opts, i, j)
        })?;
        Ok(grad.per_agent)
    } else {
        let attacked = remove_links(&eval.graph, &eval.worst.removal)?;
        let spectral = algebraic_connectivity(&attacked)?;
        Ok(link.gradient(positions, &spectral, &attacked)?.per_agent)
    }
}

/// Gradient the centralized planner ascends from `positions`.
pub fn centralized_gradient(
    positions: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<Vec<Position>, ControlError> {
    check_inputs(positions, link, opts)?;
    let eval = evaluate(positions, link, opts)?;
    ascent_gradient(positions, link, opts, &eval)
}

/// Each agent's gradient component computed from its neighborhood alone.
pub fn decentralized_gradient(
    positions: &[Position],
    hoods: &[Vec<usize>],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<Vec<Position>, ControlError> {
    check_inputs(positions, link, opts)?;
    check_hoods(positions, hoods)?;
    (0..positions.len())
        .map(|i| local_gradient(positions, &hoods[i], i, link, opts))
        .collect()
}

fn check_hoods(positions: &[Position], hoods: &[Vec<usize>]) -> Result<(), ControlError> {
    if hoods.len() != positions.len() {
        return Err(ControlError::NeighborhoodMismatch {
            agents: positions.len(),
            neighborhoods: hoods.len(),
        });
    }
    for (i, h) in hoods.iter().enumerate() {
        if !h.contains(&i) || h.iter().any(|&j| j >= positions.len()) {
            return Err(ControlError::InvalidOptions(format!(
                "neighborhood of agent {i} must contain it and valid agents only"
            )));
        }
    }
    Ok(())
}

fn restrict(link: &LinkModel, nodes: &[usize]) -> LinkModel {
    match link {
        LinkModel::Uniform(p) => LinkModel::Uniform(*p),
        LinkModel::PerAgent(ps) => LinkModel::PerAgent(nodes.iter().map(|&k| ps[k]).collect()),
    }
}

fn local_gradient(
    positions: &[Position],
    hood: &[usize],
    agent: usize,
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<Position, ControlError> {
    let dim = positions[agent].dim();
    if hood.len() < 2 {
        return Ok(Position::zeros(dim));
    }
    let local: Vec<Position> = hood.iter().map(|&k| positions[k].clone()).collect();
    let local_link = restrict(link, hood);
    let me = hood
        .iter()
        .position(|&k| k == agent)
        .expect("hood contains agent");
    let eval = evaluate(&local, &local_link, opts)?;
    let grad = ascent_gradient(&local, &local_link, opts, &eval)?;
    Ok(grad[me].clone())
}

/// Projects each agent onto its motion ball, then pushes apart pairs closer
/// than the separation floor. Returns `None` when both constraints cannot
/// be met together.
fn constrain(
    start: &[Position],
    proposed: &[Position],
    opts: &ControlOptions,
) -> Option<Vec<Position>> {
    let bound = opts.motion_bound;
    let mut x: Vec<Position> = start
        .iter()
        .zip(proposed)
        .map(|(s, p)| project_motion(s, p, bound))
        .collect();
    let dmin = opts.min_separation;
    let n = x.len();
    if dmin > 0.0 {
        for _ in 0..SEPARATION_ROUNDS {
            let mut moved = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = x[i].distance(&x[j]);
                    if d >= dmin {
                        continue;
                    }
                    moved = true;
                    let dir = if d > 0.0 {
                        &(&x[j] - &x[i]) * (1.0 / d)
                    } else {
                        let mut e = Position::zeros(x[i].dim());
                        e.0[0] = 1.0;
                        e
                    };
                    let half = 0.5 * (dmin - d) * (1.0 + 1e-12);
                    x[i] = x[i].offset(&dir, -half);
                    x[j] = x[j].offset(&dir, half);
                }
            }
            for (xi, s) in x.iter_mut().zip(start) {
                *xi = project_motion(s, xi, bound);
            }
            if !moved {
                break;
            }
        }
    }
    is_feasible(start, &x, opts).then_some(x)
}

/// Motion bound holds and no pair ends closer than
/// `min(min_separation, starting distance)`.
pub fn is_feasible(start: &[Position], targets: &[Position], opts: &ControlOptions) -> bool {
    let n = start.len();
    for i in 0..n {
        if start[i].distance(&targets[i]) > opts.motion_bound + FEASIBILITY_TOL {
            return false;
        }
    }
    if opts.min_separation > 0.0 {
        for i in 0..n {
            for j in (i + 1)..n {
                let floor = opts.min_separation.min(start[i].distance(&start[j]));
                if targets[i].distance(&targets[j]) < floor - FEASIBILITY_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// Scales a gradient so the fastest agent moves one unit.
fn normalized(grad: &[Position]) -> Option<Vec<Position>> {
    let scale = grad.iter().map(Position::norm).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    Some(grad.iter().map(|g| g * (1.0 / scale)).collect())
}

fn improves(
    old: &Evaluation,
    old_surrogate: Option<f64>,
    new: &Evaluation,
    new_surrogate: impl FnOnce() -> Result<f64, ControlError>,
    eta: f64,
    tol: f64,
) -> Result<bool, ControlError> {
    if new.j() >= old.j() + tol * eta {
        return Ok(true);
    }
    match old_surrogate {
        Some(s_old) if new.j() >= old.j() => {
            let s_new = new_surrogate()?;
            Ok(s_new > s_old * (1.0 + tol * eta))
        }
        _ => Ok(false),
    }
}

fn plan_centralized(
    start: &[Position],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<PlanResult, ControlError> {
    let mut x = start.to_vec();
    let mut eval = evaluate(&x, link, opts)?;
    let mut iterations = 0;
    for _ in 0..opts.outer_iters {
        let surrogate = if eval.on_plateau() {
            Some(surrogate_value(&x, link, opts, &eval)?)
        } else {
            None
        };
        let Some(dir) = normalized(&ascent_gradient(&x, link, opts, &eval)?) else {
            break;
        };
        let mut eta = opts.step_size;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            if eta < MIN_STEP_FRACTION * opts.step_size {
                break;
            }
            let proposed: Vec<Position> = x
                .iter()
                .zip(&dir)
                .map(|(xi, di)| xi.offset(di, eta))
                .collect();
            if let Some(cand) = constrain(start, &proposed, opts) {
                let cand_eval = evaluate(&cand, link, opts)?;
                let better = improves(
                    &eval,
                    surrogate,
                    &cand_eval,
                    || surrogate_value(&cand, link, opts, &cand_eval),
                    eta,
                    opts.tol,
                )?;
                if better {
                    accepted = Some((cand, cand_eval));
                    break;
                }
            }
            eta *= opts.backtrack;
        }
        match accepted {
            Some((cand, cand_eval)) => {
                x = cand;
                eval = cand_eval;
                iterations += 1;
            }
            None => break,
        }
    }
    Ok(PlanResult {
        targets: x,
        predicted_worst_lambda2: eval.j(),
        worst_removal: eval.worst,
        iterations_used: iterations,
    })
}

/// Decentralized variant of [`plan_step`]: every agent ascends its own
/// neighborhood problem and all agents move synchronously each round.
pub fn plan_step_decentralized(
    reported: &[Position],
    hoods: &[Vec<usize>],
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<PlanResult, ControlError> {
    check_inputs(reported, link, opts)?;
    check_hoods(reported, hoods)?;
    let start = reported;
    let mut x = start.to_vec();
    let mut iterations = 0;
    for _ in 0..opts.outer_iters {
        let mut proposed = x.clone();
        let mut any = false;
        for (i, hood) in hoods.iter().enumerate() {
            if let Some(p) = local_move(start, &x, hood, i, link, opts)? {
                proposed[i] = p;
                any = true;
            }
        }
        if !any {
            break;
        }
        // Synchronous moves can collide; shrink the round until feasible.
        let mut next = None;
        let mut scale = 1.0;
        for _ in 0..10 {
            let trial: Vec<Position> = x
                .iter()
                .zip(&proposed)
                .map(|(a, b)| a.offset(&(b - a), scale))
                .collect();
            if let Some(c) = constrain(start, &trial, opts) {
                next = Some(c);
                break;
            }
            scale *= 0.5;
        }
        match next {
            Some(c) if c != x => {
                x = c;
                iterations += 1;
            }
            _ => break,
        }
    }
    let eval = evaluate(&x, link, opts)?;
    Ok(PlanResult {
        targets: x,
        predicted_worst_lambda2: eval.j(),
        worst_removal: eval.worst,
        iterations_used: iterations,
    })
}

/// One agent's accepted local step, if any.
fn local_move(
    start: &[Position],
    x: &[Position],
    hood: &[usize],
    agent: usize,
    link: &LinkModel,
    opts: &ControlOptions,
) -> Result<Option<Position>, ControlError> {
    if hood.len() < 2 {
        return Ok(None);
    }
    let me = hood
        .iter()
        .position(|&k| k == agent)
        .expect("hood contains agent");
    let local_link = restrict(link, hood);
    let mut local: Vec<Position> = hood.iter().map(|&k| x[k].clone()).collect();
    let eval = evaluate(&local, &local_link, opts)?;
    let grad = ascent_gradient(&local, &local_link, opts, &eval)?;
    let norm = grad[me].norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Ok(None);
    }
    let dir = &grad[me] * (1.0 / norm);
    let surrogate = if eval.on_plateau() {
        Some(surrogate_value(&local, &local_link, opts, &eval)?)
    } else {
        None
    };
    let mut eta = opts.step_size;
    for _ in 0..MAX_BACKTRACKS {
        if eta < MIN_STEP_FRACTION * opts.step_size {
            break;
        }
        let cand = project_motion(
            &start[agent],
            &x[agent].offset(&dir, eta),
            opts.motion_bound,
        );
        if cand != x[agent] {
            local[me] = cand.clone();
            let cand_eval = evaluate(&local, &local_link, opts)?;
            let better = improves(
                &eval,
                surrogate,
                &cand_eval,
                || surrogate_value(&local, &local_link, opts, &cand_eval),
                eta,
                opts.tol,
            )?;
            if better {
                return Ok(Some(cand));
            }
        }
        eta *= opts.backtrack;
    }
    Ok(None)
}
