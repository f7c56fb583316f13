//! Fixed point of the composed takeover and trust games.
//!
//! The takeover game's control fraction is the trust game's prior; the
//! trust game's expected sender utilities are the assets fought over in the
//! takeover game. The coupled prior is updated with damping until it stops
//! moving.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::flipit::{flipit_equilibrium, FlipItError, FlipItOutcome, FlipItParams};
use super::signaling::{
    signaling_equilibrium, PayoffTable, SignalingError, SignalingOutcome, SignalingParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GneError {
    #[error("invalid coupled-game parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("iteration {iteration}: {source}")]
    FlipIt {
        iteration: usize,
        #[source]
        source: FlipItError,
    },

    #[error("iteration {iteration}: {source}")]
    Signaling {
        iteration: usize,
        #[source]
        source: SignalingError,
    },
}

fn default_damping() -> f64 {
    0.5
}

fn default_tol() -> f64 {
    1e-9
}

fn default_max_iters() -> usize {
    500
}

fn default_initial_prior() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GneParams {
    pub cost_attacker: f64,
    pub cost_defender: f64,
    pub sender: PayoffTable,
    pub receiver: PayoffTable,
    /// Weight of the new control fraction in each update, in (0, 1].
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_initial_prior")]
    pub initial_prior: f64,
}

impl GneParams {
    pub fn new(
        cost_attacker: f64,
        cost_defender: f64,
        sender: PayoffTable,
        receiver: PayoffTable,
    ) -> Self {
        GneParams {
            cost_attacker,
            cost_defender,
            sender,
            receiver,
            damping: default_damping(),
            tol: default_tol(),
            max_iters: default_max_iters(),
            initial_prior: default_initial_prior(),
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            errs.push(format!("damping: must lie in (0, 1], got {}", self.damping));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            errs.push(format!("tol: must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            errs.push("max_iters: must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.initial_prior) {
            errs.push(format!(
                "initial_prior: must lie in [0, 1], got {}",
                self.initial_prior
            ));
        }
        if let Err(e) = self.flipit(0.0, 0.0).validate() {
            errs.push(e.to_string());
        }
        if let Err(e) = self
            .signaling(self.initial_prior.clamp(0.0, 1.0))
            .validate()
        {
            errs.push(e.to_string());
        }
        errs
    }

    fn flipit(&self, value_attacker: f64, value_defender: f64) -> FlipItParams {
        FlipItParams {
            cost_attacker: self.cost_attacker,
            cost_defender: self.cost_defender,
            value_attacker,
            value_defender,
        }
    }

    fn signaling(&self, prior: f64) -> SignalingParams {
        SignalingParams {
            prior,
            sender: self.sender,
            receiver: self.receiver,
        }
    }
}

/// One application of the coupled map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GneIterate {
    pub iteration: usize,
    pub prior: f64,
    pub value_attacker: f64,
    pub value_defender: f64,
    /// Control fraction of the takeover game at these values.
    pub control_fraction: f64,
    pub next_prior: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GneState {
    /// Converged attacker control fraction, also the trust game's prior.
    pub prior: f64,
    pub flipit: FlipItOutcome,
    pub signaling: SignalingOutcome,
    pub value_attacker: f64,
    pub value_defender: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trajectory: Vec<GneIterate>,
}

struct Stage {
    signaling: SignalingOutcome,
    flipit: FlipItOutcome,
    value_attacker: f64,
    value_defender: f64,
}

fn solve_stage(params: &GneParams, prior: f64, iteration: usize) -> Result<Stage, GneError> {
    let signaling = signaling_equilibrium(&params.signaling(prior))
        .map_err(|source| GneError::Signaling { iteration, source })?;
    let value_attacker = signaling.utilities.attacker.max(0.0);
    let value_defender = signaling.utilities.defender.max(0.0);
    let flipit = flipit_equilibrium(&params.flipit(value_attacker, value_defender))
        .map_err(|source| GneError::FlipIt { iteration, source })?;
    Ok(Stage {
        signaling,
        flipit,
        value_attacker,
        value_defender,
    })
}

/// One undamped pass of the coupled map: the takeover game's control
/// fraction given the trust game played at `prior`.
pub fn control_fraction_response(params: &GneParams, prior: f64) -> Result<f64, GneError> {
    Ok(solve_stage(params, prior, 0)?.flipit.control_fraction)
}

/// Damped fixed-point iteration from `initial_prior`.
///
/// Running out of iterations is not an error: the state comes back with
/// `converged == false` and the full trajectory.
pub fn gne_solve(params: &GneParams) -> Result<GneState, GneError> {
    let errs = params.validate();
    if !errs.is_empty() {
        return Err(GneError::InvalidParams(errs));
    }
    let eta = params.damping;
    let mut p = params.initial_prior;
    let mut trajectory = Vec::new();
    let mut converged = false;
    for iteration in 0..params.max_iters {
        let stage = solve_stage(params, p, iteration)?;
        let p_hat = stage.flipit.control_fraction;
        let next = (1.0 - eta) * p + eta * p_hat;
        let residual = (next - p).abs();
        trajectory.push(GneIterate {
            iteration,
            prior: p,
            value_attacker: stage.value_attacker,
            value_defender: stage.value_defender,
            control_fraction: p_hat,
            next_prior: next,
            residual,
        });
        p = next;
        if residual < params.tol {
            converged = true;
            break;
        }
    }
    let stage = solve_stage(params, p, trajectory.len())?;
    Ok(GneState {
        prior: p,
        flipit: stage.flipit,
        signaling: stage.signaling,
        value_attacker: stage.value_attacker,
        value_defender: stage.value_defender,
        residual: trajectory.last().map_or(f64::INFINITY, |t| t.residual),
        iterations: trajectory.len(),
        converged,
        trajectory,
    })
}

/// Re-solves both games against each other's stored output. Returns the
/// largest discrepancy: between the stored prior and the re-solved control
/// fraction, and between stored and re-solved strategies.
pub fn gne_discrepancy(params: &GneParams, state: &GneState) -> Result<f64, GneError> {
    let signaling = signaling_equilibrium(&params.signaling(state.prior)).map_err(|source| {
        GneError::Signaling {
            iteration: 0,
            source,
        }
    })?;
    let flipit = flipit_equilibrium(&params.flipit(state.value_attacker, state.value_defender))
        .map_err(|source| GneError::FlipIt {
            iteration: 0,
            source,
        })?;
    let strategy_gap = signaling
        .send_m1
        .iter()
        .chain(&signaling.trust)
        .zip(state.signaling.send_m1.iter().chain(&state.signaling.trust))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let rate_gap = (flipit.alpha_attacker - state.flipit.alpha_attacker)
        .abs()
        .max((flipit.alpha_defender - state.flipit.alpha_defender).abs());
    Ok(strategy_gap
        .max(rate_gap)
        .max((flipit.control_fraction - state.prior).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::signaling::{ActionPayoffs, MessagePayoffs};

    fn same(trust: f64, reject: f64) -> MessagePayoffs {
        let p = ActionPayoffs { trust, reject };
        MessagePayoffs { m1: p, m2: p }
    }

    fn tables(attacker_gain: f64) -> (PayoffTable, PayoffTable) {
        let sender = PayoffTable {
            attacker: same(attacker_gain, 0.0),
            defender: same(1.0, 0.0),
        };
        let receiver = PayoffTable {
            attacker: same(-5.0, -1.0),
            defender: same(-0.5, -1.0),
        };
        (sender, receiver)
    }

    #[test]
    fn valueless_attack_converges_to_zero() {
        let (s, r) = tables(-1.0);
        let st = gne_solve(&GneParams::new(1.0, 0.1, s, r)).unwrap();
        assert!(st.converged);
        assert!(st.prior < 1e-8);
        assert_eq!(st.flipit.control_fraction, 0.0);
        assert_eq!(st.value_attacker, 0.0);
        assert!(st.signaling.utilities.attacker <= 0.0);
    }

    #[test]
    fn converged_state_is_consistent() {
        let (s, r) = tables(1.0);
        let params = GneParams::new(3.0, 0.1, s, r);
        let st = gne_solve(&params).unwrap();
        assert!(st.converged, "{:?}", st.trajectory.last());
        assert!(st.prior > 0.0 && st.prior < 1.0 / 9.0);
        assert!(gne_discrepancy(&params, &st).unwrap() < 1e-6);
        let replay = control_fraction_response(&params, st.prior).unwrap();
        assert!((replay - st.prior).abs() < 1e-6);
    }

    #[test]
    fn bad_damping_rejected() {
        let (s, r) = tables(1.0);
        let params = GneParams {
            damping: 0.0,
            ..GneParams::new(1.0, 1.0, s, r)
        };
        assert!(matches!(
            gne_solve(&params),
            Err(GneError::InvalidParams(_))
        ));
    }
}
