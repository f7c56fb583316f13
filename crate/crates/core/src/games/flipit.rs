//! Two-player covert takeover game with periodic strategies.
//!
//! Each player moves at a fixed rate with a uniformly random phase; the
//! attacker holds the resource for the long-run fraction `p` of time. Rates
//! are searched on a bounded geometric grid so every returned pair can be
//! checked exhaustively.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Geometric grid points between [`GRID_MIN_RATE`] and the top rate.
pub const GRID_POINTS: usize = 200;
pub const GRID_MIN_RATE: f64 = 1e-4;
const TIE_TOL: f64 = 1e-12;
const MAX_BR_ITERS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlipItError {
    #[error("invalid takeover-game parameters: {0}")]
    InvalidParams(String),

    #[error("best-response dynamics did not settle after {iterations} rounds; last rate pairs {recent:?}")]
    NoPureEquilibrium {
        iterations: usize,
        recent: Vec<(f64, f64)>,
    },
}

/// Costs are per move, values per unit time in control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipItParams {
    pub cost_attacker: f64,
    pub cost_defender: f64,
    pub value_attacker: f64,
    pub value_defender: f64,
}

impl FlipItParams {
    pub fn validate(&self) -> Result<(), FlipItError> {
        let fields = [
            ("cost_attacker", self.cost_attacker),
            ("cost_defender", self.cost_defender),
            ("value_attacker", self.value_attacker),
            ("value_defender", self.value_defender),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(FlipItError::InvalidParams(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.cost_defender <= 0.0 {
            return Err(FlipItError::InvalidParams(
                "cost_defender must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Upper end of the rate grid.
    pub fn max_rate(&self) -> f64 {
        let v = self.value_attacker.max(self.value_defender);
        let c = if self.cost_attacker > 0.0 {
            self.cost_attacker.min(self.cost_defender)
        } else {
            self.cost_defender
        };
        (v / c).max(1.0)
    }

    pub fn attacker_payoff(&self, alpha_a: f64, alpha_d: f64) -> f64 {
        self.value_attacker * flipit_control_fraction(alpha_a, alpha_d)
            - self.cost_attacker * alpha_a
    }

    pub fn defender_payoff(&self, alpha_a: f64, alpha_d: f64) -> f64 {
        self.value_defender * (1.0 - flipit_control_fraction(alpha_a, alpha_d))
            - self.cost_defender * alpha_d
    }

    /// Interior equilibrium of the continuous game, clamped to the grid top.
    fn analytic_candidate(&self) -> (f64, f64) {
        let top = self.max_rate();
        let half_ratio = |v: f64, c: f64| {
            if c > 0.0 {
                (v / (2.0 * c)).min(top)
            } else if v > 0.0 {
                top
            } else {
                0.0
            }
        };
        let a = half_ratio(self.value_attacker, self.cost_attacker);
        let b = half_ratio(self.value_defender, self.cost_defender);
        if a < b {
            (a * a / b, a)
        } else if a > b {
            (b, b * b / a)
        } else {
            (a, b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipItOutcome {
    pub alpha_attacker: f64,
    pub alpha_defender: f64,
    /// Attacker's long-run share of control.
    pub control_fraction: f64,
    pub payoff_attacker: f64,
    pub payoff_defender: f64,
    pub attacker_dropped_out: bool,
}

/// Long-run attacker share of control under periodic play with random phases.
pub fn flipit_control_fraction(alpha_a: f64, alpha_d: f64) -> f64 {
    if alpha_a <= 0.0 {
        0.0
    } else if alpha_d <= 0.0 {
        1.0
    } else if alpha_a <= alpha_d {
        alpha_a / (2.0 * alpha_d)
    } else {
        1.0 - alpha_d / (2.0 * alpha_a)
    }
}

/// Candidate rates for both players: zero, a geometric ladder up to
/// [`FlipItParams::max_rate`], and the analytic equilibrium rates.
pub fn rate_grid(params: &FlipItParams) -> Vec<f64> {
    let top = params.max_rate();
    let ratio = (top / GRID_MIN_RATE).ln() / (GRID_POINTS - 1) as f64;
    let mut grid: Vec<f64> = std::iter::once(0.0)
        .chain((0..GRID_POINTS).map(|k| GRID_MIN_RATE * (ratio * k as f64).exp()))
        .collect();
    grid[GRID_POINTS] = top;
    let (a, d) = params.analytic_candidate();
    grid.extend([a, d].into_iter().filter(|&r| r > 0.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Best grid response; keeps `incumbent` on ties, else the smallest rate.
fn best_response(grid: &[f64], incumbent: f64, payoff: impl Fn(f64) -> f64) -> f64 {
    let mut best = grid[0];
    let mut best_u = payoff(best);
    for &r in &grid[1..] {
        let u = payoff(r);
        if u > best_u + TIE_TOL {
            best = r;
            best_u = u;
        }
    }
    let inc_u = payoff(incumbent);
    if grid.contains(&incumbent) && inc_u >= best_u - TIE_TOL {
        incumbent
    } else {
        best
    }
}

pub fn best_response_attacker(
    params: &FlipItParams,
    grid: &[f64],
    alpha_d: f64,
    incumbent: f64,
) -> f64 {
    best_response(grid, incumbent, |a| params.attacker_payoff(a, alpha_d))
}

pub fn best_response_defender(
    params: &FlipItParams,
    grid: &[f64],
    alpha_a: f64,
    incumbent: f64,
) -> f64 {
    best_response(grid, incumbent, |d| params.defender_payoff(alpha_a, d))
}

fn outcome(params: &FlipItParams, alpha_a: f64, alpha_d: f64, dropped: bool) -> FlipItOutcome {
    FlipItOutcome {
        alpha_attacker: alpha_a,
        alpha_defender: alpha_d,
        control_fraction: flipit_control_fraction(alpha_a, alpha_d),
        payoff_attacker: params.attacker_payoff(alpha_a, alpha_d),
        payoff_defender: params.defender_payoff(alpha_a, alpha_d),
        attacker_dropped_out: dropped,
    }
}

/// Mutual grid best response found by alternating best responses seeded at
/// the analytic equilibrium.
///
/// When no positive attacker rate earns a positive payoff against the
/// defender's response, the attacker stays out: both rates are zero.
pub fn flipit_equilibrium(params: &FlipItParams) -> Result<FlipItOutcome, FlipItError> {
    params.validate()?;
    let grid = rate_grid(params);

    let worthwhile = params.value_attacker > 0.0
        && grid[1..].iter().any(|&a| {
            let d = best_response_defender(params, &grid, a, 0.0);
            params.attacker_payoff(a, d) > 0.0
        });
    if !worthwhile {
        let d = best_response_defender(params, &grid, 0.0, 0.0);
        return Ok(outcome(params, 0.0, d, true));
    }

    let (mut a, mut d) = params.analytic_candidate();
    let mut history = vec![(a, d)];
    for _ in 0..MAX_BR_ITERS {
        let na = best_response_attacker(params, &grid, d, a);
        let nd = best_response_defender(params, &grid, na, d);
        if na == a && nd == d {
            return Ok(outcome(params, a, d, false));
        }
        if history.contains(&(na, nd)) {
            break;
        }
        a = na;
        d = nd;
        history.push((a, d));
    }
    let keep = history.len().saturating_sub(6);
    Err(FlipItError::NoPureEquilibrium {
        iterations: history.len() - 1,
        recent: history.split_off(keep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ca: f64, cd: f64, va: f64, vd: f64) -> FlipItParams {
        FlipItParams {
            cost_attacker: ca,
            cost_defender: cd,
            value_attacker: va,
            value_defender: vd,
        }
    }

    #[test]
    fn control_fraction_cases() {
        assert_eq!(flipit_control_fraction(0.0, 0.0), 0.0);
        assert_eq!(flipit_control_fraction(0.0, 2.0), 0.0);
        assert_eq!(flipit_control_fraction(1.0, 0.0), 1.0);
        assert_eq!(flipit_control_fraction(3.0, 3.0), 0.5);
        assert_eq!(flipit_control_fraction(2.0, 1.0), 0.75);
        assert_eq!(flipit_control_fraction(1.0, 2.0), 0.25);
    }

    #[test]
    fn worthless_asset_means_no_attack() {
        let o = flipit_equilibrium(&params(1.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(o.alpha_attacker, 0.0);
        assert_eq!(o.control_fraction, 0.0);
        assert!(o.attacker_dropped_out);
    }

    #[test]
    fn prohibitive_cost_means_no_attack() {
        let o = flipit_equilibrium(&params(1e6, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(o.alpha_attacker, 0.0);
        assert_eq!(o.control_fraction, 0.0);
        assert_eq!(o.payoff_attacker, 0.0);
    }

    #[test]
    fn symmetric_game_splits_control() {
        let o = flipit_equilibrium(&params(0.5, 0.5, 1.0, 1.0)).unwrap();
        assert_eq!(o.alpha_attacker, o.alpha_defender);
        assert!(o.alpha_attacker > 0.0);
        assert!((o.control_fraction - 0.5).abs() < 0.01);
    }

    #[test]
    fn defender_values_zero_leaves_attacker_in_control() {
        let o = flipit_equilibrium(&params(1.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(o.alpha_defender, 0.0);
        assert_eq!(o.control_fraction, 1.0);
        assert_eq!(o.alpha_attacker, GRID_MIN_RATE);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(flipit_equilibrium(&params(1.0, 0.0, 1.0, 1.0)).is_err());
        assert!(flipit_equilibrium(&params(-1.0, 1.0, 1.0, 1.0)).is_err());
        assert!(flipit_equilibrium(&params(1.0, 1.0, f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn grid_is_sorted_and_bounded() {
        let p = params(0.3, 0.7, 2.0, 1.0);
        let g = rate_grid(&p);
        assert_eq!(g[0], 0.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*g.last().unwrap(), p.max_rate());
    }
}
