//! Receiver payoffs derived from a scalar linear-quadratic plant.
//!
//! The plant `x' = a x + b u` starts at `x = 1` and accrues `q x'^2 + r u^2`
//! per step. Trusting the defender applies the one-step optimal feedback,
//! trusting the attacker applies its constant input, rejecting applies zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::signaling::{ActionPayoffs, MessagePayoffs, PayoffTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlantError {
    #[error("horizon must be at least 1")]
    EmptyHorizon,

    #[error("plant parameter {0} is not finite")]
    NonFinite(&'static str),

    #[error("cost weights q and r must be >= 0")]
    NegativeWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSpec {
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub r: f64,
    pub horizon: usize,
    /// Constant input injected by a trusted attacker.
    pub attack_input: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPayoffs {
    pub trust_attacker: f64,
    pub trust_defender: f64,
    pub reject: f64,
}

impl ControlPayoffs {
    /// Receiver table with these payoffs for either message.
    pub fn receiver_table(&self) -> PayoffTable {
        let row = |trust| {
            let p = ActionPayoffs {
                trust,
                reject: self.reject,
            };
            MessagePayoffs { m1: p, m2: p }
        };
        PayoffTable {
            attacker: row(self.trust_attacker),
            defender: row(self.trust_defender),
        }
    }
}

impl PlantSpec {
    pub fn validate(&self) -> Result<(), PlantError> {
        if self.horizon == 0 {
            return Err(PlantError::EmptyHorizon);
        }
        for (name, v) in [
            ("a", self.a),
            ("b", self.b),
            ("q", self.q),
            ("r", self.r),
            ("attack_input", self.attack_input),
        ] {
            if !v.is_finite() {
                return Err(PlantError::NonFinite(name));
            }
        }
        if self.q < 0.0 || self.r < 0.0 {
            return Err(PlantError::NegativeWeight);
        }
        Ok(())
    }

    /// Minimizer of the next-step cost `q (a x + b u)^2 + r u^2`.
    pub fn one_step_optimal(&self, x: f64) -> f64 {
        let den = self.q * self.b * self.b + self.r;
        if den == 0.0 {
            0.0
        } else {
            -self.a * self.b * self.q * x / den
        }
    }

    /// Accumulated cost of running `policy` for the horizon from `x = 1`.
    pub fn cost(&self, policy: impl Fn(f64) -> f64) -> f64 {
        let mut x = 1.0;
        let mut j = 0.0;
        for _ in 0..self.horizon {
            let u = policy(x);
            x = self.a * x + self.b * u;
            j += self.q * x * x + self.r * u * u;
        }
        j
    }
}

pub fn physical_utilities(plant: &PlantSpec) -> Result<ControlPayoffs, PlantError> {
    plant.validate()?;
    Ok(ControlPayoffs {
        trust_attacker: -plant.cost(|_| plant.attack_input),
        trust_defender: -plant.cost(|x| plant.one_step_optimal(x)),
        reject: -plant.cost(|_| 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(attack_input: f64) -> PlantSpec {
        PlantSpec {
            a: 1.0,
            b: 1.0,
            q: 1.0,
            r: 1.0,
            horizon: 1,
            attack_input,
        }
    }

    #[test]
    fn unit_plant_hand_values() {
        let u = physical_utilities(&unit(1.0)).unwrap();
        assert_eq!(u.trust_attacker, -5.0);
        assert_eq!(u.trust_defender, -0.5);
        assert_eq!(u.reject, -1.0);
    }

    #[test]
    fn mimicking_attacker_is_indistinguishable() {
        let p = PlantSpec {
            horizon: 1,
            ..unit(-0.5)
        };
        let u = physical_utilities(&p).unwrap();
        assert_eq!(u.trust_attacker, u.trust_defender);
    }

    #[test]
    fn zero_weights_give_zero() {
        let p = PlantSpec {
            q: 0.0,
            r: 0.0,
            horizon: 4,
            ..unit(3.0)
        };
        let u = physical_utilities(&p).unwrap();
        assert_eq!([u.trust_attacker, u.trust_defender, u.reject], [0.0; 3]);
    }

    #[test]
    fn empty_horizon_rejected() {
        let p = PlantSpec {
            horizon: 0,
            ..unit(1.0)
        };
        assert_eq!(physical_utilities(&p), Err(PlantError::EmptyHorizon));
    }
}
