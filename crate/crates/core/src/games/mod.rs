//! Cross-layer defense games: a covert takeover game over a cloud service,
//! a trust game between the service and a device, plant-derived payoffs,
//! and the coupled fixed point of the two games.

pub mod flipit;
pub mod gne;
pub mod physical;
pub mod signaling;

pub use flipit::{
    flipit_control_fraction, flipit_equilibrium, rate_grid, FlipItError, FlipItOutcome,
    FlipItParams,
};
pub use gne::{
    control_fraction_response, gne_discrepancy, gne_solve, GneError, GneIterate, GneParams,
    GneState,
};
pub use physical::{physical_utilities, ControlPayoffs, PlantError, PlantSpec};
pub use signaling::{
    signaling_equilibrium, verify_pbe, ActionPayoffs, EquilibriumClass, MessagePayoffs,
    PayoffTable, SignalingError, SignalingOutcome, SignalingParams,
};
