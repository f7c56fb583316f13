//! Equilibrium move rates of the stealthy-takeover game as the attacker's
//! move cost grows.

use rescon::games::{flipit_equilibrium, FlipItParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>8} {:>10} {:>10} {:>9} {:>8}",
        "c_A", "alpha_A", "alpha_D", "control", "dropout"
    );
    for c_a in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 1e6] {
        let o = flipit_equilibrium(&FlipItParams {
            cost_attacker: c_a,
            cost_defender: 0.1,
            value_attacker: 1.0,
            value_defender: 1.0,
        })?;
        println!(
            "{c_a:>8} {:>10.4} {:>10.4} {:>9.4} {:>8}",
            o.alpha_attacker, o.alpha_defender, o.control_fraction, o.attacker_dropped_out
        );
    }
    Ok(())
}
