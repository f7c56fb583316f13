//! The same planning step solved with global information and with each
//! agent seeing only its one-hop neighborhood.

use rescon::adversary::RemovalBudget;
use rescon::controller::{plan_step, ControlMode, ControlOptions};
use rescon::graph::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let link = LinkModel::Uniform(WeightProfile::smooth(100.0));
    let x: Vec<Position> = [
        [0.0, 0.0],
        [80.0, 0.0],
        [160.0, 0.0],
        [80.0, 70.0],
        [240.0, 20.0],
        [160.0, 80.0],
    ]
    .iter()
    .map(|p| Position::new(p.to_vec()))
    .collect();
    for mode in [ControlMode::Centralized, ControlMode::Decentralized] {
        let opts = ControlOptions {
            anticipated_budget: RemovalBudget(1),
            motion_bound: 40.0,
            min_separation: 15.0,
            step_size: 20.0,
            outer_iters: 40,
            mode,
            ..Default::default()
        };
        let plan = plan_step(&x, &link, &opts)?;
        let moved: f64 = x
            .iter()
            .zip(&plan.targets)
            .map(|(a, b)| a.distance(b))
            .sum();
        println!(
            "{mode:?}: worst single-cut lambda2 {:.4}, {} iterations, total motion {:.1} m",
            plan.predicted_worst_lambda2, plan.iterations_used, moved
        );
    }
    Ok(())
}
