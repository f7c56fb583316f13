//! Five UAVs on a line, every link a bridge. Three planning steps that
//! anticipate one cut link leave a network no single cut disconnects.

use rescon::adversary::{worst_case_removal, RemovalBudget, SearchMode};
use rescon::controller::{plan_step, ControlOptions};
use rescon::graph::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let link = LinkModel::Uniform(WeightProfile::smooth(100.0));
    let opts = ControlOptions {
        anticipated_budget: RemovalBudget(1),
        motion_bound: 100.0,
        min_separation: 20.0,
        step_size: 50.0,
        outer_iters: 60,
        ..Default::default()
    };
    let mut x: Vec<Position> = (0..5)
        .map(|k| Position::new(vec![90.0 * k as f64, 0.0]))
        .collect();
    let worst = |x: &[Position]| -> Result<f64, Box<dyn std::error::Error>> {
        let g = link.build_graph(x)?;
        Ok(worst_case_removal(&g, RemovalBudget(1), SearchMode::Exhaustive)?.lambda2_after)
    };
    println!("step 0: worst single-cut lambda2 {:.4}", worst(&x)?);
    for step in 1..=3 {
        let plan = plan_step(&x, &link, &opts)?;
        x = plan.targets;
        println!(
            "step {step}: worst single-cut lambda2 {:.4} after {} iterations",
            plan.predicted_worst_lambda2, plan.iterations_used
        );
    }
    for (k, p) in x.iter().enumerate() {
        println!(
            "  uav{k} at ({:7.2}, {:7.2}) m",
            p.coords()[0],
            p.coords()[1]
        );
    }
    Ok(())
}
